"""The almost paracontact metric structure and everything derived from it.

A ``PacStructure`` bundles (phi, xi, eta, g) on one manifold and lazily
caches the derived objects every identity check keeps reusing: the
fundamental form, d(eta), the Levi-Civita connection and its curvature, the
deformation tensor h, the Nijenhuis-type tensors N^(1)..N^(4), the
paraSasakian obstruction P and the *-Ricci tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ad
from .calculus import exterior_derivative, lie_derivative, top_form_pairing
from .errors import (ConstructionFailureError, NullPivotError, SignatureError,
                     StructureError)
from .fields import (DOWN, UP, TensorField, inverse_metric,
                     inverse_metric_fn, lower_axis, norm_squared)
from .manifold import coords_of, same_manifold
from .riemann import (covariant_derivative, levi_civita, ricci_scalar,
                      riemann_curvature)

FRAME_TOL = 1e-10
CHART_TOL = 1e-7


def default_tolerance(manifold) -> float:
    return FRAME_TOL if manifold.backend == "frame" else CHART_TOL


class PacStructure:
    """Quadruple (phi, xi, eta, g) with cached derived tensors."""

    def __init__(self, phi, xi, eta, g, name=""):
        self.manifold = same_manifold(phi, xi, eta, g)
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self.g = g
        self.name = name or self.manifold.name

    @property
    def n(self) -> int:
        return self.manifold.n

    @property
    def dim(self) -> int:
        return self.manifold.dim

    # -- first-layer caches ------------------------------------------------

    @cached_property
    def g_inv(self):
        return inverse_metric(self.g)

    @cached_property
    def F(self):
        """Fundamental 2-form F(X,Y) = g(X, phi Y)."""
        def fn(x):
            return np.einsum("im,mj->ij", self.g.at(x), self.phi.at(x))
        return TensorField(self.manifold, (DOWN, DOWN), fn, "F")

    @cached_property
    def d_eta(self):
        return exterior_derivative(self.eta)

    @cached_property
    def dF(self):
        return exterior_derivative(self.F)

    @cached_property
    def lc(self):
        return levi_civita(self.g)

    @cached_property
    def nabla_xi(self):
        return covariant_derivative(self.lc, self.xi)  # (i, k)

    @cached_property
    def nabla_eta(self):
        return covariant_derivative(self.lc, self.eta)  # (i, j)

    @cached_property
    def nabla_phi(self):
        return covariant_derivative(self.lc, self.phi)  # (r, k, j)

    @cached_property
    def nabla_phi_low(self):
        return lower_axis(self.nabla_phi, self.g, 1, name="nabla_phi_low")

    @cached_property
    def h(self):
        """h = (1/2) Lie_xi(phi), the K-paracontact obstruction."""
        lie = lie_derivative(self.xi, self.phi)
        def fn(x):
            return 0.5 * lie.at(x)
        return TensorField(self.manifold, (UP, DOWN), fn, "h")

    @cached_property
    def h_low(self):
        return lower_axis(self.h, self.g, 0, name="h_low")

    @cached_property
    def lie_xi_g(self):
        return lie_derivative(self.xi, self.g)

    # -- curvature ----------------------------------------------------------

    @cached_property
    def curvature(self):
        return riemann_curvature(self.lc)

    @property
    def R31(self):
        return self.curvature[0]

    @property
    def R40(self):
        return self.curvature[1]

    @cached_property
    def ricci(self):
        ric, scal = ricci_scalar(self.lc, self.g)
        return ric, scal

    @property
    def ric(self):
        return self.ricci[0]

    @property
    def scal(self):
        return self.ricci[1]

    @cached_property
    def star_ricci(self):
        """Ric*_ij = g^ps R_pilk phi^l_j phi^k_s and its trace."""
        r40 = self.R40
        ginv_fn = inverse_metric_fn(self.g)

        def fn(x):
            return np.einsum("ps,pilk,lj,ks->ij", ginv_fn(x), r40.at(x),
                             self.phi.at(x), self.phi.at(x))

        star = TensorField(self.manifold, (DOWN, DOWN), fn, "Ric*")

        def fn_s(x):
            return np.tensordot(star.at(x), ginv_fn(x), axes=([0, 1], [0, 1]))

        return star, TensorField(self.manifold, (), fn_s, "scal*")

    # -- Nijenhuis family ----------------------------------------------------

    @cached_property
    def N_phi(self):
        """[phi,phi] with the phi^2 operator closing the bracket term."""
        man = self.manifold
        c = man.anholonomy

        def fn(x):
            ph = self.phi.at(x)
            dph = self.phi.partials_at(x)  # (m, k, j) = d_m phi^k_j
            t1 = np.einsum("mi,mkj->kij", ph, dph)       # [phi e_i, phi e_j] d-part
            t1 = t1 - np.swapaxes(t1, 1, 2)
            # [phi e_i, e_j]^m = -d_j phi^m_i (+ frame terms)
            b_phi_e = -np.einsum("jmi->mij", dph)
            # [e_i, phi e_j]^m = d_i phi^m_j (+ frame terms)
            b_e_phi = np.einsum("imj->mij", dph)
            if c.any():
                t1 = t1 + np.einsum("ai,bj,kab->kij", ph, ph, c)
                b_phi_e = b_phi_e + np.einsum("ai,maj->mij", ph, c)
                b_e_phi = b_e_phi + np.einsum("bj,mib->mij", ph, c)
            out = t1 - np.einsum("km,mij->kij", ph, b_phi_e + b_e_phi)
            if c.any():
                phi2 = np.einsum("km,mj->kj", ph, ph)
                out = out + np.einsum("km,mij->kij", phi2, c)
            return out

        return TensorField(man, (UP, DOWN, DOWN), fn, "N_phi")

    @cached_property
    def N1(self):
        """N^(1) = N_phi - 2 d(eta) (x) xi, axes (k, i, j)."""
        def fn(x):
            return self.N_phi.at(x) \
                - 2.0 * np.multiply.outer(self.xi.at(x), self.d_eta.at(x))
        return TensorField(self.manifold, (UP, DOWN, DOWN), fn, "N1")

    @cached_property
    def N1_low(self):
        """N^(1)(X,Y,Z) = g(N^(1)(X,Y), Z), axes (i, j, k)."""
        def fn(x):
            return np.einsum("kij,km->ijm", self.N1.at(x), self.g.at(x))
        return TensorField(self.manifold, (DOWN,) * 3, fn, "N1_low")

    @cached_property
    def N2(self):
        """N^(2)(X,Y) = (L_{phi X} eta)Y - (L_{phi Y} eta)X."""
        man = self.manifold
        c = man.anholonomy

        def fn(x):
            ph = self.phi.at(x)
            eta = self.eta.at(x)
            deta = self.eta.partials_at(x)  # (m, j)
            dph = self.phi.partials_at(x)   # (j, m, i)
            t = np.einsum("mi,mj->ij", ph, deta) \
                + np.einsum("m,jmi->ij", eta, dph)
            if c.any():
                t = t - np.einsum("m,ai,maj->ij", eta, ph, c)
            return t - np.swapaxes(t, 0, 1)

        return TensorField(man, (DOWN, DOWN), fn, "N2")

    @cached_property
    def N3(self):
        return lie_derivative(self.xi, self.phi)

    @cached_property
    def N4(self):
        return lie_derivative(self.xi, self.eta)

    # -- paraSasakian obstruction -------------------------------------------

    @cached_property
    def P(self):
        """P_rsi = nab_r phi_si - eta_i g_rs + eta_s g_ri."""
        def fn(x):
            npl = self.nabla_phi_low.at(x)
            g = self.g.at(x)
            eta = self.eta.at(x)
            return npl - np.einsum("i,rs->rsi", eta, g) \
                + np.einsum("s,ri->rsi", eta, g)
        return TensorField(self.manifold, (DOWN,) * 3, fn, "P")

    @cached_property
    def norms(self):
        return {
            "h2": norm_squared(self.h_low, self.g, "|h|^2"),
            "P2": norm_squared(self.P, self.g, "|P|^2"),
            "nabla_phi2": norm_squared(self.nabla_phi_low, self.g, "|nab phi|^2"),
        }

    def p_of_vector(self, X, p):
        """|P(X)|^2 = P_rsi P^rs_j X^i X^j at a point."""
        x = coords_of(p)
        P = ad.values(self.P.at(x))
        gi = ad.values(inverse_metric_fn(self.g)(x))
        PX = np.einsum("rsi,i->rs", P, np.asarray(X, dtype=float))
        return float(np.einsum("rs,ab,ra,sb->", PX, PX, gi, gi))

    # -- convenience ---------------------------------------------------------

    def horizontal(self, v, x):
        """Project a vector into Ker(eta) via phi^2."""
        ph = ad.values(self.phi.at(x))
        return ph @ (ph @ np.asarray(v, dtype=float))

    def tolerance(self):
        return default_tolerance(self.manifold)


# ---------------------------------------------------------------------------
# structure validation


AXIOM_KEYS = ("phi_xi", "eta_phi", "eta_xi", "phi_square", "compatibility",
              "eta_is_g_xi", "g_symmetric")


def validate_structure(s: PacStructure, points, raise_on_signature=True):
    """Max-abs residual per axiom over the given sample points.

    Signature is checked by eigenvalue inertia; a wrong signature rejects the
    structure outright (raise) unless ``raise_on_signature`` is off.
    """
    res = {k: 0.0 for k in AXIOM_KEYS}
    res["signature"] = 0.0
    n = s.n
    eye = np.eye(s.dim)
    for x in np.atleast_2d(points):
        ph = ad.values(s.phi.at(x))
        xi = ad.values(s.xi.at(x))
        eta = ad.values(s.eta.at(x))
        g = ad.values(s.g.at(x))
        res["phi_xi"] = max(res["phi_xi"], np.max(np.abs(ph @ xi)))
        res["eta_phi"] = max(res["eta_phi"], np.max(np.abs(eta @ ph)))
        res["eta_xi"] = max(res["eta_xi"], abs(eta @ xi - 1.0))
        res["phi_square"] = max(res["phi_square"],
                                np.max(np.abs(ph @ ph - (eye - np.outer(xi, eta)))))
        compat = ph.T @ g @ ph + g - np.outer(eta, eta)
        res["compatibility"] = max(res["compatibility"], np.max(np.abs(compat)))
        res["eta_is_g_xi"] = max(res["eta_is_g_xi"], np.max(np.abs(g @ xi - eta)))
        res["g_symmetric"] = max(res["g_symmetric"], np.max(np.abs(g - g.T)))
        ev = np.linalg.eigvalsh(0.5 * (g + g.T))
        pos, neg = int(np.sum(ev > 0)), int(np.sum(ev < 0))
        if (pos, neg) != (n + 1, n):
            res["signature"] = 1.0
            if raise_on_signature:
                raise SignatureError(
                    f"signature ({pos},{neg}) != ({n + 1},{n}) at {x}")
    return res


def build_compatible_metric(phi, xi, eta, G, sample_points, name="g_built"):
    """Compatible metric for an almost paracontact triple from a seed metric G.

    The two-step averaged construction is tried first; whenever it degenerates
    (it does whenever phi happens to be a G-isometry on the horizontal
    distribution) the metric is rebuilt from a null eigenframe pairing, which
    always produces signature (n+1, n).
    """
    man = same_manifold(phi, xi, eta)
    n = man.n

    def gbar_at(x):
        ph = phi.at(x)
        Gx = G.at(x) if isinstance(G, TensorField) else np.asarray(G, dtype=float)
        e = eta.at(x)
        ph2 = ph @ ph
        return ph2.T @ Gx @ ph2 + np.multiply.outer(e, e)

    def candidate_at(x):
        ph = phi.at(x)
        e = eta.at(x)
        gb = gbar_at(x)
        return 0.5 * (gb - ph.T @ gb @ ph + np.multiply.outer(e, e))

    ok = True
    for x in np.atleast_2d(sample_points):
        gx = ad.values(candidate_at(x))
        ev = np.linalg.eigvalsh(0.5 * (gx + gx.T))
        if np.min(np.abs(ev)) < 1e-9 or \
                (int(np.sum(ev > 0)), int(np.sum(ev < 0))) != (n + 1, n):
            ok = False
            break
    if ok:
        return TensorField(man, (DOWN, DOWN), candidate_at, name)

    def paired_at(x):
        ph = phi.at(x)
        xiv = xi.at(x)
        e = eta.at(x)
        gb = gbar_at(x)
        ph2 = ph @ ph
        plus = 0.5 * (ph2 + ph)
        minus = 0.5 * (ph2 - ph)
        u_basis = _gs_columns(plus, gb, n)
        v_basis = _gs_columns(minus, gb, n)
        B = np.column_stack(u_basis + v_basis + [xiv])
        Binv = ad.inv(B)
        gx = np.multiply.outer(e, e) * 0.0
        for a in range(n):
            alpha, beta = Binv[a], Binv[n + a]
            gx = gx + np.multiply.outer(alpha, beta) \
                + np.multiply.outer(beta, alpha)
        return gx + np.multiply.outer(e, e)

    for x in np.atleast_2d(sample_points):
        gx = ad.values(paired_at(x))
        ev = np.linalg.eigvalsh(0.5 * (gx + gx.T))
        if np.min(np.abs(ev)) < 1e-9 or \
                (int(np.sum(ev > 0)), int(np.sum(ev < 0))) != (n + 1, n):
            raise ConstructionFailureError(
                f"no compatible metric from the given seed at {ad.values(x)}")
    return TensorField(man, (DOWN, DOWN), paired_at, name)


def _gs_columns(proj, inner, count):
    """Gram-Schmidt an eigenspace projector's columns w.r.t. ``inner``."""
    dim = proj.shape[0]
    basis = []
    for col in range(dim):
        v = proj[:, col]
        for u in basis:
            v = v - (u @ inner @ v) * u
        q = v @ inner @ v
        if ad.real(q) > 1e-10:
            basis.append(v / ad.sqrt(q))
        if len(basis) == count:
            return basis
    raise ConstructionFailureError("eigenframe pairing found too few directions")


def fundamental_form(s: PacStructure, points, tol=None):
    """F, is_paracontact flag, and the residual report backing it."""
    tol = tol or s.tolerance()
    anti = 0.0
    fdeta = 0.0
    vol = np.inf
    for x in np.atleast_2d(points):
        Fx = ad.values(s.F.at(x))
        anti = max(anti, np.max(np.abs(Fx + Fx.T)))
        fdeta = max(fdeta, np.max(np.abs(Fx - ad.values(s.d_eta.at(x)))))
        vol = min(vol, abs(top_form_pairing(ad.values(s.eta.at(x)), Fx, s.dim)))
    if anti > max(tol, 1e-8):
        raise StructureError(f"fundamental form not antisymmetric ({anti:.2e})")
    return s.F, fdeta < tol, {"antisymmetry": anti, "F_minus_deta": fdeta,
                              "volume_pairing": vol}


def build_phi_basis(s: PacStructure, p, rng):
    """Pseudo-orthonormal basis (X_1, phi X_1, ..., X_n, phi X_n, xi).

    Gram matrix is diag(1, -1, ..., 1, -1, 1); pivot candidates whose squared
    length collapses are resampled up to 32 times before giving up.
    """
    x = coords_of(p)
    ph = ad.values(s.phi.at(x))
    xiv = ad.values(s.xi.at(x))
    etav = ad.values(s.eta.at(x))
    g = ad.values(s.g.at(x))
    pairs = []
    for _ in range(s.n):
        v = _pivot(s, x, ph, xiv, etav, g, pairs, rng)
        pairs.append((v, ph @ v))
    basis = [w for pair in pairs for w in pair] + [xiv]
    signs = [1.0, -1.0] * s.n + [1.0]
    return np.column_stack(basis), np.array(signs)


def _pivot(s, x, ph, xiv, etav, g, pairs, rng):
    for _ in range(32):
        v = rng.standard_normal(s.dim)
        v = v - (etav @ v) * xiv  # off the Reeb direction
        for (u, pu) in pairs:
            v = v - (u @ g @ v) * u + (pu @ g @ v) * pu
        q = v @ g @ v
        if abs(q) < 1e-6:
            continue
        if q < 0:
            v = ph @ v
            q = v @ g @ v
        return v / np.sqrt(q)
    raise NullPivotError(f"no pseudo-unit pivot found at {x}")


def nijenhuis_suite(s: PacStructure):
    return {"N_phi": s.N_phi, "N1": s.N1, "N2": s.N2, "N3": s.N3, "N4": s.N4}


def compute_h(s: PacStructure):
    return s.h, s.h_low


def p_tensor(s: PacStructure):
    return s.P, s.norms


def star_ricci(s: PacStructure):
    return s.star_ricci


def covariant_derivative_phi_checks(s: PacStructure, points):
    """Max residuals of the three nab(phi) identities at the given points.

    "f1" holds on any almost paracontact metric structure; "f2" and "l3" are
    its paracontact reductions and are reported as NaN when the structure is
    not paracontact.
    """
    import math

    from .fields import inverse_metric_fn

    pts = np.atleast_2d(points)
    paracontact = max(np.max(np.abs(ad.values(s.F.at(x))
                                    - ad.values(s.d_eta.at(x))))
                      for x in pts) < max(default_tolerance(s.manifold), 1e-8)
    out = {"f1": 0.0,
           "f2": 0.0 if paracontact else math.nan,
           "l3": 0.0 if paracontact else math.nan}
    eye = np.eye(s.dim)
    for x in pts:
        g = ad.values(s.g.at(x))
        eta = ad.values(s.eta.at(x))
        xi = ad.values(s.xi.at(x))
        ph = ad.values(s.phi.at(x))
        de = ad.values(s.d_eta.at(x))
        nph = ad.values(s.nabla_phi.at(x))
        dF = ad.values(s.dF.at(x))
        N1l = ad.values(s.N1_low.at(x))
        lhs = 2 * np.einsum("xky,kz->xyz", nph, g)
        t_n1 = np.einsum("yzm,mx->xyz", N1l, ph)
        t_de1 = np.einsum("cz,cx->xz", ph, de)
        t_de2 = np.einsum("by,bx->xy", ph, de)
        eta_terms = (-2 * np.einsum("xz,y->xyz", t_de1, eta)
                     + 2 * np.einsum("xy,z->xyz", t_de2, eta))
        f1 = lhs - (-dF - np.einsum("xbc,by,cz->xyz", dF, ph, ph) - t_n1
                    + np.einsum("yz,x->xyz", ad.values(s.N2.at(x)), eta)
                    + eta_terms)
        out["f1"] = max(out["f1"], float(np.max(np.abs(f1))))
        if paracontact:
            f2 = lhs - (-t_n1 + eta_terms)
            out["f2"] = max(out["f2"], float(np.max(np.abs(f2))))
            h = ad.values(s.h.at(x))
            l3 = (np.einsum("rx,sy,rks->kxy", ph, ph, nph)
                  - np.einsum("xky->kxy", nph)
                  - 2 * np.einsum("xy,k->kxy", g, xi)
                  + np.einsum("kx,y->kxy", eye - h + np.outer(xi, eta), eta))
            out["l3"] = max(out["l3"], float(np.max(np.abs(l3))))
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    flags: dict
    residuals: dict
    eta_einstein: tuple | None
    norms: dict
    tolerance: float

    def flag(self, key):
        return self.flags[key]


FLAG_KEYS = ("almost_pac_metric", "paracontact", "K_paracontact",
             "integrable", "normal", "paraSasakian")


def classify(s: PacStructure, points, rng, tol=None) -> ClassificationReport:
    """Compute the flag ladder from residuals at seeded samples."""
    tol = tol or s.tolerance()
    pts = np.atleast_2d(points)
    axioms = validate_structure(s, pts, raise_on_signature=False)
    res = {}
    res["axioms"] = max(v for k, v in axioms.items())
    res["paracontact"] = _max_over(pts, lambda x: np.abs(
        ad.values(s.F.at(x)) - ad.values(s.d_eta.at(x))))
    res["killing"] = _max_over(pts, lambda x: np.abs(ad.values(s.lie_xi_g.at(x))))
    for key, fld in (("N1", s.N1), ("N2", s.N2), ("N3", s.N3), ("N4", s.N4)):
        res[key] = _max_over(pts, lambda x, f=fld: np.abs(ad.values(f.at(x))))
    res["P"] = _max_over(pts, lambda x: np.abs(ad.values(s.P.at(x))))

    # integrability on horizontal samples: N^(1) and the mon-type N^(2) test
    worst = 0.0
    for x in pts:
        n1 = ad.values(s.N1.at(x))
        n2 = ad.values(s.N2.at(x))
        for _ in range(4):
            X = s.horizontal(rng.standard_normal(s.dim), x)
            Y = s.horizontal(rng.standard_normal(s.dim), x)
            worst = max(worst, np.max(np.abs(np.einsum("kij,i,j->k", n1, X, Y))),
                        abs(np.einsum("ij,i,j->", n2, X, Y)))
    res["integrability"] = worst

    flags = {
        "almost_pac_metric": res["axioms"] < tol,
        "paracontact": res["paracontact"] < tol,
    }
    flags["K_paracontact"] = flags["paracontact"] and res["killing"] < tol
    flags["integrable"] = res["integrability"] < tol
    flags["normal"] = all(res[k] < tol for k in ("N1", "N2", "N3", "N4"))
    flags["paraSasakian"] = flags["paracontact"] and res["P"] < tol

    fit = eta_einstein_fit_points(s, pts)
    norms = {k: float(np.mean([ad.values(f.at(x)) for x in pts]))
             for k, f in s.norms.items()}
    norms["scal"] = float(np.mean([ad.values(s.scal.at(x)) for x in pts]))
    norms["scal_star"] = float(np.mean(
        [ad.values(s.star_ricci[1].at(x)) for x in pts]))
    return ClassificationReport(flags, res, fit, norms, tol)


def eta_einstein_fit_points(s: PacStructure, pts):
    """Pointwise least-squares (a, b) for Ric = a g + b eta (x) eta.

    Returns (a, b, max residual, cross-point std); the std operationalizes the
    constancy statement for eta-Einstein structures.
    """
    fits = []
    resid = 0.0
    for x in np.atleast_2d(pts):
        ric = ad.values(s.ric.at(x))
        g = ad.values(s.g.at(x))
        ee = np.outer(ad.values(s.eta.at(x)), ad.values(s.eta.at(x)))
        A = np.array([[np.sum(g * g), np.sum(g * ee)],
                      [np.sum(g * ee), np.sum(ee * ee)]])
        rhs = np.array([np.sum(ric * g), np.sum(ric * ee)])
        ab = np.linalg.solve(A, rhs)
        fits.append(ab)
        resid = max(resid, np.max(np.abs(ric - ab[0] * g - ab[1] * ee)))
    fits = np.asarray(fits)
    a, b = fits.mean(axis=0)
    spread = float(np.max(fits.std(axis=0))) if len(fits) > 1 else 0.0
    return float(a), float(b), float(resid), spread


def _max_over(pts, fn):
    return float(max(np.max(fn(x)) for x in pts))
