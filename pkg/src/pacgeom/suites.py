"""Identity-check registry, suite runner and report emission.

Every check evaluates both sides of one identity independently at seeded
sample points and reports the max-abs residual against a tolerance.  Checks
whose hypotheses an entry does not satisfy report "skipped"; constructors
that must reject inadmissible structures count as passing when they raise
the documented error.

Two checks (l8-f31, l8-f32) implement displayed relations that are mutually
inconsistent with the rest of the verified family (f29, f30, p2) and fail on
every entry satisfying their hypotheses; the corrected forms are checked
alongside them and pass.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ad, zoo
from .calculus import exterior_derivative, lie_bracket, top_form_pairing
from .connections import (canonical_connection, connection_curvature,
                          rho_t_dt, signed_pair_trace, skew_torsion_connection,
                          skew_torsion_form, phi_forms)
from .errors import (DegenerateScaleError, NotKillingError, NotSkewError,
                     PacgeomError, UsageError)
from .fields import DOWN, UP, TensorField, inverse_metric_fn
from .paracontact import (build_compatible_metric, build_phi_basis, classify,
                          default_tolerance, validate_structure)
from .riemann import covariant_derivative, torsion_tensor
from .transforms import (d_homothetic, d_inner, einsteinize,
                         eta_einstein_fit, gauge_data, gauge_transform,
                         sigma_preset, verify_laplacian_law, verify_w1_law)

SUITES = ("axioms", "curvature", "connections", "transforms")


class SkipCheck(Exception):
    """Hypotheses of the identity not met by this entry."""


@dataclass
class CheckReport:
    check_id: str
    paper_ref: str
    manifold: str
    max_abs_residual: float | None
    tolerance: float | None
    points: int
    seed: int
    status: str  # pass | fail | skipped

    @property
    def passed(self):
        return None if self.status == "skipped" else self.status == "pass"

    def as_dict(self):
        return {
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "manifold": self.manifold,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "points": self.points,
            "seed": self.seed,
            "pass": self.passed,
            "status": self.status,
        }


@dataclass(frozen=True)
class Check:
    id: str
    paper_ref: str
    suite: str
    run: object            # ctx -> residual (float)
    tol: float | None = None  # None: backend default
    cap: int | None = None    # cap on sample points for heavy checks


class Context:
    """Shared evaluation state for one (entry, points, seed) run."""

    def __init__(self, entry: zoo.ZooEntry, points: int, seed: int):
        self.entry = entry
        self.s = entry.structure
        self.points = points
        self.seed = seed
        rng = np.random.default_rng([seed, 0])
        self.pts = entry.manifold.sample_points(points, rng)
        self.pts_interior = entry.manifold.sample_points(
            max(4, points // 2), rng, shrink=0.15)

    def rng(self, check_id: str):
        return np.random.default_rng([self.seed, zlib.crc32(check_id.encode())])

    def sample(self, check_id: str, cap=None):
        pts = self.pts if cap is None else self.pts[:cap]
        return pts, self.rng(check_id)

    # shared lazily-computed objects -------------------------------------

    @cached_property
    def classification(self):
        return classify(self.s, self.pts, self.rng("classify"))

    @cached_property
    def is_paracontact(self):
        return self.classification.flags["paracontact"]

    @cached_property
    def is_sasakian(self):
        return self.classification.flags["paraSasakian"]

    @cached_property
    def is_K(self):
        return self.classification.flags["K_paracontact"]

    @cached_property
    def n1_skew(self):
        tol = max(default_tolerance(self.entry.manifold), 1e-8)
        return max(_skew_defect(V(self.s.N1_low, x)) for x in self.pts) < tol

    @cached_property
    def canonical(self):
        return canonical_connection(self.s, strict=False)

    @cached_property
    def canonical_torsion(self):
        return torsion_tensor(self.canonical)

    @cached_property
    def canonical_curv(self):
        return connection_curvature(self.canonical, self.s)

    @cached_property
    def skew(self):
        """Skew-torsion connection or the raised admissibility error."""
        try:
            return skew_torsion_connection(self.s, self.pts)
        except (NotKillingError, NotSkewError) as err:
            return err

    @cached_property
    def skew_forms(self):
        return rho_t_dt(self.skew, self.s)

    @cached_property
    def skew_curv(self):
        return connection_curvature(self.skew, self.s)


def V(fld, x):
    return ad.values(fld.at(x))


def _skew_defect(t):
    alt = (t + np.einsum("ijk->jki", t) + np.einsum("ijk->kij", t)
           - np.einsum("ijk->jik", t) - np.einsum("ijk->ikj", t)
           - np.einsum("ijk->kji", t)) / 6.0
    return float(np.max(np.abs(t - alt)))


def _maxover(pts, fn):
    return float(max(np.max(np.abs(fn(x))) for x in pts))


def _field_resid(ctx, fld, cap=None):
    pts = ctx.pts if cap is None else ctx.pts[:cap]
    return _maxover(pts, lambda x: V(fld, x))


def _need(flag, why):
    if not flag:
        raise SkipCheck(why)


def _bool_residual(ok):
    return 0.0 if ok else 1.0


REGISTRY: list[Check] = []


def check(id, ref, suite, tol=None, cap=None):
    def deco(fn):
        REGISTRY.append(Check(id, ref, suite, fn, tol, cap))
        return fn
    return deco


# ===========================================================================
# axioms suite


@check("axioms-f82", "f82", "axioms")
def _axioms_f82(ctx):
    rep = validate_structure(ctx.s, ctx.pts, raise_on_signature=False)
    return max(rep[k] for k in ("phi_xi", "eta_phi", "eta_xi", "phi_square"))


@check("axioms-con", "con", "axioms")
def _axioms_con(ctx):
    rep = validate_structure(ctx.s, ctx.pts, raise_on_signature=False)
    return max(rep[k] for k in ("compatibility", "eta_is_g_xi", "g_symmetric"))


@check("axioms-signature", "con-signature", "axioms", tol=0.5)
def _axioms_sig(ctx):
    rep = validate_structure(ctx.s, ctx.pts, raise_on_signature=False)
    return rep["signature"]


@check("fund-antisym", "fund", "axioms")
def _fund_antisym(ctx):
    return _maxover(ctx.pts, lambda x: (lambda F: F + F.T)(V(ctx.s.F, x)))


@check("fund-volume", "fund", "axioms", tol=0.5)
def _fund_volume(ctx):
    worst = min(abs(top_form_pairing(V(ctx.s.eta, x), V(ctx.s.F, x),
                                     ctx.s.dim)) for x in ctx.pts)
    return _bool_residual(worst > 1e-10)


def _flag_check(flag):
    def fn(ctx):
        got = ctx.classification.flags[flag]
        want = ctx.entry.expected[flag]
        return _bool_residual(bool(got) == bool(want))
    return fn


for _flag in ("almost_pac_metric", "paracontact", "K_paracontact",
              "integrable", "normal", "paraSasakian"):
    REGISTRY.append(Check(f"classify-{_flag}", "t2/t4/new1", "axioms",
                          _flag_check(_flag), 0.5))


@check("t2-n2-n4", "t2", "axioms")
def _t2_n2n4(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    return max(_field_resid(ctx, ctx.s.N2), _field_resid(ctx, ctx.s.N4))


@check("t2-n3-killing", "t2", "axioms", tol=0.5)
def _t2_n3(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    tol = default_tolerance(ctx.entry.manifold)
    n3 = _field_resid(ctx, ctx.s.N3)
    kil = _field_resid(ctx, ctx.s.lie_xi_g)
    return _bool_residual((n3 < tol) == (kil < tol))


@check("t2-chain", "t2", "axioms")
def _t2_chain(ctx):
    tol = default_tolerance(ctx.entry.manifold)
    _need(_field_resid(ctx, ctx.s.N1) < tol, "N^(1) does not vanish here")
    return max(_field_resid(ctx, ctx.s.N2), _field_resid(ctx, ctx.s.N3),
               _field_resid(ctx, ctx.s.N4))


@check("l2-h-symmetric", "l2", "axioms")
def _l2_sym(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    return _maxover(ctx.pts, lambda x: (lambda H: H - H.T)(V(ctx.s.h_low, x)))


@check("l2-h-anticommute", "l2", "axioms")
def _l2_anti(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    def f(x):
        ph, h = V(ctx.s.phi, x), V(ctx.s.h, x)
        return ph @ h + h @ ph
    return _maxover(ctx.pts, f)


@check("l2-h-trace", "l2", "axioms")
def _l2_trace(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    return _maxover(ctx.pts, lambda x: np.trace(V(ctx.s.h, x)))


@check("l2-h-xi", "l2", "axioms")
def _l2_hxi(ctx):
    return _maxover(ctx.pts, lambda x: V(ctx.s.h, x) @ V(ctx.s.xi, x))


@check("l2-f3", "f3", "axioms")
def _l2_f3(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    def f(x):
        nxi = V(ctx.s.nabla_xi, x)
        ph, h = V(ctx.s.phi, x), V(ctx.s.h, x)
        return nxi - (-ph + ph @ h).T
    return _maxover(ctx.pts, f)


@check("phi-basis-gram", "sec2-phi-basis", "axioms", cap=3)
def _phi_basis(ctx):
    pts, rng = ctx.sample("phi-basis-gram", cap=3)
    worst = 0.0
    for x in pts:
        B, signs = build_phi_basis(ctx.s, x, rng)
        gram = B.T @ V(ctx.s.g, x) @ B
        worst = max(worst, np.max(np.abs(gram - np.diag(signs))))
    return worst


@check("dd-zero", "tensor-core-ddzero", "axioms")
def _dd_zero(ctx):
    man = ctx.entry.manifold
    if man.backend == "chart":
        f = TensorField(man, (), lambda x: ad.sin(x[0]) * x[1] * x[1] + x[2],
                        "probe")
    else:
        f = TensorField(man, (), lambda x: 1.0, "probe")
    ddf = exterior_derivative(exterior_derivative(f))
    ddeta = exterior_derivative(ctx.s.d_eta)
    return max(_field_resid(ctx, ddf), _field_resid(ctx, ddeta))


@check("bracket-jacobi", "tensor-core-jacobi", "axioms", cap=8)
def _jacobi(ctx):
    man = ctx.entry.manifold
    if man.backend == "chart":
        d = man.dim
        X = TensorField(man, (UP,), lambda x: ad.asarray(
            [ad.sin(x[1])] + [x[0] * x[i % d] for i in range(1, d)]), "X")
        Y = TensorField(man, (UP,), lambda x: ad.asarray(
            [x[(i + 1) % d] ** 2 for i in range(d)]), "Y")
        Z = TensorField(man, (UP,), lambda x: ad.asarray(
            [ad.cos(x[0])] + [1.0] * (d - 1)), "Z")
    else:
        cs = np.eye(man.dim)
        X = TensorField(man, (UP,), lambda x: cs[0], "X")
        Y = TensorField(man, (UP,), lambda x: cs[1], "Y")
        Z = TensorField(man, (UP,), lambda x: cs[2], "Z")
    J = lie_bracket(lie_bracket(X, Y), Z)
    K = lie_bracket(lie_bracket(Y, Z), X)
    L = lie_bracket(lie_bracket(Z, X), Y)
    def f(x):
        return V(J, x) + V(K, x) + V(L, x)
    return _maxover(ctx.pts[:8], f)


@check("compatible-metric", "sec2-compatible", "axioms", cap=8)
def _compat_metric(ctx):
    from .paracontact import PacStructure
    pts, _ = ctx.sample("compatible-metric", cap=8)
    s = ctx.s
    built = build_compatible_metric(s.phi, s.xi, s.eta, np.eye(s.dim), pts)
    rebuilt = PacStructure(s.phi, s.xi, s.eta, built,
                           name=f"{s.name}|rebuilt")
    rep = validate_structure(rebuilt, pts, raise_on_signature=False)
    return max(rep.values())


@check("backend-equivalence", "tensor-core-backends", "axioms", tol=1e-7,
       cap=16)
def _backend_equiv(ctx):
    entry = ctx.entry
    _need(entry.twin is not None and entry.frame_map is not None,
          "entry has no frame twin")
    twin = zoo.get_entry(entry.twin)
    pts, _ = ctx.sample("backend-equivalence", cap=16)
    s, st = ctx.s, twin.structure
    x0 = np.zeros(st.dim)
    worst = 0.0
    can_t = connection_curvature(canonical_connection(st, strict=False), st)
    can_s = ctx.canonical_curv
    for x in pts:
        B = entry.frame_map(x)
        Binv = np.linalg.inv(B)
        def to_frame(arr, slots):
            out = np.asarray(arr, dtype=float)
            for axis, sl in enumerate(slots):
                M = Binv if sl == UP else B.T
                out = np.moveaxis(
                    np.tensordot(M if sl == UP else B,
                                 out, axes=([0 if sl == DOWN else 1], [axis])),
                    0, axis)
            return out
        for fld, tfld in ((s.g, st.g), (s.F, st.F), (s.h, st.h),
                          (s.P, st.P), (s.ric, st.ric)):
            worst = max(worst, np.max(np.abs(
                to_frame(V(fld, x), fld.slots) - V(tfld, x0))))
        worst = max(worst, abs(float(V(s.scal, x)) - float(V(st.scal, x0))))
        worst = max(worst, abs(float(V(can_s["w1"], x))
                               - float(V(can_t["w1"], x0))))
    return worst


# ===========================================================================
# curvature suite


@check("lc-metric-compat", "koszul", "curvature")
def _lc_compat(ctx):
    return _field_resid(ctx, covariant_derivative(ctx.s.lc, ctx.s.g), cap=8)


@check("lc-torsion-free", "koszul", "curvature")
def _lc_torsion(ctx):
    return _field_resid(ctx, torsion_tensor(ctx.s.lc), cap=8)


@check("riemann-symmetries", "p1-convention", "curvature", cap=6)
def _riem_sym(ctx):
    def f(x):
        R = V(ctx.s.R40, x)
        return max(np.max(np.abs(R + np.einsum("ijkl->jikl", R))),
                   np.max(np.abs(R + np.einsum("ijkl->ijlk", R))),
                   np.max(np.abs(R - np.einsum("ijkl->klij", R))))
    return _maxover(ctx.pts[:6], f)


@check("bianchi-first", "p1-convention", "curvature", cap=6)
def _bianchi1(ctx):
    def f(x):
        R = V(ctx.s.R31, x)
        return R + np.einsum("lijk->ljki", R) + np.einsum("lijk->lkij", R)
    return _maxover(ctx.pts[:6], f)


@check("bianchi-second", "p1-convention", "curvature", cap=4)
def _bianchi2(ctx):
    nR = covariant_derivative(ctx.s.lc, ctx.s.R31)
    return _maxover(ctx.pts[:4], lambda x: _second_bianchi(V(nR, x)))


def _second_bianchi(D):
    # cyclic sum over (m, i, j) of nab_m R^l_ijk; D axes are (m, l, i, j, k)
    return D + np.einsum("iljmk->mlijk", D) + np.einsum("jlmik->mlijk", D)


@check("f9", "f9", "curvature", cap=8)
def _f9(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    s = ctx.s
    def f(x):
        xi = V(s.xi, x)
        return float(xi @ V(s.ric, x) @ xi
                     - (-2 * s.n + float(V(s.norms["h2"], x))))
    return _maxover(ctx.pts[:8], f)


def _coord_bundle(s, x):
    gi = ad.values(inverse_metric_fn(s.g)(x))
    return dict(g=V(s.g, x), gi=gi, eta=V(s.eta, x), xi=V(s.xi, x),
                ph=V(s.phi, x), h=V(s.h, x), hl=V(s.h_low, x), F=V(s.F, x),
                de=V(s.d_eta, x), ne=V(s.nabla_eta, x), nxi=V(s.nabla_xi, x),
                nph=V(s.nabla_phi, x), npl=V(s.nabla_phi_low, x))


def _paracontact_pointwise(ctx, fn, cap=6):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    s = ctx.s
    worst = 0.0
    for x in ctx.pts[:cap]:
        worst = max(worst, float(np.max(np.abs(fn(s, x, _coord_bundle(s, x))))))
    return worst


@check("f12-div-phi", "f12", "curvature")
def _f12a(ctx):
    return _paracontact_pointwise(ctx, lambda s, x, b: np.einsum(
        "rrj->j", b["nph"]) - 2 * s.n * b["eta"])


@check("f12-xi-nabla-phi", "f12", "curvature")
def _f12b(ctx):
    return _paracontact_pointwise(ctx, lambda s, x, b: np.einsum(
        "r,rkj->kj", b["xi"], b["nph"]))


@check("f12-nabla-eta-phiphi", "f12", "curvature")
def _f12c(ctx):
    return _paracontact_pointwise(ctx, lambda s, x, b: np.einsum(
        "rs,ri,sj->ij", b["ne"], b["ph"], b["ph"]) - b["ne"].T)


@check("f101-symmetry", "f101", "curvature")
def _f101(ctx):
    def fn(s, x, b):
        A = np.einsum("ri,rj->ij", b["ne"], b["ph"])
        B = np.einsum("ir,rj->ij", b["ne"], b["ph"])
        return max(np.max(np.abs(A - A.T)), np.max(np.abs(B - B.T)))
    return _paracontact_pointwise(ctx, fn)


@check("f13", "f13", "curvature")
def _f13(ctx):
    return _paracontact_pointwise(ctx, lambda s, x, b: b["ne"] - (
        b["F"] + np.einsum("ir,rj->ij", b["F"], b["h"])))


@check("f14", "f14", "curvature")
def _f14(ctx):
    def fn(s, x, b):
        lhs = np.einsum("ri,sj,rs->ij", b["ne"], b["ne"], b["gi"])
        return lhs - (-b["g"] + np.outer(b["eta"], b["eta"]) - 2 * b["hl"]
                      - np.einsum("ir,rj->ij", b["hl"], b["h"]))
    return _paracontact_pointwise(ctx, fn)


@check("f15", "f15", "curvature")
def _f15(ctx):
    def fn(s, x, b):
        R4 = V(s.R40, x)
        lhs = np.einsum("irsj,r,s->ij", R4, b["xi"], b["xi"]) \
            - np.einsum("arsb,r,s,ai,bj->ij", R4, b["xi"], b["xi"],
                        b["ph"], b["ph"])
        return lhs - (-2 * b["g"] + 2 * np.outer(b["eta"], b["eta"])
                      + 2 * np.einsum("ir,rj->ij", b["hl"], b["h"]))
    return _paracontact_pointwise(ctx, fn)


@check("f16", "f16", "curvature", cap=4)
def _f16(ctx):
    s = ctx.s
    nnxi = covariant_derivative(s.lc, s.nabla_xi)
    nne = covariant_derivative(s.lc, s.nabla_eta)
    def fn(s, x, b):
        lhs = V(s.ric, x) @ b["xi"]
        mid = np.einsum("rjr->j", V(nnxi, x))
        rhs = np.einsum("rs,rsj->j", b["gi"], V(nne, x)) - 4 * s.n * b["eta"]
        return max(np.max(np.abs(lhs - mid)), np.max(np.abs(lhs - rhs)))
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("f17", "f17", "curvature", cap=4)
def _f17(ctx):
    s = ctx.s
    nnF = covariant_derivative(s.lc, s.nabla_phi_low)
    def fn(s, x, b):
        boxF = np.einsum("ra,raks->ks", b["gi"], V(nnF, x))
        lhs = np.einsum("sj,ks->jk", b["ph"], boxF) \
            + np.einsum("sk,js->jk", b["ph"], boxF)
        rx = V(s.ric, x) @ b["xi"]
        rhs = (2 * np.einsum("rsj,ra,sb,abk->jk", b["npl"], b["gi"], b["gi"],
                             b["npl"])
               - np.outer(rx, b["eta"]) - np.outer(b["eta"], rx)
               + 2 * np.einsum("jr,rk->jk", b["hl"], b["h"]) + 4 * b["hl"]
               + 2 * b["g"] - 2 * (4 * s.n + 1) * np.outer(b["eta"], b["eta"]))
        return lhs - rhs
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("l6-f19", "f19", "curvature")
def _f19(ctx):
    def fn(s, x, b):
        P = V(s.P, x)
        lhs = np.einsum("rsi,ra,sb,abj->ij", P, b["gi"], b["gi"], P)
        rhs = np.einsum("rsi,ra,sb,abj->ij", b["npl"], b["gi"], b["gi"],
                        b["npl"]) + 2 * b["hl"] - b["g"] \
            - (2 * s.n - 1) * np.outer(b["eta"], b["eta"])
        return lhs - rhs
    return _paracontact_pointwise(ctx, fn)


@check("l7-f20", "f20", "curvature", cap=4)
def _f20(ctx):
    def fn(s, x, b):
        P = V(s.P, x)
        rstar = V(s.star_ricci[0], x)
        ric = V(s.ric, x)
        PP = np.einsum("rsi,ra,sb,abj->ij", P, b["gi"], b["gi"], P)
        rhs = (-ric + np.einsum("rs,ri,sj->ij", ric, b["ph"], b["ph"])
               - 2 * (2 * s.n - 1) * b["g"]
               + 2 * (s.n - 1) * np.outer(b["eta"], b["eta"]) + PP
               + np.einsum("ir,rj->ij", b["hl"], b["h"]))
        return rstar + rstar.T - rhs
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("f25", "f25", "curvature")
def _f25(ctx):
    def fn(s, x, b):
        PXi = np.einsum("rsi,i->rs", V(s.P, x), b["xi"])
        val = np.einsum("rs,ab,ra,sb->", PXi, PXi, b["gi"], b["gi"])
        return val - float(V(s.norms["h2"], x))
    return _paracontact_pointwise(ctx, fn)


@check("c2-pnorm", "c2", "curvature")
def _c2_pnorm(ctx):
    def fn(s, x, b):
        return float(V(s.norms["P2"], x)) \
            - (float(V(s.norms["nabla_phi2"], x)) - 4 * s.n)
    return _paracontact_pointwise(ctx, fn)


@check("c2-f27", "f27", "curvature", cap=4)
def _f27(ctx):
    def fn(s, x, b):
        scal = float(V(s.scal, x))
        sstar = float(V(s.star_ricci[1], x))
        return scal + sstar + 4 * s.n ** 2 \
            - (float(V(s.norms["h2"], x))
               + 0.5 * float(V(s.norms["nabla_phi2"], x)) - 2 * s.n)
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("c2-sasakian", "c2", "curvature", cap=4)
def _c2_sas(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    s = ctx.s
    def f(x):
        return float(V(s.scal, x)) + float(V(s.star_ricci[1], x)) \
            + 4.0 * s.n ** 2
    return _maxover(ctx.pts[:4], f)


@check("p1-f7", "f7", "curvature", cap=4)
def _f7(ctx):
    s = ctx.s
    nh = covariant_derivative(s.lc, s.h)
    def fn(s, x, b):
        M = np.einsum("lijk,i,k->lj", V(s.R31, x), b["xi"], b["xi"])
        lhs = np.einsum("r,rkj->kj", b["xi"], V(nh, x))
        return lhs - (-b["ph"] + (b["h"] @ b["h"]) @ b["ph"] + b["ph"] @ M)
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("p1-f8", "f8", "curvature", cap=4)
def _f8(ctx):
    def fn(s, x, b):
        M = np.einsum("lijk,i,k->lj", V(s.R31, x), b["xi"], b["xi"])
        return M + b["ph"] @ M @ b["ph"] - 2 * (b["ph"] @ b["ph"]) \
            + 2 * (b["h"] @ b["h"])
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("p2", "p2", "curvature", cap=6)
def _p2(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    s = ctx.s
    eye = np.eye(s.dim)
    def f(x):
        lhs = np.einsum("lijk,k->lij", V(s.R31, x), V(s.xi, x))
        eta = V(s.eta, x)
        return lhs - (np.einsum("i,lj->lij", eta, eye)
                      - np.einsum("j,li->lij", eta, eye))
    return _maxover(ctx.pts[:6], f)


@check("t4-f6", "f6", "curvature", cap=8)
def _t4(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    return _t4_value(ctx)


def _t4_value(ctx, cap=8):
    s = ctx.s
    pts, rng = ctx.sample("t4-f6", cap=cap)
    worst = 0.0
    for x in pts:
        b = _coord_bundle(s, x)
        for _ in range(8):
            X = rng.standard_normal(s.dim)
            Y = rng.standard_normal(s.dim)
            lhs = np.einsum("rkj,r,j->k", b["nph"], X, Y)
            expr = lhs + (X @ b["g"] @ Y) * b["xi"] - (b["eta"] @ Y) * X
            worst = max(worst, np.max(np.abs(expr)))
    return worst


@check("t4-witness", "f6", "curvature", tol=0.5, cap=8)
def _t4_witness(ctx):
    _need(ctx.is_paracontact and not ctx.is_sasakian,
          "needs a paracontact non-paraSasakian entry")
    return _bool_residual(_t4_value(ctx) >= 0.1)


@check("l3", "l3", "curvature", cap=6)
def _l3(ctx):
    def fn(s, x, b):
        eye = np.eye(s.dim)
        lhs = np.einsum("rx,sy,rks->kxy", b["ph"], b["ph"], b["nph"]) \
            - np.einsum("xky->kxy", b["nph"])
        rhs = (2 * np.einsum("xy,k->kxy", b["g"], b["xi"])
               - np.einsum("kx,y->kxy",
                           eye - b["h"] + np.outer(b["xi"], b["eta"]),
                           b["eta"]))
        return lhs - rhs
    return _paracontact_pointwise(ctx, fn, cap=6)


def _f1_terms(s, x, b):
    dF = V(s.dF, x)
    N1l = V(s.N1_low, x)
    lhs = 2 * np.einsum("xky,kz->xyz", b["nph"], b["g"])
    t_n1 = np.einsum("yzm,mx->xyz", N1l, b["ph"])
    t_de1 = np.einsum("cz,cx->xz", b["ph"], b["de"])
    t_de2 = np.einsum("by,bx->xy", b["ph"], b["de"])
    return lhs, dF, t_n1, t_de1, t_de2


@check("l1-f1", "f1", "curvature", cap=4)
def _f1(ctx):
    s = ctx.s
    worst = 0.0
    for x in ctx.pts[:4]:
        b = _coord_bundle(s, x)
        lhs, dF, t_n1, t_de1, t_de2 = _f1_terms(s, x, b)
        rhs = (-dF - np.einsum("xbc,by,cz->xyz", dF, b["ph"], b["ph"]) - t_n1
               + np.einsum("yz,x->xyz", V(s.N2, x), b["eta"])
               - 2 * np.einsum("xz,y->xyz", t_de1, b["eta"])
               + 2 * np.einsum("xy,z->xyz", t_de2, b["eta"]))
        worst = max(worst, np.max(np.abs(lhs - rhs)))
    return worst


@check("l1-f2", "f2", "curvature", cap=4)
def _f2(ctx):
    def fn(s, x, b):
        lhs, dF, t_n1, t_de1, t_de2 = _f1_terms(s, x, b)
        rhs = (-t_n1 - 2 * np.einsum("xz,y->xyz", t_de1, b["eta"])
               + 2 * np.einsum("xy,z->xyz", t_de2, b["eta"]))
        return lhs - rhs
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("l4-f10", "f10", "curvature", cap=4)
def _f10(ctx):
    s = ctx.s
    phih = TensorField(s.manifold, (UP, DOWN),
                       lambda xx: s.phi.at(xx) @ s.h.at(xx), "phi.h")
    nphih = covariant_derivative(s.lc, phih)
    def fn(s, x, b):
        R4x = np.einsum("axyz,a->xyz", V(s.R40, x), b["xi"])
        G1 = np.einsum("xk,ykz->xyz", b["g"], V(nphih, x))
        return R4x - (-b["npl"] + G1 - np.einsum("xzy->xyz", G1))
    return _paracontact_pointwise(ctx, fn, cap=4)


@check("l4-f11", "f11", "curvature", cap=4)
def _f11(ctx):
    def fn(s, x, b):
        R4x = np.einsum("axyz,a->xyz", V(s.R40, x), b["xi"])
        T2 = np.einsum("xbc,by,cz->xyz", R4x, b["ph"], b["ph"])
        T3 = np.einsum("abz,ax,by->xyz", R4x, b["ph"], b["ph"])
        T4 = np.einsum("ayc,ax,cz->xyz", R4x, b["ph"], b["ph"])
        A = np.eye(s.dim) - b["h"]
        M2 = np.einsum("rx,rz->xz", A, b["g"])
        rhs = (-2 * np.einsum("rx,ryz->xyz", b["h"], b["npl"])
               + 2 * np.einsum("xz,y->xyz", M2, b["eta"])
               - 2 * np.einsum("xy,z->xyz", M2, b["eta"]))
        return R4x + T2 - T3 - T4 - rhs
    return _paracontact_pointwise(ctx, fn, cap=4)


def _sasakian_pointwise(ctx, fn, cap=4):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    s = ctx.s
    worst = 0.0
    for x in ctx.pts[:cap]:
        worst = max(worst, float(np.max(np.abs(fn(s, x, _coord_bundle(s, x))))))
    return worst


@check("l8-f29", "f29", "curvature", cap=4)
def _f29(ctx):
    def fn(s, x, b):
        R4 = V(s.R40, x)
        lhs = np.einsum("xymw,mz->xyzw", R4, b["ph"]) \
            + np.einsum("xyzm,mw->xyzw", R4, b["ph"])
        de, g = b["de"], b["g"]
        rhs = (-np.einsum("xw,yz->xyzw", de, g)
               + np.einsum("xz,yw->xyzw", de, g)
               - np.einsum("yz,xw->xyzw", de, g)
               + np.einsum("yw,xz->xyzw", de, g))
        return lhs - rhs
    return _sasakian_pointwise(ctx, fn)


@check("l8-f30", "f30", "curvature", cap=4)
def _f30(ctx):
    def fn(s, x, b):
        R4 = V(s.R40, x)
        ph, eta, g = b["ph"], b["eta"], b["g"]
        lhs = np.einsum("abcd,ax,by,cz,dw->xyzw", R4, ph, ph, ph, ph) - R4
        rhs = (np.einsum("x,w,yz->xyzw", eta, eta, g)
               + np.einsum("y,z,xw->xyzw", eta, eta, g)
               - np.einsum("y,w,xz->xyzw", eta, eta, g)
               - np.einsum("x,z,yw->xyzw", eta, eta, g))
        return lhs - rhs
    return _sasakian_pointwise(ctx, fn)


def _f31_value(ctx, horizontal):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    s = ctx.s
    pts, rng = ctx.sample("l8-f31", cap=4)
    worst = 0.0
    for x in pts:
        b = _coord_bundle(s, x)
        R4 = V(s.R40, x)
        def RR(a2, b2, c2, d2):
            return np.einsum("ijkl,i,j,k,l->", R4, a2, b2, c2, d2)
        for _ in range(6):
            X = rng.standard_normal(s.dim)
            Y = rng.standard_normal(s.dim)
            if horizontal:
                X, Y = s.horizontal(X, x), s.horizontal(Y, x)
            pX, pY = b["ph"] @ X, b["ph"] @ Y
            lv = RR(X, pX, Y, pY)
            rv = (-RR(X, Y, X, Y) + RR(X, pY, X, pY)
                  + (b["eta"] @ X) * (b["eta"] @ Y) * (X @ b["g"] @ Y)
                  + 2.0 * ((X @ b["de"] @ Y) ** 2 - (X @ b["g"] @ Y) ** 2
                           + (X @ b["g"] @ X) * (Y @ b["g"] @ Y)))
            worst = max(worst, abs(lv - rv))
    return worst


@check("l8-f31", "f31", "curvature", cap=4)
def _f31(ctx):
    # displayed form; inconsistent off the horizontal distribution
    return _f31_value(ctx, horizontal=False)


@check("l8-f31-horizontal", "f31 (horizontal)", "curvature", cap=4)
def _f31h(ctx):
    return _f31_value(ctx, horizontal=True)


@check("l8-f32", "f32", "curvature", cap=4)
def _f32(ctx):
    # displayed form; f30 + p2 force the left side to vanish instead
    def fn(s, x, b):
        ric = V(s.ric, x)
        return ric @ b["ph"] + b["ph"].T @ ric + b["de"]
    return _sasakian_pointwise(ctx, fn)


@check("l8-f32-corrected", "f32 (corrected: rhs 0)", "curvature", cap=4)
def _f32c(ctx):
    def fn(s, x, b):
        ric = V(s.ric, x)
        return ric @ b["ph"] + b["ph"].T @ ric
    return _sasakian_pointwise(ctx, fn)


@check("l10-ric-trace", "l10", "curvature", cap=4)
def _l10r1(ctx):
    def fn(s, x, b):
        R4 = V(s.R40, x)
        lhs = 0.5 * np.einsum("xcad,cy,db,ab->xy", R4, b["ph"], b["ph"],
                              b["gi"]) - (2 * s.n - 1) * b["g"] \
            - np.outer(b["eta"], b["eta"])
        return V(s.ric, x) - lhs
    return _sasakian_pointwise(ctx, fn)


@check("l10-ric-phiphi", "l10", "curvature", cap=4)
def _l10r2(ctx):
    def fn(s, x, b):
        ric = V(s.ric, x)
        return b["ph"].T @ ric @ b["ph"] + ric \
            + 2 * s.n * np.outer(b["eta"], b["eta"])
    return _sasakian_pointwise(ctx, fn)


@check("l10-nabla-ric", "l10", "curvature", cap=3)
def _l10r3(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    s = ctx.s
    nric = covariant_derivative(s.lc, s.ric)
    worst = 0.0
    for x in ctx.pts[:3]:
        b = _coord_bundle(s, x)
        D = V(nric, x)
        ric = V(s.ric, x)
        phTg = b["ph"].T @ b["g"]
        t2 = np.einsum("baz,by,ax->xyz", D, b["ph"], b["ph"])
        t3 = np.einsum("by,bz->yz", b["ph"], ric)
        t4 = b["ph"].T @ ric
        rhs = (D - t2 - np.einsum("x,yz->xyz", b["eta"], t3)
               - 2 * np.einsum("y,xz->xyz", b["eta"], t4)
               - 2 * s.n * np.einsum("x,yz->xyz", b["eta"], phTg)
               - 4 * s.n * np.einsum("y,xz->xyz", b["eta"], phTg))
        worst = max(worst, np.max(np.abs(np.einsum("zxy->xyz", D) - rhs)))
    return worst


@check("delta-eta", "l2-corollary", "curvature", cap=8)
def _delta_eta(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    s = ctx.s
    def f(x):
        b = _coord_bundle(s, x)
        return abs(np.einsum("ij,ij->", b["gi"], b["ne"]))
    return _maxover(ctx.pts[:8], f)


@check("sectional-xi", "t9-operator", "curvature", cap=4)
def _sectional(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    from .riemann import sectional_curvature
    s = ctx.s
    pts, rng = ctx.sample("sectional-xi", cap=4)
    worst = 0.0
    for x in pts:
        xi = V(s.xi, x)
        for _ in range(4):
            X = s.horizontal(rng.standard_normal(s.dim), x)
            gXX = X @ V(s.g, x) @ X
            if abs(gXX) < 1e-6:
                continue
            K = sectional_curvature(s.g, s.R40, xi, X, x)
            worst = max(worst, abs(K + 1.0))
    return worst


# ===========================================================================
# connections suite


def _need_paracontact_conn(ctx):
    _need(ctx.is_paracontact, "canonical connection needs a paracontact entry")


@check("p6-nabla-g", "tnweb", "connections", cap=6)
def _p6g(ctx):
    _need_paracontact_conn(ctx)
    return _field_resid(ctx, covariant_derivative(ctx.canonical, ctx.s.g),
                        cap=6)


@check("p6-nabla-eta", "tnweb", "connections", cap=6)
def _p6eta(ctx):
    _need_paracontact_conn(ctx)
    return _field_resid(ctx, covariant_derivative(ctx.canonical, ctx.s.eta),
                        cap=6)


@check("p6-nabla-xi", "tnweb", "connections", cap=6)
def _p6xi(ctx):
    _need_paracontact_conn(ctx)
    return _field_resid(ctx, covariant_derivative(ctx.canonical, ctx.s.xi),
                        cap=6)


@check("tprtw-torsion", "tprtw", "connections", cap=6)
def _tprtw(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    def f(x):
        b = _coord_bundle(s, x)
        phh = b["ph"] @ b["h"]
        formula = (np.einsum("i,kj->kij", b["eta"], phh)
                   - np.einsum("j,ki->kij", b["eta"], phh)
                   + 2 * np.einsum("ij,k->kij", b["F"], b["xi"]))
        return V(ctx.canonical_torsion, x) - formula
    return _maxover(ctx.pts[:6], f)


@check("p6-nabla-phi", "tnweb", "connections", cap=6)
def _p6phi(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    nphi_c = covariant_derivative(ctx.canonical, s.phi)
    def f(x):
        b = _coord_bundle(s, x)
        A = np.eye(s.dim) - b["h"]
        rhs = (b["nph"] + np.einsum("rx,ry,k->xky", A, b["g"], b["xi"])
               - np.einsum("y,kx->xky", b["eta"], A))
        return V(nphi_c, x) - rhs
    return _maxover(ctx.pts[:6], f)


@check("p6-torsion-xi-phi", "tnweb", "connections", cap=6)
def _p6tphi(ctx):
    _need_paracontact_conn(ctx)
    def f(x):
        Tc = V(ctx.canonical_torsion, x)
        xi, ph = V(ctx.s.xi, x), V(ctx.s.phi, x)
        Txi = np.einsum("kij,i->kj", Tc, xi)
        return Txi @ ph + ph @ Txi
    return _maxover(ctx.pts[:6], f)


@check("p6-torsion-horizontal", "tnweb", "connections", cap=6)
def _p6th(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    pts, rng = ctx.sample("p6-torsion-horizontal", cap=6)
    worst = 0.0
    for x in pts:
        Tc = V(ctx.canonical_torsion, x)
        de, xi = V(s.d_eta, x), V(s.xi, x)
        for _ in range(4):
            X = s.horizontal(rng.standard_normal(s.dim), x)
            Y = s.horizontal(rng.standard_normal(s.dim), x)
            worst = max(worst, np.max(np.abs(
                np.einsum("kij,i,j->k", Tc, X, Y) - 2 * (X @ de @ Y) * xi)))
    return worst


@check("f59", "f59", "connections", cap=3)
def _f59(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    r31c = ctx.canonical_curv["R31"]
    worst = 0.0
    for x in ctx.pts[:3]:
        b = _coord_bundle(s, x)
        R31v = V(s.R31, x)
        t_a = np.einsum("sijk,s->ijk", R31v, b["eta"])
        t_b = np.einsum("lijs,s->lij", R31v, b["xi"])
        pnx = np.einsum("ls,js->lj", b["ph"], b["nxi"])
        nep = np.einsum("is,sk->ik", b["ne"], b["ph"])
        formula = (R31v
                   + np.einsum("ilk,j->lijk", b["nph"], b["eta"])
                   - np.einsum("jlk,i->lijk", b["nph"], b["eta"])
                   + 2 * np.einsum("ij,lk->lijk", b["F"], b["ph"])
                   - np.einsum("lj,i,k->lijk", pnx, b["eta"], b["eta"])
                   + np.einsum("li,j,k->lijk", pnx, b["eta"], b["eta"])
                   + np.einsum("l,ik,j->lijk", b["xi"], nep, b["eta"])
                   - np.einsum("l,jk,i->lijk", b["xi"], nep, b["eta"])
                   - np.einsum("l,ijk->lijk", b["xi"], t_a)
                   - np.einsum("k,lij->lijk", b["eta"], t_b)
                   + np.einsum("jk,il->lijk", b["ne"], b["nxi"])
                   - np.einsum("ik,jl->lijk", b["ne"], b["nxi"]))
        worst = max(worst, np.max(np.abs(V(r31c, x) - formula)))
    return worst


@check("f59-ricci", "f59", "connections", cap=4)
def _f59ric(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    ric_c = ctx.canonical_curv["ric"]
    def f(x):
        b = _coord_bundle(s, x)
        ric = V(s.ric, x)
        R4 = V(s.R40, x)
        formula = (ric - 2 * b["g"] + 2 * np.outer(b["eta"], b["eta"])
                   - np.einsum("k,js,s->jk", b["eta"], ric, b["xi"])
                   - np.einsum("jsrk,s,r->jk", R4, b["xi"], b["xi"])
                   - np.einsum("rk,jr->jk", b["ne"], b["nxi"]))
        return V(ric_c, x) - formula
    return _maxover(ctx.pts[:4], f)


@check("ric-tilde-xi-xi", "f59", "connections", cap=6)
def _ric_xixi(ctx):
    _need_paracontact_conn(ctx)
    ric_c = ctx.canonical_curv["ric"]
    def f(x):
        xi = V(ctx.s.xi, x)
        return xi @ V(ric_c, x) @ xi
    return _maxover(ctx.pts[:6], f)


@check("f60", "f60", "connections", cap=6)
def _f60(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    w1 = ctx.canonical_curv["w1"]
    def f(x):
        xi = V(s.xi, x)
        return float(V(w1, x)) - (float(V(s.scal, x))
                                  - float(xi @ V(s.ric, x) @ xi) - 4 * s.n)
    return _maxover(ctx.pts[:6], f)


@check("t13", "t13", "connections", tol=0.5, cap=6)
def _t13(ctx):
    _need_paracontact_conn(ctx)
    tol = default_tolerance(ctx.entry.manifold)
    nphi_c = covariant_derivative(ctx.canonical, ctx.s.phi)
    resid = _field_resid(ctx, nphi_c, cap=6)
    integrable = ctx.classification.flags["integrable"]
    return _bool_residual((resid < max(tol, 1e-8)) == integrable)


@check("t13-witness", "t13", "connections", tol=0.5, cap=6)
def _t13_witness(ctx):
    _need(not ctx.classification.flags["integrable"],
          "needs a non-integrable entry")
    nphi_c = covariant_derivative(ctx.canonical, ctx.s.phi)
    resid = _field_resid(ctx, nphi_c, cap=6)
    return _bool_residual(resid > 10 * default_tolerance(ctx.entry.manifold))


@check("parsas-f84", "f84", "connections", cap=6)
def _f84(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    def f(x):
        b = _coord_bundle(s, x)
        Ttl = np.einsum("kij,km->ijm", V(ctx.canonical_torsion, x), b["g"])
        lhs = np.einsum("i,ijk->jk", b["xi"], Ttl)
        return lhs - 0.5 * (b["ne"] + b["ne"].T)
    return _maxover(ctx.pts[:6], f)


@check("parsas-iff", "parsas", "connections", tol=0.5, cap=6)
def _parsas(ctx):
    _need_paracontact_conn(ctx)
    s = ctx.s
    tol = max(default_tolerance(ctx.entry.manifold), 1e-8)
    worst = 0.0
    for x in ctx.pts[:6]:
        Tc = V(ctx.canonical_torsion, x)
        lhs = np.einsum("kij,km,i->jm", Tc, V(s.g, x), V(s.xi, x))
        worst = max(worst, np.max(np.abs(lhs)))
    return _bool_residual((worst < tol) == ctx.is_sasakian)


@check("p3-f35", "f35", "connections", cap=4)
def _f35(ctx):
    s = ctx.s
    forms = phi_forms(s)
    def f(x):
        N1l = V(s.N1_low, x)
        ph = V(s.phi, x)
        rhs = -(np.einsum("xym,mz->xyz", N1l, ph)
                + np.einsum("yzm,mx->xyz", N1l, ph)
                + np.einsum("zxm,my->xyz", N1l, ph))
        return V(forms["dF_minus"], x) - rhs
    return _maxover(ctx.pts[:4], f)


@check("p3-f36", "f36", "connections", cap=4)
def _f36(ctx):
    s = ctx.s
    def f(x):
        N1l = V(s.N1_low, x)
        ph, eta, xi = V(s.phi, x), V(s.eta, x), V(s.xi, x)
        M1 = np.einsum("abz,b->az", N1l, xi)
        M2 = np.einsum("abz,a->bz", N1l, xi)
        rhs = (np.einsum("abz,ax,by->xyz", N1l, ph, ph)
               + np.einsum("y,xz->xyz", eta, M1)
               + np.einsum("x,yz->xyz", eta, M2))
        return N1l - rhs
    return _maxover(ctx.pts[:4], f)


@check("p3-f37", "f37", "connections", cap=4)
def _f37(ctx):
    s = ctx.s
    def f(x):
        b = _coord_bundle(s, x)
        rhs = (np.einsum("ax,aky->kxy", b["ph"], b["nph"])
               - np.einsum("ay,akx->kxy", b["ph"], b["nph"])
               + np.einsum("xka,ay->kxy", b["nph"], b["ph"])
               - np.einsum("yka,ax->kxy", b["nph"], b["ph"])
               - np.einsum("x,yk->kxy", b["eta"], b["nxi"])
               + np.einsum("y,xk->kxy", b["eta"], b["nxi"]))
        return V(s.N1, x) - rhs
    return _maxover(ctx.pts[:4], f)


@check("t10-skew-connection", "t10", "connections", cap=6)
def _t10(ctx):
    if isinstance(ctx.skew, PacgeomError):
        kil = _field_resid(ctx, ctx.s.lie_xi_g)
        tol = max(default_tolerance(ctx.entry.manifold), 1e-8)
        want_killing_error = kil > tol
        got_killing = isinstance(ctx.skew, NotKillingError)
        return _bool_residual(want_killing_error == got_killing)
    s = ctx.s
    worst = 0.0
    for fld in (s.g, s.eta, s.phi):
        worst = max(worst,
                    _field_resid(ctx, covariant_derivative(ctx.skew, fld),
                                 cap=6))
    for x in ctx.pts[:6]:
        Tv = V(ctx.skew.torsion3, x)
        worst = max(worst, _skew_defect(Tv))
        worst = max(worst, np.max(np.abs(
            np.einsum("i,ijk->jk", V(s.xi, x), Tv) - 2 * V(s.d_eta, x))))
    return worst


@check("t11-torsion", "t11", "connections", cap=6)
def _t11(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    from .calculus import wedge_1_2
    s = ctx.s
    w = wedge_1_2(s.eta, s.d_eta)
    def f(x):
        return V(ctx.skew.torsion3, x) - 2 * V(w, x)
    return _maxover(ctx.pts[:6], f)


@check("t11-parallel-torsion", "t11", "connections", cap=4)
def _t11p(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    nT = covariant_derivative(ctx.skew, ctx.skew.torsion3)
    return _field_resid(ctx, nT, cap=4)


@check("t11-reduction", "t11", "connections", cap=4)
def _t11r(ctx):
    tol = default_tolerance(ctx.entry.manifold)
    _need(_field_resid(ctx, ctx.s.N1) < tol, "needs N^(1) = 0")
    _need(_field_resid(ctx, ctx.s.dF) < tol, "needs dF = 0")
    from .calculus import wedge_1_2
    s = ctx.s
    T = skew_torsion_form(s)
    w = wedge_1_2(s.eta, s.d_eta)
    forms = phi_forms(s)
    def f(x):
        return max(np.max(np.abs(V(T, x) - 2 * V(w, x))),
                   np.max(np.abs(V(forms["dF_phi"], x))))
    return _maxover(ctx.pts[:4], f)


@check("l9-f38", "f38", "connections", cap=6)
def _f38(ctx):
    _need(ctx.n1_skew, "needs totally skew N^(1)")
    s = ctx.s
    def f(x):
        xi = V(s.xi, x)
        return max(np.max(np.abs(xi @ V(s.nabla_xi, x))),
                   np.max(np.abs(xi @ V(s.d_eta, x))))
    return _maxover(ctx.pts[:6], f)


@check("l9-f39", "f39", "connections", cap=6)
def _f39(ctx):
    _need(ctx.n1_skew, "needs totally skew N^(1)")
    s = ctx.s
    def f(x):
        b = _coord_bundle(s, x)
        M = np.einsum("ab,ax,by->xy", b["ne"], b["ph"], b["ph"])
        return b["ne"] + b["ne"].T + M + M.T
    return _maxover(ctx.pts[:6], f)


@check("l9-f40", "f40", "connections", cap=6)
def _f40(ctx):
    _need(ctx.n1_skew, "needs totally skew N^(1)")
    s = ctx.s
    def f(x):
        N1l, N2v = V(s.N1_low, x), V(s.N2, x)
        ph, xi = V(s.phi, x), V(s.xi, x)
        dF = V(s.dF, x)
        lhs1 = np.einsum("aym,ax,m->xy", N1l, ph, xi)
        lhs2 = np.einsum("xbm,by,m->xy", N1l, ph, xi)
        dFxi = np.einsum("xym,m->xy", dF, xi)
        dFpp = np.einsum("abm,ax,by,m->xy", dF, ph, ph, xi)
        return max(np.max(np.abs(lhs1 - lhs2)), np.max(np.abs(lhs1 + N2v)),
                   np.max(np.abs(lhs1 - dFxi)), np.max(np.abs(lhs1 - dFpp)))
    return _maxover(ctx.pts[:6], f)


@check("t10-uniqueness-probe", "t10", "connections", tol=0.5, cap=4)
def _t10u(ctx):
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    rng = ctx.rng("t10-uniqueness-probe")
    delta = rng.standard_normal((s.dim,) * 3)
    delta = (delta + np.einsum("ijk->jki", delta) + np.einsum("ijk->kij", delta)
             - np.einsum("ijk->jik", delta) - np.einsum("ijk->ikj", delta)
             - np.einsum("ijk->kji", delta)) / 6.0
    delta *= 1e-3 / np.max(np.abs(delta))
    perturbed = skew_torsion_connection(s, ctx.pts, perturbation=delta)
    broken = 0.0
    for fld in (s.g, s.eta, s.phi):
        broken = max(broken, _field_resid(
            ctx, covariant_derivative(perturbed, fld), cap=4))
    return _bool_residual(broken >= 1e-4)


@check("f44", "f44", "connections", cap=3)
def _f44(ctx):
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    forms = ctx.skew_forms
    ric_b = ctx.skew_curv["ric"]
    nbt = covariant_derivative(ctx.skew, forms["t"])
    def f(x):
        return V(forms["rho"], x) - (
            np.einsum("am,mb->ab", V(ric_b, x), V(s.phi, x))
            + V(nbt, x) + 0.5 * V(forms["dt"], x))
    return _maxover(ctx.pts[:3], f)


@check("f45", "f45", "connections", cap=3)
def _f45(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    forms = ctx.skew_forms
    ric_b = ctx.skew_curv["ric"]
    def f(x):
        g, eta = V(s.g, x), V(s.eta, x)
        return np.einsum("am,mb->ab", V(forms["rho"], x), V(s.phi, x)) \
            - (V(ric_b, x) + 4 * (s.n - 1) * (g - np.outer(eta, eta)))
    return _maxover(ctx.pts[:3], f)


@check("f45-dt", "p5", "connections", cap=3)
def _f45dt(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    forms = ctx.skew_forms
    def f(x):
        return V(forms["dt"], x) - 8 * (s.n - 1) * V(s.F, x)
    return _maxover(ctx.pts[:3], f)


@check("f45-nabla-t", "p5", "connections", cap=3)
def _f45nt(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    nbt = covariant_derivative(ctx.skew, ctx.skew_forms["t"])
    return _field_resid(ctx, nbt, cap=3)


@check("f46-consistency", "f46", "connections", tol=0.5, cap=3)
def _f46(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    rho_max = _field_resid(ctx, ctx.skew_forms["rho"], cap=3)
    def f(x):
        g, eta = V(s.g, x), V(s.eta, x)
        return V(s.ric, x) - (-2 * (2 * s.n - 1) * g
                              + 2 * (s.n - 1) * np.outer(eta, eta))
    cond_max = _maxover(ctx.pts[:3], f)
    tol = max(default_tolerance(ctx.entry.manifold), 1e-8)
    return _bool_residual((rho_max < tol) == (cond_max < tol))


@check("rho-basis-independence", "f41", "connections", tol=1e-8, cap=2)
def _rho_basis(ctx):
    _need(not isinstance(ctx.skew, PacgeomError), "skew connection rejected")
    s = ctx.s
    r40b = ctx.skew_curv["R40"]
    rho = ctx.skew_forms["rho"]
    pts, rng = ctx.sample("rho-basis-independence", cap=2)
    worst = 0.0
    for x in pts:
        R4v = V(r40b, x)
        direct = V(rho, x)
        for _ in range(2):
            worst = max(worst, np.max(np.abs(
                signed_pair_trace(s, R4v, x, rng) - direct)))
    return worst


# ===========================================================================
# transforms suite


@check("gauge-identity", "l11", "transforms", cap=4)
def _gauge_id(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    s = ctx.s
    st = gauge_transform(s, sigma_preset(ctx.entry.manifold, "one"))
    worst = 0.0
    for x in ctx.pts[:4]:
        for a, bfld in ((st.phi, s.phi), (st.xi, s.xi), (st.eta, s.eta),
                        (st.g, s.g)):
            worst = max(worst, np.max(np.abs(V(a, x) - V(bfld, x))))
    return worst


def _gauge_sigma(ctx):
    if ctx.entry.manifold.backend == "frame":
        return sigma_preset(ctx.entry.manifold, "const:2")
    return sigma_preset(ctx.entry.manifold, "exp-bump")


@check("gauge-valid", "l11", "transforms", cap=4)
def _gauge_valid(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    st = gauge_transform(ctx.s, _gauge_sigma(ctx))
    rep = validate_structure(st, ctx.pts_interior[:4],
                             raise_on_signature=False)
    worst = max(rep.values())
    return max(worst, _maxover(ctx.pts_interior[:4],
                               lambda x: V(st.F, x) - V(st.d_eta, x)))


@check("gauge-star-f56-f58", "f56/f57/f58", "transforms", cap=4)
def _gauge_f5x(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    s = ctx.s
    sig = _gauge_sigma(ctx)
    st = gauge_transform(s, sig)
    gd = gauge_data(s, sig)
    worst = 0.0
    pts, rng = ctx.sample("gauge-star-f56-f58", cap=4)
    for x in ctx.pts_interior[:4]:
        sg = float(V(sig, x))
        z = V(gd.zeta, x)
        eta, xiv, ph = V(s.eta, x), V(s.xi, x), V(s.phi, x)
        gi = ad.values(inverse_metric_fn(s.g)(x))
        gi_t = ad.values(inverse_metric_fn(st.g)(x))
        xi_t, ph_t = V(st.xi, x), V(st.phi, x)
        worst = max(worst, np.max(np.abs(xi_t - (xiv + z) / sg)))  # f56
        worst = max(worst, np.max(np.abs(
            np.einsum("kb,jb->jk", gi_t, ph_t)
            - np.einsum("kb,jb->jk", gi, ph) / sg)))               # f57
        worst = max(worst, np.max(np.abs(
            sg * (gi_t - np.outer(xi_t, xi_t))
            - (gi - np.outer(xiv, xiv)))))                          # f58
        worst = max(worst, abs(eta @ z))                            # zeta in D
        ds = ad.values(sig.partials_at(x))
        worst = max(worst, abs(xi_t @ ds - (xiv @ ds) / sg))        # xi~ sigma
        for _ in range(3):
            X = s.horizontal(rng.standard_normal(s.dim), x)
            worst = max(worst, np.max(np.abs(ph_t @ X - ph @ X)))   # (*)
    return worst


@check("gauge-roundtrip", "l11", "transforms", cap=3)
def _gauge_rt(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    s = ctx.s
    sig = _gauge_sigma(ctx)
    st = gauge_transform(s, sig)
    inv_sig = TensorField(ctx.entry.manifold, (),
                          lambda x: 1.0 / sig.at(x), "1/sigma")
    back = gauge_transform(st, inv_sig)
    worst = 0.0
    for x in ctx.pts_interior[:3]:
        for a, bfld in ((back.phi, s.phi), (back.xi, s.xi), (back.eta, s.eta),
                        (back.g, s.g)):
            worst = max(worst, np.max(np.abs(V(a, x) - V(bfld, x))))
    return worst


@check("lap-norm", "sec4-lap", "transforms", cap=6)
def _lapnorm(ctx):
    man = ctx.entry.manifold
    _need(man.backend == "chart", "needs coordinate functions")
    s = ctx.s
    f = TensorField(man, (), lambda x: ad.sin(x[0]) + x[1] * x[2], "probe-f")
    inner = d_inner(s, f, f)
    ginv = inverse_metric_fn(s.g)
    def g(x):
        df = ad.values(f.partials_at(x))
        xiv = V(s.xi, x)
        full = df @ ginv(x) @ df
        return float(V(inner, x)) - (full - (xiv @ df) ** 2)
    return _maxover(ctx.pts[:6], g)


@check("f61-w1-law", "f61", "transforms", tol=1e-4, cap=6)
def _f61(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    _need(ctx.entry.manifold.backend == "chart",
          "constant gauges make the law trivial on frames")
    return verify_w1_law(ctx.s, sigma_preset(ctx.entry.manifold, "exp-bump"),
                         ctx.pts_interior[:6])


@check("f69-laplacian-law", "f69", "transforms", tol=1e-5, cap=6)
def _f69(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    _need(ctx.entry.manifold.backend == "chart",
          "constant gauges make the law trivial on frames")
    man = ctx.entry.manifold
    f = TensorField(man, (), lambda x: x[1] * x[1], "y^2")
    return verify_laplacian_law(ctx.s, sigma_preset(man, "exp-bump"), f,
                                ctx.pts_interior[:6])


@check("gauge-const-homothety", "sec4-homo", "transforms", cap=3)
def _gauge_const(ctx):
    _need(ctx.is_paracontact, "gauge needs a paracontact entry")
    s = ctx.s
    st = gauge_transform(s, sigma_preset(ctx.entry.manifold, "const:2"))
    sh = d_homothetic(s, 2.0)
    worst = 0.0
    for x in ctx.pts[:3]:
        for a, bfld in ((st.phi, sh.phi), (st.xi, sh.xi), (st.eta, sh.eta),
                        (st.g, sh.g)):
            worst = max(worst, np.max(np.abs(V(a, x) - V(bfld, x))))
    return worst


@check("dhom-identity", "t12", "transforms", cap=3)
def _dhom_id(ctx):
    s = ctx.s
    sb = d_homothetic(s, 1.0)
    worst = 0.0
    for x in ctx.pts[:3]:
        for a, bfld in ((sb.phi, s.phi), (sb.xi, s.xi), (sb.eta, s.eta),
                        (sb.g, s.g)):
            worst = max(worst, np.max(np.abs(V(a, x) - V(bfld, x))))
    return worst


@check("dhom-composition", "t12", "transforms", cap=3)
def _dhom_comp(ctx):
    s = ctx.s
    s23 = d_homothetic(d_homothetic(s, 2.0), 3.0)
    s6 = d_homothetic(s, 6.0)
    worst = 0.0
    for x in ctx.pts[:3]:
        for a, bfld in ((s23.phi, s6.phi), (s23.xi, s6.xi), (s23.eta, s6.eta),
                        (s23.g, s6.g)):
            worst = max(worst, np.max(np.abs(V(a, x) - V(bfld, x))))
    return worst


@check("dhom-paracontact", "t12", "transforms", cap=4)
def _dhom_pc(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    sb = d_homothetic(ctx.s, 2.0)
    rep = validate_structure(sb, ctx.pts[:4], raise_on_signature=False)
    worst = max(rep.values())
    return max(worst, _maxover(ctx.pts[:4],
                               lambda x: V(sb.F, x) - V(sb.d_eta, x)))


@check("f48", "f48", "transforms", cap=4)
def _f48(ctx):
    _need(ctx.is_paracontact, "needs a paracontact entry")
    s = ctx.s
    alpha = 2.0
    beta = alpha * (alpha - 1)
    sb = d_homothetic(s, alpha)
    def f(x):
        gi_b = ad.values(inverse_metric_fn(sb.g)(x))
        gi = ad.values(inverse_metric_fn(s.g)(x))
        xiv = V(s.xi, x)
        return gi_b - (gi / alpha
                       - beta / (alpha * (alpha + beta)) * np.outer(xiv, xiv))
    return _maxover(ctx.pts[:4], f)


@check("f53", "f53", "transforms", cap=4)
def _f53(ctx):
    _need(ctx.is_K, "needs a K-paracontact entry")
    s = ctx.s
    alpha = 2.0
    beta = alpha * (alpha - 1)
    sb = d_homothetic(s, alpha)
    def f(x):
        ric_b, ric = V(sb.ric, x), V(s.ric, x)
        g, eta = V(s.g, x), V(s.eta, x)
        rhs = ric + 2 * beta / alpha * g \
            - 2 * beta / alpha ** 2 * ((2 * s.n + 1) * alpha + s.n * beta) \
            * np.outer(eta, eta)
        return ric_b - rhs
    return _maxover(ctx.pts[:4], f)


@check("f54", "f54", "transforms", tol=1e-6, cap=4)
def _f54(ctx):
    _need(ctx.is_K, "needs a K-paracontact entry")
    s = ctx.s
    worst = 0.0
    for alpha in (0.5, 2.0, 3.0):
        beta = alpha * (alpha - 1)
        sb = d_homothetic(s, alpha)
        for x in ctx.pts[:4]:
            scal0 = float(V(s.scal, x))
            scalb = float(V(sb.scal, x))
            worst = max(worst,
                        abs(scalb - (scal0 / alpha
                                     + 2 * s.n * beta / alpha ** 2)))
    return worst


@check("t12-flags", "t12", "transforms", tol=0.5, cap=6)
def _t12flags(ctx):
    _need(ctx.is_K, "needs a K-paracontact entry")
    sb = d_homothetic(ctx.s, 2.0)
    rep = classify(sb, ctx.pts[:6], ctx.rng("t12-flags"))
    ok = rep.flags["K_paracontact"] == ctx.classification.flags["K_paracontact"] \
        and rep.flags["paraSasakian"] == ctx.classification.flags["paraSasakian"]
    return _bool_residual(ok)


@check("f80-f81", "f80/f81", "transforms", tol=1e-6, cap=8)
def _f8081(ctx):
    _need(ctx.is_K, "needs a K-paracontact entry")
    fit = eta_einstein_fit(ctx.s, ctx.pts[:8])
    _need(fit is not None, "entry is not eta-Einstein")
    return max(fit["checks"].values())


@check("t15-constancy", "t15", "transforms", tol=1e-6, cap=8)
def _t15(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    fit = eta_einstein_fit(ctx.s, ctx.pts[:8])
    _need(fit is not None, "entry is not eta-Einstein")
    return max(fit["residual"], fit["spread"])


@check("f90", "f90", "transforms", tol=1e-6, cap=6)
def _f90(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    fit0 = eta_einstein_fit(ctx.s, ctx.pts[:6])
    _need(fit0 is not None, "entry is not eta-Einstein")
    sb = d_homothetic(ctx.s, 2.0)
    fit = eta_einstein_fit(sb, ctx.pts[:6])
    _need(fit is not None, "deformed entry lost the eta-Einstein fit")
    return max(fit["checks"]["a_closed_form"], fit["checks"]["b_closed_form"])


@check("einsteinize", "t12iii", "transforms", tol=1e-5, cap=6)
def _einsteinize(ctx):
    _need(ctx.is_sasakian, "needs a paraSasakian entry")
    try:
        alpha, sb = einsteinize(ctx.s, ctx.pts[:6])
    except DegenerateScaleError:
        fit = eta_einstein_fit(ctx.s, ctx.pts[:6])
        # rejection is correct exactly when scal sits at 2n
        return _bool_residual(abs(fit["scal"] - 2 * ctx.s.n) <= 1e-6)
    n = ctx.s.n
    worst = 0.0
    for x in ctx.pts[:6]:
        worst = max(worst, abs(float(V(sb.scal, x)) + 2 * n * (2 * n + 1)))
        worst = max(worst, np.max(np.abs(V(sb.ric, x) + 2 * n * V(sb.g, x))))
    return worst


# ===========================================================================
# runner


def default_check_tolerance(chk: Check, entry) -> float:
    if chk.tol is not None:
        return chk.tol
    return default_tolerance(entry.manifold)


def run_suite(manifold_id: str, suite: str, points: int = 64, seed: int = 42,
              tol: float | None = None):
    """Run one suite (or "all") over a zoo entry; deterministic in its args."""
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; "
                         f"use one of {', '.join(SUITES + ('all',))}")
    entry = zoo.get_entry(manifold_id)
    ctx = Context(entry, points, seed)
    reports = []
    for chk in sorted(REGISTRY, key=lambda c: c.id):
        if suite != "all" and chk.suite != suite:
            continue
        tolerance = tol if tol is not None else default_check_tolerance(
            chk, entry)
        used_points = min(points, chk.cap) if chk.cap else points
        try:
            resid = float(chk.run(ctx))
            status = "pass" if resid < tolerance else "fail"
            reports.append(CheckReport(chk.id, chk.paper_ref, manifold_id,
                                       resid, tolerance, used_points, seed,
                                       status))
        except SkipCheck:
            reports.append(CheckReport(chk.id, chk.paper_ref, manifold_id,
                                       None, None, used_points, seed,
                                       "skipped"))
    return reports


def emit_report(reports, fmt: str = "text") -> bytes:
    """Byte-stable rendering of a report list."""
    if fmt == "json":
        return json.dumps([r.as_dict() for r in reports],
                          separators=(",", ":")).encode()
    if fmt != "text":
        raise UsageError(f"unknown format {fmt!r}")
    lines = []
    for r in reports:
        mark = {"pass": "ok  ", "fail": "FAIL", "skipped": "skip"}[r.status]
        resid = "-" if r.max_abs_residual is None \
            else f"{r.max_abs_residual:.3e}"
        tolerance = "-" if r.tolerance is None else f"{r.tolerance:.1e}"
        lines.append(f"{mark} {r.check_id:28s} {r.manifold:16s} "
                     f"residual={resid:>10s} tol={tolerance:>8s} "
                     f"ref={r.paper_ref}")
    return ("\n".join(lines) + "\n").encode()
