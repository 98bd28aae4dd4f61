"""Gauge (conformal) transformations, the horizontal Laplacian calculus,
homothetic deformations and the eta-Einstein machinery.

A gauge rescales the paracontact form by a positive function sigma and
induces transformations of (phi, xi, g) that preserve the horizontal
distribution.  Constant sigma is the homothetic special case, under which
K-paracontact/paraSasakian structures are preserved; structures with
Ric = a g + b eta (x) eta can be driven to Einstein ones when their scalar
curvature avoids the single degenerate value 2n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ad
from .connections import w1_scalar
from .errors import (DegenerateScaleError, ParameterError, PositivityError,
                     PreconditionError, UsageError)
from .fields import DOWN, UP, TensorField, inverse_metric_fn
from .paracontact import (PacStructure, default_tolerance,
                          eta_einstein_fit_points)
from .riemann import covariant_derivative


@dataclass(frozen=True)
class GaugeData:
    sigma: TensorField
    zeta: TensorField  # horizontal correction field, eta(zeta) = 0


def _checked_sigma(sigma: TensorField):
    def fn(x):
        v = sigma.at(x)
        if np.asarray(v).dtype != object and float(v) <= 0.0:
            raise PositivityError(f"gauge factor {float(v)} <= 0 at {x}")
        return v
    return TensorField(sigma.manifold, (), fn, sigma.name or "sigma")


def gauge_data(s: PacStructure, sigma: TensorField) -> GaugeData:
    sigma = _checked_sigma(sigma)
    ginv = inverse_metric_fn(s.g)

    def zeta_fn(x):
        ds = sigma.partials_at(x)
        s_up = ginv(x) @ ds
        return -(0.5 / sigma.at(x)) * (s.phi.at(x) @ s_up)

    return GaugeData(sigma, TensorField(s.manifold, (UP,), zeta_fn, "zeta"))


def gauge_transform(s: PacStructure, sigma: TensorField) -> PacStructure:
    """Rescale eta by sigma and rebuild (phi, xi, g) accordingly.

    On the horizontal distribution phi is untouched; xi tilts by the
    horizontal gradient of sigma and g picks up the eta-direction
    corrections that keep the structure paracontact for the new form.
    """
    data = gauge_data(s, sigma)
    sig, zeta = data.sigma, data.zeta
    ginv = inverse_metric_fn(s.g)

    def xi_fn(x):
        return (s.xi.at(x) + zeta.at(x)) / sig.at(x)

    def eta_fn(x):
        return sig.at(x) * s.eta.at(x)

    def phi_fn(x):
        ds = sig.partials_at(x)
        s_up = ginv(x) @ ds
        xiv = s.xi.at(x)
        xis = np.tensordot(xiv, ds, axes=(0, 0))
        v = (s_up - xis * xiv) * (0.5 / sig.at(x))
        return s.phi.at(x) + np.multiply.outer(v, s.eta.at(x))

    def g_fn(x):
        sg = sig.at(x)
        eta = s.eta.at(x)
        zl = s.g.at(x) @ zeta.at(x)
        z2 = np.tensordot(zeta.at(x), zl, axes=(0, 0))
        out = sg * (s.g.at(x) - np.multiply.outer(eta, zl)
                    - np.multiply.outer(zl, eta))
        return out + sg * (sg - 1.0 + z2) * np.multiply.outer(eta, eta)

    man = s.manifold
    return PacStructure(TensorField(man, (UP, DOWN), phi_fn, "phi~"),
                        TensorField(man, (UP,), xi_fn, "xi~"),
                        TensorField(man, (DOWN,), eta_fn, "eta~"),
                        TensorField(man, (DOWN, DOWN), g_fn, "g~"),
                        name=f"{s.name}|gauge")


# ---------------------------------------------------------------------------
# horizontal Laplacian calculus


def d_laplacian(s: PacStructure, f: TensorField) -> TensorField:
    """Lap_D f = (g^ij - xi^i xi^j) nab_i nab_j f."""
    hess = covariant_derivative(s.lc, covariant_derivative(s.lc, f))
    ginv = inverse_metric_fn(s.g)

    def fn(x):
        xiv = s.xi.at(x)
        proj = ginv(x) - np.multiply.outer(xiv, xiv)
        return np.tensordot(proj, hess.at(x), axes=([0, 1], [0, 1]))

    return TensorField(s.manifold, (), fn, f"lapD({f.name})")


def d_inner(s: PacStructure, f: TensorField, f2: TensorField) -> TensorField:
    """(df ; df')_D = (g^ij - xi^i xi^j) d_i f d_j f'."""
    ginv = inverse_metric_fn(s.g)

    def fn(x):
        xiv = s.xi.at(x)
        proj = ginv(x) - np.multiply.outer(xiv, xiv)
        return np.tensordot(proj @ f.partials_at(x), f2.partials_at(x),
                            axes=(0, 0))

    return TensorField(s.manifold, (), fn, f"({f.name};{f2.name})_D")


def verify_w1_law(s: PacStructure, sigma: TensorField, points) -> float:
    """Residual of sigma W1~ = W1 - 2(n+1)/sigma LapD(sigma)
    - (n+1)(n-2)/sigma^2 |d sigma|^2_D over the given points.

    Both sides run through independent pipelines: the left one computes the
    canonical-connection scalar of the transformed structure directly.
    """
    st = gauge_transform(s, sigma)
    w1t = w1_scalar(st)
    w1 = w1_scalar(s)
    lap = d_laplacian(s, sigma)
    inner = d_inner(s, sigma, sigma)
    n = s.n
    worst = 0.0
    for x in np.atleast_2d(points):
        sg = float(ad.values(sigma.at(x)))
        lhs = sg * float(ad.values(w1t.at(x)))
        rhs = (float(ad.values(w1.at(x)))
               - 2.0 * (n + 1) / sg * float(ad.values(lap.at(x)))
               - (n + 1) * (n - 2) / sg ** 2 * float(ad.values(inner.at(x))))
        worst = max(worst, abs(lhs - rhs))
    return worst


def verify_laplacian_law(s: PacStructure, sigma: TensorField, f: TensorField,
                         points) -> float:
    """Residual of LapD~(f) = (1/sigma) LapD(f) + (n/sigma^2)(d sigma; df)_D."""
    st = gauge_transform(s, sigma)
    lap_t = d_laplacian(st, f)
    lap = d_laplacian(s, f)
    inner = d_inner(s, sigma, f)
    n = s.n
    worst = 0.0
    for x in np.atleast_2d(points):
        sg = float(ad.values(sigma.at(x)))
        lhs = float(ad.values(lap_t.at(x)))
        rhs = float(ad.values(lap.at(x))) / sg \
            + n / sg ** 2 * float(ad.values(inner.at(x)))
        worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# homothetic deformations


def d_homothetic(s: PacStructure, alpha: float) -> PacStructure:
    """phi, xi/alpha, alpha eta, alpha g + (alpha^2 - alpha) eta (x) eta."""
    if alpha == 0.0:
        raise ParameterError("homothetic parameter must be nonzero")
    alpha = float(alpha)
    beta = alpha * (alpha - 1.0)

    def xi_fn(x):
        return s.xi.at(x) / alpha

    def eta_fn(x):
        return alpha * s.eta.at(x)

    def g_fn(x):
        eta = s.eta.at(x)
        return alpha * s.g.at(x) + beta * np.multiply.outer(eta, eta)

    man = s.manifold
    return PacStructure(s.phi,
                        TensorField(man, (UP,), xi_fn, "xi-"),
                        TensorField(man, (DOWN,), eta_fn, "eta-"),
                        TensorField(man, (DOWN, DOWN), g_fn, "g-"),
                        name=f"{s.name}|hom({alpha})")


def eta_einstein_fit(s: PacStructure, points, rng=None, tol=None):
    """(a, b) with Ric = a g + b eta (x) eta, or None when the fit is poor.

    Requires a K-paracontact structure; on success the trace relations
    a + b = -2n, a = scal/2n + 1 and b = -(2n + 1 + scal/2n) are enforced.
    Tracing the defining form also pins scal = (2n+1) a + b.
    """
    tol = tol or max(1e-6, default_tolerance(s.manifold))
    pts = np.atleast_2d(points)
    killing = max(np.max(np.abs(ad.values(s.lie_xi_g.at(x)))) for x in pts)
    para = max(np.max(np.abs(ad.values(s.F.at(x)) - ad.values(s.d_eta.at(x))))
               for x in pts)
    if killing > tol or para > tol:
        raise PreconditionError("eta-Einstein fit needs a K-paracontact input")
    a, b, resid, spread = eta_einstein_fit_points(s, pts)
    if resid > tol or spread > tol:
        return None
    n = s.n
    scal = float(np.mean([ad.values(s.scal.at(x)) for x in pts]))
    checks = {
        "a_plus_b": abs(a + b + 2 * n),
        "a_closed_form": abs(a - (scal / (2 * n) + 1.0)),
        "b_closed_form": abs(b + (2 * n + 1.0 + scal / (2 * n))),
        "trace": abs(scal - ((2 * n + 1) * a + b)),
    }
    return {"a": a, "b": b, "residual": resid, "spread": spread,
            "scal": scal, "checks": checks}


def einsteinize(s: PacStructure, points, rng=None, tol=None):
    """Homothetic parameter and deformed structure with Ric- = -2n g-.

    Applies to eta-Einstein paraSasakian structures whose scalar curvature
    is away from the fixed point 2n of the deformation flow.
    """
    tol = tol or max(1e-6, default_tolerance(s.manifold))
    pts = np.atleast_2d(points)
    sas = max(np.max(np.abs(ad.values(s.P.at(x)))) for x in pts)
    if sas > tol:
        raise PreconditionError("einsteinize needs a paraSasakian input")
    fit = eta_einstein_fit(s, pts, tol=tol)
    if fit is None:
        raise PreconditionError("einsteinize needs an eta-Einstein input")
    n = s.n
    scal = fit["scal"]
    if abs(scal - 2 * n) <= 1e-6:
        raise DegenerateScaleError(
            f"scal = {scal:.6g} sits at the degenerate value 2n = {2 * n}")
    alpha = (2 * n - scal) / (4 * n * n + 4 * n)
    return alpha, d_homothetic(s, alpha)


# ---------------------------------------------------------------------------
# named gauge-factor families (the CLI's presets)


def sigma_preset(manifold, key: str) -> TensorField:
    """Positive gauge factors by name; frame backends admit constants only."""
    if key in ("one", "1"):
        return TensorField(manifold, (), lambda x: 1.0, "one")
    if key.startswith("const:"):
        val = float(key.split(":", 1)[1])
        if val <= 0:
            raise PositivityError("constant preset must be positive")
        return TensorField(manifold, (), lambda x, v=val: v, key)
    if manifold.backend == "frame":
        raise UsageError("non-constant gauge factors need a chart backend")
    if key == "exp-bump":
        def fn(x):
            return ad.exp(0.05 * ad.sin(x[0]) * ad.cos(x[1]))
        return TensorField(manifold, (), fn, "exp-bump")
    if key == "radial":
        def fn(x):
            r2 = 0.0
            for i in range(manifold.dim):
                r2 = r2 + x[i] * x[i]
            return 1.0 + 0.05 * ad.exp(-r2)
        return TensorField(manifold, (), fn, "radial")
    raise UsageError(f"unknown sigma preset {key!r}; "
                     "use one, const:<v>, exp-bump or radial")
