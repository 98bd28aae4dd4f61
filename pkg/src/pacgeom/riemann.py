"""Levi-Civita connection and metric curvature in the fixed sign conventions.

Conventions, pinned once and used everywhere:
  R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z,
  R^l_ijk stored with axes (l, i, j, k) so R(e_i,e_j)e_k = R^l_ijk e_l,
  R_ijkl = g(R(e_i,e_j)e_k, e_l),
  Ric_jk = R^i_ijk  (this sign makes Ric(xi,xi) = -2n + |h|^2 on the zoo),
  scal = g^jk Ric_jk.
"""

from __future__ import annotations

import numpy as np

from . import ad
from .errors import PlaneDegeneracyError, UsageError
from .fields import (DOWN, UP, TensorField, inverse_metric_fn)
from .manifold import coords_of


class AffineConnection:
    """Connection given by coefficients Gamma^k_ij (axes k, i=direction, j)."""

    __slots__ = ("manifold", "gamma", "metric", "name", "_cache")

    def __init__(self, manifold, gamma_fn, metric=None, name="nabla"):
        self.manifold = manifold
        self.gamma = gamma_fn
        self.metric = metric
        self.name = name
        self._cache = {}

    def gamma_at(self, x):
        x = np.asarray(x)
        if x.dtype != object:
            key = x.tobytes()
            hit = self._cache.get(key)
            if hit is None:
                hit = ad.asarray(self.gamma(x))
                self._cache[key] = hit
            return hit
        return ad.asarray(self.gamma(x))

    def __repr__(self):
        return f"<AffineConnection {self.name} on {self.manifold.name}>"


def levi_civita(g: TensorField, name="LC") -> AffineConnection:
    """Koszul formula; covers chart and homogeneous-frame backends at once."""
    man = g.manifold
    c = man.anholonomy
    ginv = inverse_metric_fn(g)

    def gamma(x):
        gx = g.at(x)
        dg = g.partials_at(x)  # (r, i, j) = d_r g_ij
        rhs = (np.moveaxis(dg, (0, 1, 2), (0, 1, 2))
               + np.moveaxis(dg, (0, 1, 2), (1, 2, 0))
               - np.moveaxis(dg, (0, 1, 2), (2, 0, 1)))
        # rhs[i,j,k] = d_i g_jk + d_j g_ik - d_k g_ij
        if c.any():
            cl = np.einsum("mab,mk->abk", c, gx)  # g([e_a,e_b], e_k)
            # + c_(ij,k) + c_(ki,j) - c_(jk,i)
            rhs = rhs + cl + np.moveaxis(cl, (0, 1, 2), (2, 0, 1)) \
                - np.moveaxis(cl, (0, 1, 2), (1, 2, 0))
        gi = ginv(x)
        return 0.5 * np.einsum("lk,ijk->lij", gi, rhs)

    return AffineConnection(man, gamma, metric=g, name=name)


def covariant_derivative(conn: AffineConnection, t: TensorField) -> TensorField:
    """nab t with the new covariant (direction) slot first."""
    man = t.manifold

    def fn(x):
        out = t.partials_at(x)  # (i, ...)
        gam = conn.gamma_at(x)  # (k, i, m)
        arr = t.at(x)
        for axis, s in enumerate(t.slots):
            moved = np.moveaxis(arr, axis, -1)  # (..., m)
            if s == UP:
                corr = np.tensordot(moved, gam, axes=([-1], [2]))  # (..., k, i)
                corr = np.moveaxis(corr, (-2, -1), (axis + 1, 0))
            else:
                corr = -np.tensordot(moved, gam, axes=([-1], [0]))  # (..., i, j)
                corr = np.moveaxis(corr, (-2, -1), (0, axis + 1))
            out = out + corr
        return out

    return TensorField(man, (DOWN,) + t.slots, fn, f"{conn.name}({t.name})")


def torsion_tensor(conn: AffineConnection) -> TensorField:
    """T^k_ij = Gamma^k_ij - Gamma^k_ji - c^k_ij (axes k,i,j)."""
    man = conn.manifold
    c = man.anholonomy

    def fn(x):
        gam = conn.gamma_at(x)
        out = gam - np.swapaxes(gam, 1, 2)
        if c.any():
            out = out - c
        return out

    return TensorField(man, (UP, DOWN, DOWN), fn, f"T[{conn.name}]")


def riemann_curvature(conn: AffineConnection):
    """(3,1) curvature R^l_ijk; and the (4,0) form when a metric is attached."""
    man = conn.manifold
    c = man.anholonomy

    def fn31(x):
        dg = man.partials(conn.gamma, x)  # (i, l, j, k) = d_i Gamma^l_jk
        gam = conn.gamma_at(x)
        out = np.moveaxis(dg, 0, 1)  # (l, i, j, k): d_i Gamma^l_jk
        out = out - np.swapaxes(out, 1, 2)  # - d_j Gamma^l_ik
        quad = np.einsum("lim,mjk->lijk", gam, gam)
        out = out + quad - np.swapaxes(quad, 1, 2)
        if c.any():
            out = out - np.einsum("mij,lmk->lijk", c, gam)
        return out

    r31 = TensorField(man, (UP, DOWN, DOWN, DOWN), fn31, f"R[{conn.name}]")
    if conn.metric is None:
        return r31, None
    g = conn.metric

    def fn40(x):
        return np.einsum("lijk,lm->ijkm", r31.at(x), g.at(x))

    r40 = TensorField(man, (DOWN,) * 4, fn40, f"R4[{conn.name}]")
    return r31, r40


def ricci_tensor(conn: AffineConnection) -> TensorField:
    r31, _ = riemann_curvature(conn)

    def fn(x):
        return np.trace(r31.at(x), axis1=0, axis2=1)

    return TensorField(conn.manifold, (DOWN, DOWN), fn, f"Ric[{conn.name}]")


def ricci_scalar(conn: AffineConnection, g: TensorField):
    """(Ricci tensor, scalar curvature) for a metric connection."""
    ric = ricci_tensor(conn)
    ginv = inverse_metric_fn(g)

    def fn(x):
        return np.tensordot(ric.at(x), ginv(x), axes=([0, 1], [0, 1]))

    return ric, TensorField(conn.manifold, (), fn, "scal")


def sectional_curvature(g: TensorField, r40: TensorField, X, Y, p) -> float:
    """K(span{X,Y}) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) - g(X,Y)^2)."""
    x = coords_of(p)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    gx = ad.values(g.at(x))
    gXX = X @ gx @ X
    gYY = Y @ gx @ Y
    gXY = X @ gx @ Y
    denom = gXX * gYY - gXY ** 2
    if abs(denom) < 1e-10:
        raise PlaneDegeneracyError("null or degenerate 2-plane")
    R = ad.values(r40.at(x))
    num = np.einsum("ijkl,i,j,k,l->", R, X, Y, Y, X)
    return float(num / denom)


def codifferential(g: TensorField, eta: TensorField) -> TensorField:
    """delta(eta) = -g^ij (nab_i eta)_j for a 1-form."""
    if eta.slots != (DOWN,):
        raise UsageError("codifferential implemented for 1-forms")
    conn = levi_civita(g)
    deta = covariant_derivative(conn, eta)
    ginv = inverse_metric_fn(g)

    def fn(x):
        return -np.tensordot(deta.at(x), ginv(x), axes=([0, 1], [0, 1]))

    return TensorField(g.manifold, (), fn, f"delta({eta.name})")
