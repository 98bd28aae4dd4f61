"""Tensor fields of declared valence with backend-agnostic evaluation.

A field stores one component function ``fn(coords) -> array`` whose axes
follow the written index order of the object; ``slots`` records per axis
whether the index is contravariant ("u") or covariant ("d").  Evaluation is
pure and memoized per point, so the many identity checks that revisit the
same sample share work.
"""

from __future__ import annotations

import numpy as np

from . import ad
from .errors import DegeneracyError, DomainError, UsageError
from .manifold import Manifold, coords_of

UP = "u"
DOWN = "d"

DEGENERACY_EPS = 1e-12


class TensorField:
    """Smooth multilinear field; ``slots`` = () makes it a scalar field."""

    __slots__ = ("manifold", "slots", "fn", "name", "_cache")

    def __init__(self, manifold: Manifold, slots, fn, name: str = "", memo=True):
        self.manifold = manifold
        self.slots = tuple(slots)
        self.fn = fn
        self.name = name
        self._cache = {} if memo else None

    @property
    def valence(self):
        """(r, s) with r covariant and s contravariant slots."""
        return (self.slots.count(DOWN), self.slots.count(UP))

    @property
    def rank(self):
        return len(self.slots)

    def at(self, x):
        """Raw evaluation; accepts dual-valued coordinates (no caching then)."""
        x = np.asarray(x)
        if self._cache is not None and x.dtype != object:
            key = x.tobytes()
            hit = self._cache.get(key)
            if hit is None:
                hit = ad.asarray(self.fn(x))
                self._cache[key] = hit
            return hit
        return ad.asarray(self.fn(x))

    def __call__(self, p):
        coords = coords_of(p)
        if not self.manifold.contains(coords):
            raise DomainError(f"point {coords} outside {self.manifold.name}")
        out = ad.values(self.at(coords))
        if self.rank == 0:
            return float(out)
        return out

    def partials_at(self, x):
        """Component partials, derivative axis first (zero on frames)."""
        return self.manifold.partials(self.fn, x)

    def __repr__(self):
        kind = "".join(self.slots) or "scalar"
        return f"<TensorField {self.name or '?'} [{kind}] on {self.manifold.name}>"


ScalarField = TensorField  # a scalar field is a rank-0 tensor field


def evaluate(t: TensorField, p):
    """Components of ``t`` at ``p`` in the active backend basis."""
    return t(p)


def tensor_field(manifold, slots, fn, name=""):
    return TensorField(manifold, slots, fn, name)


def scalar_field(manifold, fn, name=""):
    return TensorField(manifold, (), fn, name)


def constant_field(manifold, slots, array, name=""):
    array = np.asarray(array, dtype=float)
    return TensorField(manifold, slots, lambda x, _a=array: _a, name)


def inverse_metric_fn(g: TensorField):
    """Pointwise inverse of a (0,2) metric with degeneracy guard."""

    def fn(x):
        gx = g.at(x)
        if np.asarray(gx).dtype != object:
            if abs(ad.det(gx)) < DEGENERACY_EPS:
                raise DegeneracyError(
                    f"metric {g.name or ''} degenerate at {np.asarray(x)}")
        return ad.inv(gx)

    return fn


def inverse_metric(g: TensorField, name="g_inv"):
    return TensorField(g.manifold, (UP, UP), inverse_metric_fn(g), name)


# ---------------------------------------------------------------------------
# raising, lowering and tracing


def _apply_matrix(arr, M, axis):
    """Contract M[new, old] against ``axis`` of arr, keeping axis order."""
    moved = np.moveaxis(arr, axis, -1)
    out = np.tensordot(moved, M, axes=([-1], [1]))
    return np.moveaxis(out, -1, axis)


def raise_axis(t: TensorField, g: TensorField, axis: int, name=""):
    if t.slots[axis] != DOWN:
        raise UsageError("can only raise a covariant slot")
    ginv = inverse_metric_fn(g)

    def fn(x):
        return _apply_matrix(t.at(x), ginv(x), axis)

    slots = list(t.slots)
    slots[axis] = UP
    return TensorField(t.manifold, slots, fn, name or f"{t.name}#raise{axis}")


def lower_axis(t: TensorField, g: TensorField, axis: int, name=""):
    if t.slots[axis] != UP:
        raise UsageError("can only lower a contravariant slot")

    def fn(x):
        return _apply_matrix(t.at(x), g.at(x), axis)

    slots = list(t.slots)
    slots[axis] = DOWN
    return TensorField(t.manifold, slots, fn, name or f"{t.name}#lower{axis}")


def trace_axes(t: TensorField, g: TensorField, ax1: int, ax2: int, name=""):
    """Trace two slots; opposite variance traces directly, equal uses g."""
    s1, s2 = t.slots[ax1], t.slots[ax2]
    ginv = inverse_metric_fn(g) if (s1 == s2 == DOWN) else None

    def fn(x):
        arr = t.at(x)
        if s1 != s2:
            return np.trace(arr, axis1=ax1, axis2=ax2)
        M = ginv(x) if s1 == DOWN else g.at(x)
        moved = np.moveaxis(arr, (ax1, ax2), (-2, -1))
        return np.tensordot(moved, M, axes=([-2, -1], [0, 1]))

    slots = [s for i, s in enumerate(t.slots) if i not in (ax1, ax2)]
    return TensorField(t.manifold, slots, fn, name or f"{t.name}#tr")


def metric_contract(t: TensorField, g: TensorField, spec, name=""):
    """Apply a list of index actions: ("raise", i), ("lower", i), ("trace", i, j).

    Axis numbers refer to the tensor as it stands when the action is applied.
    """
    out = t
    for action in spec:
        op = action[0]
        if op == "raise":
            out = raise_axis(out, g, action[1])
        elif op == "lower":
            out = lower_axis(out, g, action[1])
        elif op == "trace":
            out = trace_axes(out, g, action[1], action[2])
        else:
            raise UsageError(f"unknown index action {op!r}")
    if name:
        out.name = name
    return out


def norm_squared(t: TensorField, g: TensorField, name=""):
    """Full pseudo-metric contraction |t|^2 (may be negative)."""
    ginv_fn = inverse_metric_fn(g)

    def fn(x):
        arr = t.at(x)
        gx, gi = g.at(x), ginv_fn(x)
        other = arr
        for axis, s in enumerate(t.slots):
            M = gi if s == DOWN else gx
            other = _apply_matrix(other, M, axis)
        return np.tensordot(arr, other, axes=(range(t.rank), range(t.rank)))

    return TensorField(t.manifold, (), fn, name or f"|{t.name}|^2")
