"""Exact forward-mode differentiation with nestable, level-tagged dual numbers.

Curvature needs second derivatives of the metric and the covariant derivative
of Ricci needs third, so dual numbers must nest to depth >= 3.  Each
`jacobian` call opens a fresh level; arithmetic between duals of different
levels treats the lower level as a constant, which avoids perturbation
confusion when derivatives are taken of functions that internally take
derivatives themselves.

Tangent parts are stored as length-d object vectors (vector forward mode), so
one traced evaluation yields all partials at once.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

_LEVELS = itertools.count(1)

_MATH_EXP = math.exp
_MATH_LOG = math.log
_MATH_SQRT = math.sqrt


class Dual:
    """Truncated first-order jet `a + b.eps` at a tagged nesting level."""

    __slots__ = ("a", "b", "level")

    def __init__(self, a, b, level):
        self.a = a
        self.b = b
        self.level = level

    # -- helpers ---------------------------------------------------------

    def _parts(self, other):
        """View `other` at self's level: (value, tangent)."""
        if isinstance(other, Dual) and other.level == self.level:
            return other.a, other.b
        return other, 0.0

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual) and other.level > self.level:
            return other.__radd__(self)
        oa, ob = self._parts(other)
        return Dual(self.a + oa, _tadd(self.b, ob), self.level)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual) and other.level > self.level:
            return other.__rsub__(self)
        oa, ob = self._parts(other)
        return Dual(self.a - oa, _tsub(self.b, ob), self.level)

    def __rsub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        oa, ob = self._parts(other)
        return Dual(oa - self.a, _tsub(ob, self.b), self.level)

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual) and other.level > self.level:
            return other.__rmul__(self)
        oa, ob = self._parts(other)
        return Dual(self.a * oa, _tadd(_tscale(ob, self.a), _tscale(self.b, oa)),
                    self.level)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual) and other.level > self.level:
            return other.__rtruediv__(self)
        oa, ob = self._parts(other)
        inv = 1.0 / oa
        val = self.a * inv
        return Dual(val, _tscale(_tsub(self.b, _tscale(ob, val)), inv), self.level)

    def __rtruediv__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        oa, ob = self._parts(other)
        inv = 1.0 / self.a
        val = oa * inv
        return Dual(val, _tscale(_tsub(ob, _tscale(self.b, val)), inv), self.level)

    def __neg__(self):
        return Dual(-self.a, _tscale(self.b, -1.0), self.level)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if isinstance(k, (int, np.integer)):
            if k == 0:
                return Dual(self.a * 0 + 1.0, 0.0, self.level)
            if k == 1:
                return self
            if k == 2:
                return self * self
            return Dual(self.a ** k, _tscale(self.b, k * self.a ** (k - 1)),
                        self.level)
        return exp(k * log(self))

    def __abs__(self):
        return -self if real(self) < 0 else self

    # comparisons act on the underlying real value (used for pivoting only)

    def __lt__(self, other):
        return real(self) < real(other)

    def __le__(self, other):
        return real(self) <= real(other)

    def __gt__(self, other):
        return real(self) > real(other)

    def __ge__(self, other):
        return real(self) >= real(other)

    def __float__(self):
        return float(real(self))

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r}; L{self.level})"


# tangent-part helpers: tangents are floats, Duals or object ndarrays


def _tadd(x, y):
    if isinstance(x, float) and x == 0.0:
        return y
    if isinstance(y, float) and y == 0.0:
        return x
    return x + y


def _tsub(x, y):
    if isinstance(y, float) and y == 0.0:
        return x
    if isinstance(x, float) and x == 0.0:
        return -y if not isinstance(y, np.ndarray) else -1.0 * y
    return x - y


def _tscale(x, s):
    if isinstance(x, float) and x == 0.0:
        return 0.0
    return x * s


def real(x):
    """Underlying float of a possibly nested dual."""
    while isinstance(x, Dual):
        x = x.a
    return float(x)


def _chain(x, val, dval):
    return Dual(val, _tscale(x.b, dval), x.level)


def exp(x):
    if isinstance(x, Dual):
        v = exp(x.a)
        return _chain(x, v, v)
    return _MATH_EXP(x)


def log(x):
    if isinstance(x, Dual):
        return _chain(x, log(x.a), 1.0 / x.a)
    return _MATH_LOG(x)


def sqrt(x):
    if isinstance(x, Dual):
        v = sqrt(x.a)
        return _chain(x, v, 0.5 / v)
    return _MATH_SQRT(x)


def sin(x):
    if isinstance(x, Dual):
        return _chain(x, sin(x.a), cos(x.a))
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return _chain(x, cos(x.a), -sin(x.a))
    return math.cos(x)


def sinh(x):
    if isinstance(x, Dual):
        return _chain(x, sinh(x.a), cosh(x.a))
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Dual):
        return _chain(x, cosh(x.a), sinh(x.a))
    return math.cosh(x)


def asarray(values):
    """Object array when duals are present, float array otherwise."""
    arr = np.asarray(values)
    if arr.dtype == object:
        if not any(isinstance(v, Dual) for v in arr.flat):
            return arr.astype(float)
    return arr


def jacobian(fn, x):
    """Partial derivatives of ``fn`` at ``x``; derivative axis comes FIRST.

    ``fn`` maps a length-d coordinate vector (entries float or Dual) to an
    array; the result has shape (d,) + fn(x).shape.
    """
    x = np.asarray(x, dtype=object)
    d = len(x)
    level = next(_LEVELS)
    eye = np.eye(d)
    seeded = np.array([Dual(x[i], eye[i], level) for i in range(d)], dtype=object)
    out = np.asarray(fn(seeded), dtype=object)
    jac = np.zeros((d,) + out.shape)
    flat = out.reshape(-1)
    cols = jac.reshape(d, -1)
    has_dual = False
    for k, s in enumerate(flat):
        if isinstance(s, Dual) and s.level == level:
            t = s.b
            if isinstance(t, np.ndarray):
                if t.dtype == object:
                    has_dual = True
                    break
                cols[:, k] = t
            elif t != 0.0:
                has_dual = True
                break
        # lower-level duals / plain numbers are constants at this level
        if isinstance(s, Dual) and s.level != level and _contains_level(s, level):
            has_dual = True
            break
    if not has_dual:
        return jac
    # generic (nested) path: keep object entries
    jac_o = np.empty((d,) + out.shape, dtype=object)
    cols_o = jac_o.reshape(d, -1)
    zero = np.zeros(d, dtype=object)
    zero[:] = 0.0
    for k, s in enumerate(flat):
        if isinstance(s, Dual) and s.level == level:
            t = s.b
            if isinstance(t, np.ndarray):
                cols_o[:, k] = t
            else:
                cols_o[:, k] = [t] * d
        else:
            cols_o[:, k] = zero
    return jac_o


def _contains_level(s, level):
    if not isinstance(s, Dual):
        return False
    if s.level == level:
        return True
    if _contains_level(s.a, level):
        return True
    b = s.b
    if isinstance(b, np.ndarray):
        return any(_contains_level(e, level) for e in b.flat)
    return _contains_level(b, level)


def value_at(out, level):
    """Strip one dual level from an evaluated array (constants pass through)."""
    out = np.asarray(out, dtype=object)
    res = np.empty(out.shape, dtype=object)
    rf, of = res.reshape(-1), out.reshape(-1)
    for k, s in enumerate(of):
        rf[k] = s.a if (isinstance(s, Dual) and s.level == level) else s
    return asarray(res)


def values(arr):
    """Deep real parts of an array of possibly nested duals."""
    arr = np.asarray(arr)
    if arr.dtype != object:
        return arr.astype(float)
    out = np.empty(arr.shape)
    of, af = out.reshape(-1), arr.reshape(-1)
    for k, s in enumerate(af):
        of[k] = real(s)
    return out


# ---------------------------------------------------------------------------
# linear algebra that tolerates object (dual-valued) matrices


def solve(A, B):
    """Solve A X = B by Gauss-Jordan with partial pivoting on |real(.)|.

    Falls back to LAPACK for plain float input.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.dtype != object and B.dtype != object:
        return np.linalg.solve(A, B)
    n = A.shape[0]
    M = np.empty((n, n), dtype=object)
    M[:, :] = A
    squeeze = B.ndim == 1
    X = np.empty((n, -(-B.size // n)), dtype=object)
    X[:, :] = B.reshape(n, -1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(real(M[r, col])))
        if abs(real(M[piv, col])) < 1e-14:
            raise np.linalg.LinAlgError("singular matrix in dual solve")
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
            X[[col, piv]] = X[[piv, col]]
        inv = 1.0 / M[col, col]
        M[col, :] = M[col, :] * inv
        X[col, :] = X[col, :] * inv
        for r in range(n):
            if r != col:
                f = M[r, col]
                if isinstance(f, Dual) or f != 0.0:
                    M[r, :] = M[r, :] - f * M[col, :]
                    X[r, :] = X[r, :] - f * X[col, :]
    X = asarray(X)
    return X.reshape(B.shape) if not squeeze else X[:, 0]


def inv(A):
    A = np.asarray(A)
    if A.dtype != object:
        return np.linalg.inv(A)
    return solve(A, np.eye(A.shape[0]))


def det(A):
    """Determinant of the real part (used only for degeneracy guards)."""
    return float(np.linalg.det(values(A)))
