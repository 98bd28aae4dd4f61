"""Connection-free tensor calculus: brackets, d, Lie derivatives, wedges.

Degree conventions: the exterior derivative of a 1-form carries the 1/2
prefactor (so d(eta) pairs with the fundamental form), while 2-forms use the
prefactor-free six-term sum.  Both reduce to the same alternating-sum pattern
up to that prefactor; 3-forms (needed internally for torsion 4-forms) use the
standard prefactor-free alternating sum.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import UsageError
from .fields import DOWN, UP, TensorField
from .manifold import same_manifold


def lie_bracket(X: TensorField, Y: TensorField) -> TensorField:
    """[X, Y] for vector fields, including anholonomic frame terms."""
    if X.slots != (UP,) or Y.slots != (UP,):
        raise UsageError("lie_bracket needs two vector fields")
    man = same_manifold(X, Y)
    c = man.anholonomy

    def fn(x):
        Xx, Yx = X.at(x), Y.at(x)
        dX, dY = X.partials_at(x), Y.partials_at(x)
        out = np.tensordot(Xx, dY, axes=(0, 0)) - np.tensordot(Yx, dX, axes=(0, 0))
        if c.any():
            out = out + np.einsum("kij,i,j->k", c, Xx, Yx)
        return out

    return TensorField(man, (UP,), fn, f"[{X.name},{Y.name}]")


def exterior_derivative(omega: TensorField) -> TensorField:
    """d(omega) for forms of degree 0, 1 or 2."""
    p = omega.rank
    if p > 2:
        raise UsageError("exterior_derivative supports degrees 0..2 only")
    if any(s != DOWN for s in omega.slots):
        raise UsageError("exterior_derivative needs a covariant form")
    if p == 0:
        return TensorField(omega.manifold, (DOWN,), omega.partials_at,
                           f"d{omega.name}")
    prefactor = 0.5 if p == 1 else 1.0
    return _d_alternating(omega, p, prefactor)


def d3(omega: TensorField) -> TensorField:
    """Exterior derivative of a 3-form (standard alternating convention)."""
    if omega.rank != 3:
        raise UsageError("d3 needs a 3-form")
    return _d_alternating(omega, 3, 1.0)


def _d_alternating(omega: TensorField, p: int, prefactor: float) -> TensorField:
    man = omega.manifold
    c = man.anholonomy
    axes = list(range(p + 1))

    def fn(x):
        dw = omega.partials_at(x)  # (deriv, i1..ip)
        out = 0.0
        for i in axes:
            # move derivative slot into position i with alternating sign
            term = np.moveaxis(dw, 0, i)
            out = out + ((-1) ** i) * term
        if c.any():
            w = omega.at(x)
            for i, j in itertools.combinations(axes, 2):
                # omega([e_i, e_j], rest)
                term = np.einsum("mij,m...->ij...", c, w)
                term = np.moveaxis(term, (0, 1), (i, j))
                out = out + ((-1) ** (i + j)) * term
        return prefactor * out

    return TensorField(man, (DOWN,) * (p + 1), fn, f"d{omega.name}")


def lie_derivative(X: TensorField, t: TensorField) -> TensorField:
    """Lie derivative along a vector field for tensors of rank <= 2."""
    if X.slots != (UP,):
        raise UsageError("lie_derivative needs a vector field to flow along")
    if t.rank > 2:
        raise UsageError("lie_derivative implemented for rank <= 2")
    man = same_manifold(X, t)
    c = man.anholonomy

    def fn(x):
        Xx = X.at(x)
        dX = X.partials_at(x)  # (j, m): d_j X^m
        A = np.swapaxes(dX, 0, 1)  # A[m, j] = d_j X^m
        if c.any():
            A = A - np.einsum("mij,i->mj", c, Xx)
        out = np.tensordot(Xx, t.partials_at(x), axes=(0, 0))
        arr = t.at(x)
        for axis, s in enumerate(t.slots):
            moved = np.moveaxis(arr, axis, -1)
            if s == DOWN:
                corr = np.tensordot(moved, A, axes=([-1], [0]))
            else:
                corr = -np.tensordot(moved, A, axes=([-1], [1]))
            out = out + np.moveaxis(corr, -1, axis)
        return out

    return TensorField(man, t.slots, fn, f"L_{X.name}({t.name})")


def wedge_1_2(alpha: TensorField, beta: TensorField) -> TensorField:
    """(alpha ^ beta)(X,Y,Z) = a(X)b(Y,Z) + a(Y)b(Z,X) + a(Z)b(X,Y)."""
    if alpha.slots != (DOWN,) or beta.slots != (DOWN, DOWN):
        raise UsageError("wedge_1_2 needs a 1-form and a 2-form")
    man = same_manifold(alpha, beta)

    def fn(x):
        a, b = alpha.at(x), beta.at(x)
        t = np.multiply.outer(a, b)  # a_i b_jk
        return t + np.moveaxis(t, (0, 1, 2), (1, 2, 0)) \
            + np.moveaxis(t, (0, 1, 2), (2, 0, 1))

    return TensorField(man, (DOWN,) * 3, fn, f"{alpha.name}^{beta.name}")


def wedge_interior(a: TensorField, b: TensorField) -> TensorField:
    """Dispatch the two pairings the identities need.

    (1-form, 2-form) wedges; (vector, form) takes the interior product.
    Other degree combinations raise.
    """
    if a.slots == (UP,):
        return interior_product(a, b)
    if a.slots == (DOWN,) and b.slots == (DOWN, DOWN):
        return wedge_1_2(a, b)
    raise UsageError("wedge_interior supports (1-form, 2-form) wedges and "
                     "(vector, form) interior products only")


def interior_product(X: TensorField, omega: TensorField) -> TensorField:
    """X ⌟ omega: contraction of a vector into the first slot of a form."""
    if X.slots != (UP,) or omega.rank not in (1, 2, 3) \
            or any(s != DOWN for s in omega.slots):
        raise UsageError("interior_product needs a vector and a 1/2/3-form")
    man = same_manifold(X, omega)

    def fn(x):
        return np.tensordot(X.at(x), omega.at(x), axes=(0, 0))

    return TensorField(man, omega.slots[1:], fn, f"{X.name}⌟{omega.name}")


def top_form_pairing(eta_val, f_val, dim):
    """Value of (eta ^ F^n)(e_1..e_dim) by full antisymmetrization.

    Used only as a non-degeneracy witness; n = (dim-1)/2.
    """
    n = (dim - 1) // 2
    total = 0.0
    for perm in itertools.permutations(range(dim)):
        sign = _perm_sign(perm)
        v = eta_val[perm[0]]
        for a in range(n):
            v = v * f_val[perm[1 + 2 * a], perm[2 + 2 * a]]
        total += sign * v
    return total


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
