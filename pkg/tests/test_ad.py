"""The forward-mode engine against analytic and finite-difference oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pacgeom import ad

finite = st.floats(min_value=-3.0, max_value=3.0,
                   allow_nan=False, allow_infinity=False)


def grad(fn, x):
    return ad.jacobian(lambda v: ad.asarray([fn(v)]), np.asarray(x))[:, 0]


def test_first_derivatives_analytic():
    x = np.array([0.7, -1.3])
    g = grad(lambda v: v[0] ** 2 * v[1] + ad.sin(v[0]), x)
    assert g[0] == pytest.approx(2 * 0.7 * -1.3 + math.cos(0.7), abs=1e-14)
    assert g[1] == pytest.approx(0.49, abs=1e-14)


def test_nested_third_derivative():
    x = np.array([0.7, -1.3])

    def f(v):
        return ad.asarray([ad.sin(v[0] * v[1])])

    T3 = ad.values(ad.jacobian(
        lambda a: ad.jacobian(lambda b: ad.jacobian(f, b), a), x))
    expect = -x[1] ** 3 * math.cos(x[0] * x[1])
    assert T3[0, 0, 0, 0] == pytest.approx(expect, abs=1e-12)


def test_second_derivative_vs_finite_differences():
    # finite differences are the independent cross-check oracle
    def f(v):
        return ad.exp(v[0]) * ad.cosh(v[1]) + v[2] ** 3

    x = np.array([0.2, -0.4, 0.9])
    H = ad.values(ad.jacobian(
        lambda a: ad.jacobian(lambda b: ad.asarray([f(b)]), a), x))[:, :, 0]
    h = 1e-5
    for i in range(3):
        for j in range(3):
            xpp = x.copy(); xpp[i] += h; xpp[j] += h
            xpm = x.copy(); xpm[i] += h; xpm[j] -= h
            xmp = x.copy(); xmp[i] -= h; xmp[j] += h
            xmm = x.copy(); xmm[i] -= h; xmm[j] -= h
            fd = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h * h)
            assert H[i, j] == pytest.approx(fd, abs=5e-5)


@settings(max_examples=30, deadline=None)
@given(finite, finite)
def test_product_rule(a, b):
    x = np.array([a, b])
    gf = grad(lambda v: v[0] * ad.cos(v[1]), x)
    gg = grad(lambda v: v[1] + v[0] ** 2, x)
    gfg = grad(lambda v: (v[0] * ad.cos(v[1])) * (v[1] + v[0] ** 2), x)
    f0 = a * math.cos(b)
    g0 = b + a * a
    assert np.allclose(gfg, f0 * gg + g0 * gf, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(finite)
def test_chain_rule_matches_analytic(a):
    g = grad(lambda v: ad.sinh(ad.sin(v[0])), np.array([a]))
    assert g[0] == pytest.approx(math.cosh(math.sin(a)) * math.cos(a),
                                 abs=1e-12)


def test_division_and_powers():
    g = grad(lambda v: 1.0 / (2.0 + v[0]) + v[0] ** 4, np.array([0.5]))
    assert g[0] == pytest.approx(-1.0 / 6.25 + 4 * 0.125, abs=1e-14)


def test_nested_levels_do_not_confuse():
    # d/dx [ x * d/dy(x*y) ] = d/dx [x * x] = 2x
    def inner(xv):
        def f(y):
            return ad.asarray([xv * y[0]])
        return ad.jacobian(f, np.array([1.0], dtype=object))[0, 0]

    def outer(x):
        return ad.asarray([x[0] * inner(x[0])])

    J = ad.values(ad.jacobian(outer, np.array([1.7])))
    assert J[0, 0] == pytest.approx(2 * 1.7, abs=1e-13)


def test_dual_solve_matches_lapack():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    level = 10 ** 9
    Ad = np.empty((4, 4), dtype=object)
    Ad[:, :] = A
    Ad[0, 0] = ad.Dual(A[0, 0], 1.0, level)
    X = ad.solve(Ad, np.eye(4))
    assert np.allclose(ad.values(X), np.linalg.inv(A), atol=1e-12)
    # dA^{-1}/dA00 = -A^{-1} E00 A^{-1}
    dX = np.array([[x.b if isinstance(x, ad.Dual) else 0.0 for x in row]
                   for row in X])
    Ainv = np.linalg.inv(A)
    expect = -Ainv @ np.outer(np.eye(4)[0], np.eye(4)[0]) @ Ainv
    assert np.allclose(dX, expect, atol=1e-12)


def test_solve_raises_on_singular():
    with pytest.raises(np.linalg.LinAlgError):
        ad.solve(np.zeros((2, 2), dtype=object), np.eye(2))
