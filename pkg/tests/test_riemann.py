"""Levi-Civita connection and curvature in the pinned sign conventions."""

import numpy as np
import pytest

from pacgeom.errors import PlaneDegeneracyError
from pacgeom.riemann import (codifferential, covariant_derivative,
                             levi_civita, riemann_curvature,
                             sectional_curvature, torsion_tensor)


def test_flat_christoffels_vanish(flat):
    lc = levi_civita(flat.structure.g)
    assert np.max(np.abs(lc.gamma_at(np.zeros(3)))) == 0.0


def test_solv_nabla_e1_xi(solv):
    # Koszul with brackets [xi,e1] = e1, [xi,e2] = -e2, [e1,e2] = -2 xi
    nxi = solv.structure.nabla_xi(np.zeros(3))
    assert np.allclose(nxi[1], [0.0, -1.0, -1.0])  # nab_e1 xi = -e1 - e2
    # and it must agree with -phi e1 + phi h e1
    s = solv.structure
    ph, h = s.phi(np.zeros(3)), s.h(np.zeros(3))
    assert np.allclose(nxi, (-ph + ph @ h).T)


def test_heis_nabla_xi_is_minus_phi(heis, rng):
    s = heis.structure
    for p in heis.manifold.sample_points(10, rng):
        nxi = s.nabla_xi(p)
        ph = s.phi(p)
        for _ in range(1):
            X = rng.standard_normal(3)
            assert np.allclose(X @ nxi, -ph @ X, atol=1e-10)


def test_metric_compatibility_and_torsion(solv, heis, rng):
    for e in (solv, heis):
        s = e.structure
        ng = covariant_derivative(s.lc, s.g)
        tor = torsion_tensor(s.lc)
        for p in e.manifold.sample_points(6, rng):
            assert np.max(np.abs(ng(p))) < 1e-11
            assert np.max(np.abs(tor(p))) < 1e-11


def test_flat_curvature_vanishes(flat):
    r31, r40 = riemann_curvature(flat.structure.lc)
    assert np.max(np.abs(r31(np.zeros(3)))) == 0.0
    assert np.max(np.abs(r40(np.zeros(3)))) == 0.0


def test_heis_R_xy_xi(heis, rng):
    # R(X,Y)xi = eta(X) Y - eta(Y) X at random samples
    s = heis.structure
    eye = np.eye(3)
    for p in heis.manifold.sample_points(6, rng):
        R31 = s.R31(p)
        eta = s.eta(p)
        lhs = np.einsum("lijk,k->lij", R31, s.xi(p))
        rhs = np.einsum("i,lj->lij", eta, eye) - np.einsum("j,li->lij", eta, eye)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_solv_f8_spot_value(solv):
    # with h^2 = -id on the horizontal plane the combination gives 4X
    s = solv.structure
    x0 = np.zeros(3)
    R31 = s.R31(x0)
    xi, ph = s.xi(x0), s.phi(x0)
    M = np.einsum("lijk,i,k->lj", R31, xi, xi)   # X -> R(xi, X) xi
    for X in (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])):
        assert np.allclose(M @ X + ph @ (M @ (ph @ X)), 4.0 * X)


def test_ricci_values():
    from pacgeom import zoo
    expect = {"heis-para": -2.0, "solv-para": -4.0, "heis-para-5": -4.0,
              "sl2-para": -2.0, "flat-pac": 0.0}
    for eid, val in expect.items():
        s = zoo.get_entry(eid).structure
        x = np.zeros(s.dim)
        xi = s.xi(x)
        assert xi @ s.ric(x) @ xi == pytest.approx(val, abs=1e-9), eid


def test_scalar_curvature_values():
    from pacgeom import zoo
    expect = {"heis-para": 2.0, "solv-para": 0.0, "heis-para-5": 4.0,
              "sl2-para": -2.0, "flat-pac": 0.0}
    for eid, val in expect.items():
        s = zoo.get_entry(eid).structure
        assert s.scal(np.zeros(s.dim)) == pytest.approx(val, abs=1e-9), eid


def test_pair_symmetry_and_bianchi(heis5, rng):
    s = heis5.structure
    nR = covariant_derivative(s.lc, s.R31)
    for p in heis5.manifold.sample_points(2, rng):
        R = s.R40(p)
        assert np.max(np.abs(R - np.einsum("ijkl->klij", R))) < 1e-10
        assert np.max(np.abs(R + np.einsum("ijkl->jikl", R))) < 1e-10
        R31 = s.R31(p)
        first = R31 + np.einsum("lijk->ljki", R31) + np.einsum("lijk->lkij", R31)
        assert np.max(np.abs(first)) < 1e-10
        D = nR(p)
        second = D + np.einsum("iljmk->mlijk", D) + np.einsum("jlmik->mlijk", D)
        assert np.max(np.abs(second)) < 1e-9


def test_sectional_flat_and_degenerate(flat):
    s = flat.structure
    p = np.zeros(3)
    K = sectional_curvature(s.g, s.R40, [1.0, 0, 0], [0, 0, 1.0], p)
    assert K == 0.0
    with pytest.raises(PlaneDegeneracyError):
        # dx + dy is null and orthogonal to dz for diag(1,-1,1)
        sectional_curvature(s.g, s.R40, [1.0, 1.0, 0], [0, 0, 1.0], p)


def test_sectional_heis_xi_plane(heis, rng):
    s = heis.structure
    p = heis.manifold.sample_points(1, rng)[0]
    e1 = np.array([1.0, 0.0, p[1]])
    xi = s.xi(p)
    K = sectional_curvature(s.g, s.R40, xi, e1, p)
    num = np.einsum("ijkl,i,j,k,l->", s.R40(p), xi, e1, e1, xi)
    assert K == pytest.approx(num / (e1 @ s.g(p) @ e1), abs=1e-10)


def test_sectional_solv_denominator(solv):
    s = solv.structure
    x0 = np.zeros(3)
    g = s.g(x0)
    e1 = np.array([0.0, 1.0, 0.0])
    e2 = np.array([0.0, 0.0, 1.0])
    denom = (e1 @ g @ e1) * (e2 @ g @ e2) - (e1 @ g @ e2) ** 2
    assert denom == pytest.approx(-1.0)
    K = sectional_curvature(s.g, s.R40, e1, e2, x0)
    num = np.einsum("ijkl,i,j,k,l->", s.R40(x0), e1, e2, e2, e1)
    assert K == pytest.approx(num / denom)


def test_codifferential_vanishes_on_paracontact(heis, solv, rng):
    for e in (heis, solv):
        s = e.structure
        delta = codifferential(s.g, s.eta)
        pts = e.manifold.sample_points(
            64 if e.manifold.backend == "chart" else 1, rng)
        for p in pts:
            assert abs(delta(p)) < 1e-10


def test_codifferential_flat(flat):
    delta = codifferential(flat.structure.g, flat.structure.eta)
    assert delta(np.zeros(3)) == 0.0
