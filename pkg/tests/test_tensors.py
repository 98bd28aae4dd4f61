"""Tensor-core operations: evaluation, brackets, d, Lie derivatives, wedges."""

import numpy as np
import pytest

from pacgeom import ad
from pacgeom.calculus import (exterior_derivative, interior_product,
                              lie_bracket, lie_derivative, wedge_1_2,
                              wedge_interior)
from pacgeom.errors import DegeneracyError, DomainError, UsageError
from pacgeom.fields import (DOWN, UP, TensorField, constant_field, evaluate,
                            metric_contract, norm_squared)


def vec(entry, fn, name="V"):
    return TensorField(entry.manifold, (UP,), fn, name)


# -- evaluate -----------------------------------------------------------------

def test_evaluate_flat_eta_and_g(flat):
    p = flat.manifold.point([0.3, -0.2, 0.5])
    assert np.array_equal(evaluate(flat.structure.eta, p), [0.0, 0.0, 1.0])
    assert np.array_equal(evaluate(flat.structure.g, p),
                          np.diag([1.0, -1.0, 1.0]))


def test_evaluate_heis_metric_at_y1(heis):
    # oracle: solve g(X, phi Y) = d(eta)(X, Y) in the frame
    # (xi, dx + y dz, dy), push to coordinates, evaluate at y = 1
    g = evaluate(heis.structure.g, heis.manifold.point([0.0, 1.0, 0.0]))
    assert g[0, 0] == pytest.approx(1.5)
    assert g[1, 1] == pytest.approx(-0.5)
    assert g[2, 2] == pytest.approx(1.0)
    assert g[0, 2] == pytest.approx(-1.0)
    assert g[0, 1] == 0.0 and g[1, 2] == 0.0


def test_evaluate_outside_box_raises(flat):
    with pytest.raises(DomainError):
        flat.manifold.point([2.0, 0.0, 0.0])
    bad = type("P", (), {"coords": np.array([2.0, 0.0, 0.0])})
    with pytest.raises(DomainError):
        evaluate(flat.structure.eta, np.array([2.0, 0.0, 0.0]))


# -- lie_bracket --------------------------------------------------------------

def test_coordinate_fields_commute(flat):
    X = constant_field(flat.manifold, (UP,), [1, 0, 0], "dx")
    Y = constant_field(flat.manifold, (UP,), [0, 1, 0], "dy")
    assert np.max(np.abs(lie_bracket(X, Y)(np.zeros(3)))) == 0.0


def test_solv_bracket_reads_structure_constants(solv):
    man = solv.manifold
    e1 = constant_field(man, (UP,), [0, 1, 0], "e1")
    e2 = constant_field(man, (UP,), [0, 0, 1], "e2")
    assert np.allclose(lie_bracket(e1, e2)(np.zeros(3)), [-2.0, 0.0, 0.0])


def _flow(Xfn, p, t, steps=64):
    # midpoint integrator for the flow of X
    x = np.asarray(p, dtype=float).copy()
    h = t / steps
    for _ in range(steps):
        k = np.asarray(Xfn(x), dtype=float)
        x = x + h * np.asarray(Xfn(x + 0.5 * h * k), dtype=float)
    return x


def test_heis_bracket_against_flow_commutator(heis, rng):
    # flow-commutator oracle: following X, Y, -X, -Y moves p by t^2 [X,Y]
    man = heis.manifold
    Xfn = lambda x: np.array([1.0, 0.0, x[1]])   # dx + y dz
    Yfn = lambda x: np.array([0.0, 1.0, 0.0])    # dy
    X = TensorField(man, (UP,), lambda x: ad.asarray([1.0, 0.0, x[1]]), "e1")
    Y = constant_field(man, (UP,), [0, 1, 0], "e2")
    br = lie_bracket(X, Y)
    t = 5e-3
    for p in man.sample_points(3, rng, shrink=0.3):
        q = _flow(Yfn, _flow(Xfn, _flow(Yfn, _flow(Xfn, p, t), t), -t), -t)
        oracle = (q - p) / t ** 2
        got = br(p)
        assert np.allclose(got, [0.0, 0.0, -1.0], atol=1e-12)
        assert np.allclose(oracle, got, atol=2e-2)


def test_bracket_rejects_mixed_backends(flat, solv):
    X = constant_field(flat.manifold, (UP,), [1, 0, 0], "X")
    Y = constant_field(solv.manifold, (UP,), [1, 0, 0], "Y")
    with pytest.raises(UsageError):
        lie_bracket(X, Y)


def test_bracket_jacobi_identity(heis, rng):
    man = heis.manifold
    X = vec(heis, lambda x: ad.asarray([ad.sin(x[1]), x[0], x[2] * x[0]]))
    Y = vec(heis, lambda x: ad.asarray([x[1] ** 2, x[2] ** 2, x[0] ** 2]))
    Z = vec(heis, lambda x: ad.asarray([ad.cos(x[0]), 1.0, x[1]]))
    J = lie_bracket(lie_bracket(X, Y), Z)
    K = lie_bracket(lie_bracket(Y, Z), X)
    L = lie_bracket(lie_bracket(Z, X), Y)
    for p in man.sample_points(16, rng):
        assert np.max(np.abs(J(p) + K(p) + L(p))) < 1e-7


# -- exterior derivative ------------------------------------------------------

def test_d_of_closed_form_vanishes(flat):
    ddz = exterior_derivative(flat.structure.eta)
    assert np.max(np.abs(ddz(np.zeros(3)))) == 0.0


def test_heis_d_eta_half_convention(heis, rng):
    # hand-expansion oracle: eta([e1, e2]) = -1, so d(eta)(e1, e2) = 1/2
    de = heis.structure.d_eta
    for p in heis.manifold.sample_points(3, rng):
        e1 = np.array([1.0, 0.0, p[1]])
        e2 = np.array([0.0, 1.0, 0.0])
        assert e1 @ de(p) @ e2 == pytest.approx(0.5, abs=1e-12)


def test_dF_flat_vanishes(flat):
    assert np.max(np.abs(flat.structure.dF(np.zeros(3)))) == 0.0


def test_dd_is_zero_scalar_to_two_form(heis, rng):
    man = heis.manifold
    f = TensorField(man, (), lambda x: ad.sin(x[0]) * x[1] ** 2 + x[2], "f")
    ddf = exterior_derivative(exterior_derivative(f))
    for p in man.sample_points(64, rng):
        assert np.max(np.abs(ddf(p))) < 1e-12


def test_d_output_antisymmetric(twisted, rng):
    dF = twisted.structure.dF
    for p in twisted.manifold.sample_points(4, rng):
        v = dF(p)
        assert np.max(np.abs(v + np.einsum("ijk->jik", v))) < 1e-12
        assert np.max(np.abs(v + np.einsum("ijk->ikj", v))) < 1e-12


def test_degree_cap(flat):
    three = constant_field(flat.manifold, (DOWN,) * 3, np.zeros((3, 3, 3)))
    with pytest.raises(UsageError):
        exterior_derivative(three)


# -- Lie derivative -----------------------------------------------------------

def test_lie_xi_eta_flat_vanishes(flat):
    lie = lie_derivative(flat.structure.xi, flat.structure.eta)
    assert np.max(np.abs(lie(np.zeros(3)))) == 0.0


def test_lie_xi_phi_heis_vanishes(heis, rng):
    lie = lie_derivative(heis.structure.xi, heis.structure.phi)
    for p in heis.manifold.sample_points(8, rng):
        assert np.max(np.abs(lie(p))) < 1e-12


def test_lie_xi_phi_solv_from_bracket_oracle(solv):
    # oracle: [xi, phi e1] - phi [xi, e1] = [xi, e2] - phi(e1) = -2 e2
    lie = lie_derivative(solv.structure.xi, solv.structure.phi)
    val = lie(np.zeros(3))
    assert np.allclose(val @ np.array([0.0, 1.0, 0.0]), [0.0, 0.0, -2.0])


# -- metric contraction -------------------------------------------------------

def test_raise_eta_gives_xi(flat):
    s = flat.structure
    raised = metric_contract(s.eta, s.g, [("raise", 0)])
    assert np.allclose(raised(np.zeros(3)), s.xi(np.zeros(3)))


def test_trace_g_against_inverse_is_dim(heis, rng):
    s = heis.structure
    traced = metric_contract(s.g, s.g, [("trace", 0, 1)])
    for p in heis.manifold.sample_points(4, rng):
        assert traced(p) == pytest.approx(3.0, abs=1e-12)


def test_h_norm_solv(solv):
    # frame computation: h e1 = -e2, h e2 = e1, g = diag(1, 1, -1)
    s = solv.structure
    h2 = norm_squared(s.h_low, s.g)
    assert h2(np.zeros(3)) == pytest.approx(-2.0)


def test_degenerate_metric_raises(flat):
    man = flat.manifold
    g0 = constant_field(man, (DOWN, DOWN), np.diag([1.0, 0.0, 1.0]), "gdeg")
    s = flat.structure
    with pytest.raises(DegeneracyError):
        metric_contract(s.eta, g0, [("raise", 0)])(np.zeros(3))


# -- wedge / interior ---------------------------------------------------------

def test_eta_wedge_deta_flat_zero(flat):
    s = flat.structure
    w = wedge_1_2(s.eta, s.d_eta)
    assert np.max(np.abs(w(np.zeros(3)))) == 0.0


def test_xi_into_two_eta_wedge_deta(heis, rng):
    # with eta(xi) = 1 and xi . d(eta) = 0 the contraction returns 2 d(eta)
    s = heis.structure
    w = wedge_1_2(s.eta, s.d_eta)
    contracted = interior_product(s.xi, TensorField(
        heis.manifold, (DOWN,) * 3, lambda x: 2.0 * w.at(x), "2w"))
    for p in heis.manifold.sample_points(4, rng):
        assert np.allclose(contracted(p), 2.0 * s.d_eta(p), atol=1e-12)


def test_eta_wedge_F_first_term_only(heis, rng):
    s = heis.structure
    w = wedge_1_2(s.eta, s.F)
    for p in heis.manifold.sample_points(3, rng):
        xi = s.xi(p)
        e1 = np.array([1.0, 0.0, p[1]])
        e2 = np.array([0.0, 1.0, 0.0])
        lhs = np.einsum("ijk,i,j,k->", w(p), xi, e1, e2)
        assert lhs == pytest.approx(e1 @ s.F(p) @ e2, abs=1e-12)


def test_wedge_interior_dispatch_and_errors(flat):
    s = flat.structure
    assert wedge_interior(s.eta, s.F).rank == 3
    assert wedge_interior(s.xi, s.F).rank == 1
    with pytest.raises(UsageError):
        wedge_interior(s.F, s.F)


# -- backend equivalence ------------------------------------------------------

def test_backend_equivalence_g_F_h(heis, heis_frame, rng):
    s, st = heis.structure, heis_frame.structure
    x0 = np.zeros(3)
    for p in heis.manifold.sample_points(16, rng):
        B = heis.frame_map(p)
        for fld, tfld in ((s.g, st.g), (s.F, st.F)):
            assert np.allclose(B.T @ fld(p) @ B, tfld(x0), atol=1e-8)
        Binv = np.linalg.inv(B)
        assert np.allclose(Binv @ s.h(p) @ B, st.h(x0), atol=1e-8)
