"""Structure axioms, derived tensors and the classification ladder."""

import numpy as np
import pytest

from pacgeom import zoo
from pacgeom.errors import SignatureError
from pacgeom.fields import DOWN, constant_field
from pacgeom.paracontact import (PacStructure, build_compatible_metric,
                                 build_phi_basis, classify,
                                 covariant_derivative_phi_checks,
                                 eta_einstein_fit_points, fundamental_form,
                                 nijenhuis_suite, validate_structure)


def test_validate_all_entries(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        rep = validate_structure(e.structure, e.manifold.sample_points(8, rng))
        assert max(rep.values()) < 1e-12, eid


def test_signature_rejection(flat):
    man = flat.manifold
    s = flat.structure
    bad_g = constant_field(man, (DOWN, DOWN), np.diag([1.0, 1.0, 1.0]), "bad")
    bad = PacStructure(s.phi, s.xi, s.eta, bad_g)
    with pytest.raises(SignatureError):
        validate_structure(bad, np.zeros((1, 3)))


# -- compatible metric construction -------------------------------------------

def test_compatible_metric_flat_euclidean_seed(flat):
    # the averaged two-step formula degenerates here (the swap map is a
    # Euclidean isometry), so the null-eigenframe pairing must kick in and
    # return exactly diag(1, -1, 1)
    s = flat.structure
    pts = np.zeros((1, 3))
    g = build_compatible_metric(s.phi, s.xi, s.eta, np.eye(3), pts)
    assert np.allclose(g(np.zeros(3)), np.diag([1.0, -1.0, 1.0]), atol=1e-12)


def test_compatible_metric_xi_norm_forced(heis, rng):
    s = heis.structure
    pts = heis.manifold.sample_points(4, rng)
    g = build_compatible_metric(s.phi, s.xi, s.eta, np.eye(3), pts)
    for p in pts:
        xi = s.xi(p)
        assert xi @ g(p) @ xi == pytest.approx(1.0, abs=1e-10)


def test_compatible_metric_heis_validates(heis, rng):
    s = heis.structure
    pts = heis.manifold.sample_points(64, rng)
    g = build_compatible_metric(s.phi, s.xi, s.eta, np.eye(3), pts)
    rebuilt = PacStructure(s.phi, s.xi, s.eta, g)
    rep = validate_structure(rebuilt, pts)
    assert max(rep.values()) < 1e-9


# -- fundamental form ----------------------------------------------------------

def test_fundamental_form_flags(flat, heis, solv, rng):
    F, is_pc, rep = fundamental_form(
        flat.structure, flat.manifold.sample_points(4, rng))
    assert not is_pc
    assert F(np.zeros(3))[0, 1] == pytest.approx(1.0)  # F(dx, dy) = g(dx, dx)
    _, is_pc, rep = fundamental_form(
        heis.structure, heis.manifold.sample_points(8, rng))
    assert is_pc and rep["F_minus_deta"] < 1e-8
    _, is_pc, rep = fundamental_form(solv.structure, np.zeros((1, 3)))
    assert is_pc and rep["F_minus_deta"] == 0.0
    assert rep["volume_pairing"] > 1e-10


# -- phi-basis ------------------------------------------------------------------

def test_phi_basis_gram(heis, heis5, rng):
    for e in (heis, heis5):
        s = e.structure
        p = e.manifold.sample_points(1, rng)[0]
        B, signs = build_phi_basis(s, p, rng)
        gram = B.T @ s.g(p) @ B
        assert np.max(np.abs(gram - np.diag(signs))) < 1e-10
        assert signs[-1] == 1.0 and signs[0] == 1.0 and signs[1] == -1.0


def test_phi_basis_solv_horizontal(solv, rng):
    s = solv.structure
    B, signs = build_phi_basis(s, np.zeros(3), rng)
    # first column lies in span(e1, e2) with unit self-pairing
    assert abs(B[0, 0]) < 1e-12
    assert B[:, 0] @ s.g(np.zeros(3)) @ B[:, 0] == pytest.approx(1.0)


# -- Nijenhuis suite -----------------------------------------------------------

def test_nijenhuis_flat_all_vanish(flat):
    suite = nijenhuis_suite(flat.structure)
    for name, fld in suite.items():
        assert np.max(np.abs(fld(np.zeros(3)))) == 0.0, name


def test_nijenhuis_heis_normal(heis, rng):
    suite = nijenhuis_suite(heis.structure)
    for p in heis.manifold.sample_points(6, rng):
        for name in ("N1", "N2", "N3", "N4"):
            assert np.max(np.abs(suite[name](p))) < 1e-10, name


def test_nijenhuis_solv_pattern(solv):
    suite = nijenhuis_suite(solv.structure)
    x0 = np.zeros(3)
    assert np.max(np.abs(suite["N2"](x0))) == 0.0
    assert np.max(np.abs(suite["N4"](x0))) == 0.0
    assert np.max(np.abs(suite["N3"](x0))) == pytest.approx(2.0)


# -- h tensor ------------------------------------------------------------------

def test_h_heis_vanishes(heis, rng):
    for p in heis.manifold.sample_points(6, rng):
        assert np.max(np.abs(heis.structure.h(p))) < 1e-12


def test_h_solv_frozen(solv):
    # oracle: (1/2)([xi, phi e_i] - phi [xi, e_i]) from the brackets
    h = solv.structure.h(np.zeros(3))
    expect = np.zeros((3, 3))
    expect[2, 1] = -1.0   # h e1 = -e2
    expect[1, 2] = 1.0    # h e2 = e1
    assert np.allclose(h, expect)


def test_h_annihilates_xi_everywhere(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        s = e.structure
        for p in e.manifold.sample_points(4, rng):
            assert np.max(np.abs(s.h(p) @ s.xi(p))) < 1e-11, eid


# -- P tensor ------------------------------------------------------------------

def test_p_heis_vanishes(heis, rng):
    for p in heis.manifold.sample_points(6, rng):
        assert np.max(np.abs(heis.structure.P(p))) < 1e-10


def test_p_xi_norm_equals_h_norm_solv(solv):
    s = solv.structure
    x0 = np.zeros(3)
    assert s.p_of_vector(s.xi(x0), x0) == pytest.approx(-2.0)
    assert s.norms["h2"](x0) == pytest.approx(-2.0)


def test_p_flat_reduces_to_eta_terms(flat):
    s = flat.structure
    x0 = np.zeros(3)
    g, eta = s.g(x0), s.eta(x0)
    expect = -np.einsum("i,rs->rsi", eta, g) + np.einsum("s,ri->rsi", eta, g)
    assert np.allclose(s.P(x0), expect)


# -- nabla(phi) identity report --------------------------------------------------

def test_phi_derivative_checks(flat, solv, heis, rng):
    rep = covariant_derivative_phi_checks(
        flat.structure, flat.manifold.sample_points(4, rng))
    assert rep["f1"] < 1e-10 and np.isnan(rep["f2"])
    rep = covariant_derivative_phi_checks(solv.structure, np.zeros((1, 3)))
    assert rep["f1"] < 1e-12 and rep["f2"] < 1e-12 and rep["l3"] < 1e-12
    rep = covariant_derivative_phi_checks(
        heis.structure, heis.manifold.sample_points(4, rng))
    assert max(rep.values()) < 1e-10


# -- star-Ricci ------------------------------------------------------------------

def test_star_ricci_flat_zero(flat):
    star, sstar = flat.structure.star_ricci
    assert np.max(np.abs(star(np.zeros(3)))) == 0.0
    assert sstar(np.zeros(3)) == 0.0


def test_star_scal_heis(heis, rng):
    s = heis.structure
    for p in heis.manifold.sample_points(4, rng):
        assert s.scal(p) + s.star_ricci[1](p) + 4.0 == pytest.approx(0.0,
                                                                     abs=1e-9)


def test_f27_solv(solv):
    s = solv.structure
    x0 = np.zeros(3)
    lhs = s.scal(x0) + s.star_ricci[1](x0) + 4.0
    rhs = s.norms["h2"](x0) + 0.5 * s.norms["nabla_phi2"](x0) - 2.0
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert s.norms["P2"](x0) == pytest.approx(
        s.norms["nabla_phi2"](x0) - 4.0, abs=1e-12)


# -- classification ---------------------------------------------------------------

def test_classify_matches_expected_flags(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        rep = classify(e.structure, e.manifold.sample_points(12, rng),
                       np.random.default_rng(3))
        for flag, want in e.expected.items():
            assert bool(rep.flags[flag]) == want, (eid, flag)


def test_classify_ladder_consistency(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        rep = classify(e.structure, e.manifold.sample_points(8, rng),
                       np.random.default_rng(5))
        if rep.flags["paraSasakian"]:
            assert rep.flags["K_paracontact"] and rep.flags["paracontact"]
        if rep.flags["normal"]:
            for key in ("N1", "N2", "N3", "N4"):
                assert rep.residuals[key] < rep.tolerance


def test_eta_einstein_heis(heis, rng):
    a, b, resid, spread = eta_einstein_fit_points(
        heis.structure, heis.manifold.sample_points(8, rng))
    assert a + b == pytest.approx(-2.0, abs=1e-9)
    assert resid < 1e-9 and spread < 1e-9
