"""Gauge transformations, horizontal Laplacian, homothety, Einstein-izing."""

import numpy as np
import pytest

from pacgeom.errors import (DegenerateScaleError, ParameterError,
                            PositivityError, PreconditionError, UsageError)
from pacgeom.fields import TensorField, inverse_metric_fn
from pacgeom.paracontact import classify, validate_structure
from pacgeom.transforms import (d_homothetic, d_inner, d_laplacian,
                                einsteinize, eta_einstein_fit, gauge_data,
                                gauge_transform, sigma_preset,
                                verify_laplacian_law, verify_w1_law)


def tensors_of(s):
    return (s.phi, s.xi, s.eta, s.g)


def assert_same_structure(s1, s2, pts, atol=1e-10):
    for a, b in zip(tensors_of(s1), tensors_of(s2)):
        for p in pts:
            assert np.max(np.abs(a(p) - b(p))) < atol


# -- gauge ---------------------------------------------------------------------

def test_gauge_identity(heis, rng):
    s = heis.structure
    st = gauge_transform(s, sigma_preset(heis.manifold, "one"))
    assert_same_structure(st, s, heis.manifold.sample_points(4, rng))


def test_gauge_constant_equals_homothety(heis, rng):
    s = heis.structure
    st = gauge_transform(s, sigma_preset(heis.manifold, "const:2"))
    assert_same_structure(st, d_homothetic(s, 2.0),
                          heis.manifold.sample_points(4, rng))


def test_gauge_output_validates(heis, rng):
    s = heis.structure
    st = gauge_transform(s, sigma_preset(heis.manifold, "exp-bump"))
    pts = heis.manifold.sample_points(8, rng, shrink=0.15)
    rep = validate_structure(st, pts)
    assert max(rep.values()) < 1e-6
    for p in pts:
        assert np.max(np.abs(st.F(p) - st.d_eta(p))) < 1e-10


def test_gauge_zeta_horizontal_and_xi_sigma(heis, rng):
    s = heis.structure
    sig = sigma_preset(heis.manifold, "exp-bump")
    data = gauge_data(s, sig)
    st = gauge_transform(s, sig)
    for p in heis.manifold.sample_points(6, rng):
        assert abs(s.eta(p) @ data.zeta(p)) < 1e-14
        ds = sig.partials_at(p)
        assert st.xi(p) @ ds == pytest.approx(
            (s.xi(p) @ ds) / sig(p), abs=1e-12)


def test_gauge_f57_f58(heis5, rng):
    s = heis5.structure
    sig = sigma_preset(heis5.manifold, "exp-bump")
    st = gauge_transform(s, sig)
    for p in heis5.manifold.sample_points(3, rng, shrink=0.15):
        sg = sig(p)
        gi = inverse_metric_fn(s.g)(p)
        gi_t = inverse_metric_fn(st.g)(p)
        f58 = sg * (gi_t - np.outer(st.xi(p), st.xi(p))) \
            - (gi - np.outer(s.xi(p), s.xi(p)))
        assert np.max(np.abs(f58)) < 1e-10
        f57 = np.einsum("kb,jb->jk", gi_t, st.phi(p)) \
            - np.einsum("kb,jb->jk", gi, s.phi(p)) / sg
        assert np.max(np.abs(f57)) < 1e-10


def test_gauge_roundtrip(heis, rng):
    s = heis.structure
    sig = sigma_preset(heis.manifold, "exp-bump")
    st = gauge_transform(s, sig)
    back = gauge_transform(st, TensorField(heis.manifold, (),
                                           lambda x: 1.0 / sig.at(x), "inv"))
    assert_same_structure(back, s, heis.manifold.sample_points(4, rng))


def test_gauge_positivity_guard(heis):
    s = heis.structure
    sig = TensorField(heis.manifold, (), lambda x: x[0], "x")
    st = gauge_transform(s, sig)
    with pytest.raises(PositivityError):
        st.g(np.array([-0.5, 0.0, 0.0]))


def test_sigma_preset_errors(heis, solv):
    with pytest.raises(UsageError):
        sigma_preset(heis.manifold, "nope")
    with pytest.raises(UsageError):
        sigma_preset(solv.manifold, "exp-bump")
    with pytest.raises(PositivityError):
        sigma_preset(heis.manifold, "const:-1")


# -- horizontal Laplacian --------------------------------------------------------

def test_laplacian_flat_examples(flat):
    s = flat.structure
    man = flat.manifold
    x0 = np.zeros(3)
    fconst = TensorField(man, (), lambda x: 2.5, "c")
    assert d_laplacian(s, fconst)(x0) == 0.0
    fz = TensorField(man, (), lambda x: x[2], "z")
    assert d_laplacian(s, fz)(x0) == 0.0
    assert d_inner(s, fz, fz)(x0) == 0.0
    fx = TensorField(man, (), lambda x: x[0], "x")
    assert d_inner(s, fx, fx)(x0) == pytest.approx(1.0)


def test_d_norm_identity(heis, rng):
    # |df|^2_D = |df|^2 - (xi f)^2
    from pacgeom import ad
    s = heis.structure
    man = heis.manifold
    f = TensorField(man, (), lambda x: ad.sin(x[0]) + x[1] * x[2], "f")
    inner = d_inner(s, f, f)
    for p in man.sample_points(6, rng):
        df = f.partials_at(p)
        gi = inverse_metric_fn(s.g)(p)
        full = df @ gi @ df
        assert inner(p) == pytest.approx(full - (s.xi(p) @ df) ** 2,
                                         abs=1e-12)


def test_w1_and_laplacian_gauge_laws(heis, rng):
    s = heis.structure
    sig = sigma_preset(heis.manifold, "exp-bump")
    pts = heis.manifold.sample_points(6, rng, shrink=0.15)
    assert verify_w1_law(s, sig, pts) < 1e-10
    f = TensorField(heis.manifold, (), lambda x: x[1] * x[1], "y^2")
    assert verify_laplacian_law(s, sig, f, pts) < 1e-10
    one = sigma_preset(heis.manifold, "one")
    assert verify_w1_law(s, one, pts[:2]) < 1e-12
    assert verify_laplacian_law(s, one, f, pts[:2]) < 1e-12
    # constant sigma: both derivative terms vanish, reducing to sigma W1~ = W1
    const2 = sigma_preset(heis.manifold, "const:2")
    assert verify_w1_law(s, const2, pts[:2]) < 1e-10


# -- homothetic deformations ------------------------------------------------------

def test_dhom_identity_and_zero(heis, rng):
    s = heis.structure
    assert_same_structure(d_homothetic(s, 1.0), s,
                          heis.manifold.sample_points(3, rng))
    with pytest.raises(ParameterError):
        d_homothetic(s, 0.0)


def test_dhom_composition(heis, rng):
    s = heis.structure
    assert_same_structure(d_homothetic(d_homothetic(s, 2.0), 3.0),
                          d_homothetic(s, 6.0),
                          heis.manifold.sample_points(3, rng))


def test_dhom_scalar_law(heis, rng):
    s = heis.structure
    pts = heis.manifold.sample_points(4, rng)
    for alpha in (0.5, 2.0, 3.0):
        beta = alpha * (alpha - 1.0)
        sb = d_homothetic(s, alpha)
        for p in pts:
            assert sb.scal(p) == pytest.approx(
                s.scal(p) / alpha + 2.0 * beta / alpha ** 2, abs=1e-10)


def test_dhom_preserves_class(heis, rng):
    sb = d_homothetic(heis.structure, 2.0)
    rep = classify(sb, heis.manifold.sample_points(8, rng),
                   np.random.default_rng(2))
    assert rep.flags["K_paracontact"] and rep.flags["paraSasakian"]


# -- eta-Einstein / einsteinize ----------------------------------------------------

def test_eta_einstein_fit_closed_forms(heis, rng):
    fit = eta_einstein_fit(heis.structure, heis.manifold.sample_points(8, rng))
    assert fit["a"] == pytest.approx(2.0, abs=1e-9)
    assert fit["b"] == pytest.approx(-4.0, abs=1e-9)
    assert max(fit["checks"].values()) < 1e-9


def test_eta_einstein_fit_rejects_solv(solv):
    with pytest.raises(PreconditionError):
        eta_einstein_fit(solv.structure, np.zeros((1, 3)))


def test_einsteinize_sl2(sl2):
    pts = np.zeros((1, 3))
    alpha, sbar = einsteinize(sl2.structure, pts)
    assert alpha == pytest.approx(0.5)
    x0 = np.zeros(3)
    assert sbar.scal(x0) == pytest.approx(-6.0, abs=1e-10)
    assert np.max(np.abs(sbar.ric(x0) + 2.0 * sbar.g(x0))) < 1e-10


def test_einsteinize_composes_to_same_einstein_scal(sl2):
    pts = np.zeros((1, 3))
    _, s1 = einsteinize(sl2.structure, pts)
    _, s3 = einsteinize(d_homothetic(sl2.structure, 3.0), pts)
    assert s1.scal(np.zeros(3)) == pytest.approx(s3.scal(np.zeros(3)),
                                                 abs=1e-10)


def test_einsteinize_degenerate_scale(heis, rng):
    # scal = 2n exactly on this entry: the deformation has no admissible alpha
    with pytest.raises(DegenerateScaleError):
        einsteinize(heis.structure, heis.manifold.sample_points(6, rng))


def test_einsteinize_identity_when_already_einstein(sl2):
    # an Einstein input with scal = -2n(2n+1) maps to alpha = 1
    pts = np.zeros((1, 3))
    _, sbar = einsteinize(sl2.structure, pts)
    alpha2, sbar2 = einsteinize(sbar, pts)
    assert alpha2 == pytest.approx(1.0, abs=1e-12)
    assert_same_structure(sbar2, sbar, pts)


def test_f90_form_preserved_under_homothety(heis, rng):
    pts = heis.manifold.sample_points(6, rng)
    sb = d_homothetic(heis.structure, 2.0)
    fit = eta_einstein_fit(sb, pts)
    assert fit is not None
    assert max(fit["checks"].values()) < 1e-9
