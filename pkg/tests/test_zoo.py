"""Registry contents and entry invariants."""

import numpy as np
import pytest

from pacgeom import zoo
from pacgeom.errors import UsageError
from pacgeom.paracontact import classify, validate_structure


def test_minimum_entries_present():
    ids = zoo.list_entries()
    for required in ("flat-pac", "heis-para", "solv-para", "twisted-pac",
                     "heis-para-5"):
        assert required in ids


def test_unknown_id_raises():
    with pytest.raises(UsageError):
        zoo.get_entry("no-such-manifold")


def test_all_entries_validate(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        rep = validate_structure(e.structure, e.manifold.sample_points(6, rng))
        assert max(rep.values()) < 1e-12, eid


def test_solv_jacobi_exact(solv):
    c = solv.manifold.structure_constants
    jac = np.einsum("mij,lmk->lijk", c, c)
    cyc = jac + np.einsum("lijk->ljki", jac) + np.einsum("lijk->lkij", jac)
    assert np.max(np.abs(cyc)) == 0.0


def test_expected_flags_reproduced(rng):
    for eid in zoo.list_entries():
        e = zoo.get_entry(eid)
        rep = classify(e.structure, e.manifold.sample_points(12, rng),
                       np.random.default_rng(7))
        got = {k: bool(v) for k, v in rep.flags.items()}
        assert got == e.expected, eid


def test_heis5_is_parasasakian(heis5, rng):
    rep = classify(heis5.structure, heis5.manifold.sample_points(8, rng),
                   np.random.default_rng(1))
    assert rep.flags["paraSasakian"]
    assert rep.residuals["P"] < 1e-7


def test_heis_registered_under_both_backends(heis, heis_frame):
    assert heis.twin == "heis-para-frame"
    assert heis_frame.twin == "heis-para"
    assert heis.manifold.backend == "chart"
    assert heis_frame.manifold.backend == "frame"
    assert heis.frame_map is not None
