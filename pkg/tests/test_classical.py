import pytest

from cotangent_yangian.classical import (RMatrixInput, boundedness, check_cybe_rho, cobracket, cobracket_z,
                                         cocycle_defect, cojacobi_defect, gamma, is_skew, lift_rho, skew_defect,
                                         splitting_basis, translated_cocycle_defect, translated_cojacobi_defect,
                                         validate_gcybe)
from cotangent_yangian.core import FIXTURES, G, GSTAR
from cotangent_yangian.errors import NotComplementary, RequiresDifferenceDependence
from cotangent_yangian.suites import lift_gamma_defect, loop_generators


@pytest.fixture(scope="module")
def r_ee(sl2):
    return RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json")


def test_json_labels_and_indices(sl2, r_ee):
    by_index = RMatrixInput.from_json(sl2, {"tail": [[1, 0, 1, 0, 1, 1]], "difference_only": True})
    assert by_index.tail == r_ee.tail
    assert RMatrixInput.from_json(sl2, r_ee.to_json()).tail == r_ee.tail


def test_gamma_solves_gcybe(sl2, sl3):
    assert validate_gcybe(gamma(sl2), 4).ok
    assert validate_gcybe(gamma(sl3), 3).ok


def test_e_e_tail_solves_gcybe(r_ee):
    assert validate_gcybe(r_ee, 4).ok


def test_e_f_tail_fails_gcybe(sl2, idx):
    r = RMatrixInput(sl2, {(idx["e"], 0, idx["f"], 0): 1})
    rep = validate_gcybe(r, 2)
    assert not rep.ok and rep["witnesses"]


def test_lift_of_gamma(sl2):
    assert lift_gamma_defect(sl2, 4) == {}
    assert not lift_rho(gamma(sl2)).tail


def test_rho_cybe_and_skew(sl2, r_ee):
    for r in (gamma(sl2), r_ee):
        rho = lift_rho(r)
        assert check_cybe_rho(rho, 3).ok
        assert not skew_defect(rho, 3)


def test_cobracket_vanishes_on_constants(sl2):
    rho = lift_rho(gamma(sl2))
    for a in range(sl2.dim):
        for s in (G, GSTAR):
            assert not cobracket(rho, {(0, a, s): 1})


def test_cocycle_and_cojacobi(sl2, r_ee):
    gens = loop_generators(sl2, 2)
    for r in (gamma(sl2), r_ee):
        rho = lift_rho(r)
        for x in gens:
            assert is_skew(cobracket(rho, x))
            assert not cojacobi_defect(rho, x)
            for y in gens[::3]:
                assert not cocycle_defect(rho, x, y)


def test_translated_identities(sl2, r_ee):
    rho = lift_rho(r_ee)
    gens = loop_generators(sl2, 1)
    for x in gens:
        assert not translated_cojacobi_defect(rho, x)
        for y in gens:
            assert not translated_cocycle_defect(rho, x, y)


def test_difference_detection(sl2, idx):
    e = idx["e"]
    assert RMatrixInput(sl2, {(e, 1, e, 0): 1, (e, 0, e, 1): -1}).difference_only
    r = RMatrixInput(sl2, {(e, 1, e, 0): 1})
    assert not r.difference_only
    with pytest.raises(RequiresDifferenceDependence):
        cobracket_z(lift_rho(r), {(0, e, G): 1})
    with pytest.raises(RequiresDifferenceDependence):
        RMatrixInput(sl2, {(e, 1, e, 0): 1}, True)


def test_tail_must_be_polynomial(sl2):
    with pytest.raises(NotComplementary):
        RMatrixInput(sl2, {(0, -1, 0, 0): 1})


def test_splitting_and_boundedness(r_ee, sl2):
    vecs, perp = splitting_basis(r_ee, 2)
    assert len(perp) == 3 * sl2.dim
    assert boundedness(r_ee, 2) == (2, 0)
    assert boundedness(gamma(sl2), 2) == (1, -1)
