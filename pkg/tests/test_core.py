from fractions import Fraction

import pytest

from cotangent_yangian.core import (G, GSTAR, bracket_symbols, casimir_d, cotangent_bracket, derivation_T, fixture,
                                    kappa_d, load_lie_algebra, translate, verify_structure)
from cotangent_yangian.errors import FormDegenerate, FormNotInvariant, JacobiViolation


def _spec(**kw):
    base = {"dim": 3, "labels": ["e", "f", "h"],
            "f": [["e", "f", "h", 1, 1], ["h", "e", "e", 2, 1], ["h", "f", "f", -2, 1]],
            "kappa0": [["e", "f", 1, 1], ["h", "h", 2, 1]]}
    base.update(kw)
    return base


def test_fixtures_load(sl2, sl3):
    assert sl2.dim == 3 and sl3.dim == 8
    assert sl2.labels == ["e", "f", "h"]


def test_labels_and_one_based_indices_agree(sl2):
    by_index = load_lie_algebra(sl2.to_json())
    assert by_index.f == sl2.f and by_index.kappa0 == sl2.kappa0


def test_antisymmetry_filled_in():
    lie = load_lie_algebra(_spec())
    e, f, h = 0, 1, 2
    assert lie.bracket(f, e) == {h: -1}
    assert lie.bracket(e, h) == {e: -2}


def test_jacobi_violation():
    bad = _spec(f=[["e", "f", "h", 1, 1], ["h", "e", "e", 2, 1], ["h", "f", "f", 2, 1]])
    with pytest.raises((JacobiViolation, FormNotInvariant)):
        load_lie_algebra(bad)


def test_degenerate_form():
    with pytest.raises((FormDegenerate, FormNotInvariant)):
        load_lie_algebra(_spec(kappa0=[["h", "h", 2, 1]]))


def test_label_out_of_range():
    with pytest.raises(ValueError):
        load_lie_algebra(_spec(kappa0=[[1, 4, 1, 1]]))


def test_loop_bracket(sl2, idx):
    e, f, h = idx["e"], idx["f"], idx["h"]
    assert bracket_symbols(sl2, (1, e, G), (2, f, G)) == {(3, h, G): 1}
    assert bracket_symbols(sl2, (1, h, G), (-2, e, GSTAR)) == {(-1, e, GSTAR): 2}
    assert not bracket_symbols(sl2, (0, e, GSTAR), (0, f, GSTAR))


def test_residue_pairing(sl2, idx):
    e, f = idx["e"], idx["f"]
    assert kappa_d(sl2, {(2, e, G): 1}, {(-3, f, GSTAR): 1}) == 1
    assert kappa_d(sl2, {(2, e, G): 1}, {(-2, f, GSTAR): 1}) == 0
    assert kappa_d(sl2, {(2, e, G): 1}, {(-3, f, G): 1}) == 0


def test_casimir_d_is_dual_basis(sl2):
    C = casimir_d(sl2)
    # (kappa_d (x) id)(b (x) C) = b for every constant generator b
    for a in range(sl2.dim):
        for sec in (G, GSTAR):
            out = {}
            for (s1, s2), v in C.items():
                k = kappa_d(sl2, {(0, a, sec): 1}, {s1: 1}, residue=False)
                if k:
                    out[s2] = out.get(s2, 0) + k * v
            assert {s: v for s, v in out.items() if v} == {(0, a, sec): 1}


def test_translation_is_exp_of_T(sl2, idx):
    x = {(3, idx["e"], G): Fraction(1)}
    tr = translate(x)
    assert tr[0] == x
    assert dict(tr[1]) == dict(derivation_T(x))
    assert dict(tr[3]) == {(0, idx["e"], G): 1}


def test_bracket_window(sl2, idx):
    from cotangent_yangian.errors import WindowOverflow
    with pytest.raises(WindowOverflow):
        cotangent_bracket(sl2, {(2, idx["e"], G): 1}, {(2, idx["f"], G): 1}, window=(0, 3))


def test_structure_small(sl2, sl3):
    assert verify_structure(sl2, samples=300)["status"] == "pass"
    assert verify_structure(sl3, samples=100, seed=3)["status"] == "pass"
