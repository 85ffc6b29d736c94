import json
from fractions import Fraction

import pytest

from cotangent_yangian.classical import RMatrixInput, gamma
from cotangent_yangian.core import FIXTURES, G, GSTAR, R
from cotangent_yangian.duality import (FiniteSplitting, LoopSplitting, dumps, permanent, sym_from_json, sym_to_json,
                                       tensor_from_json, tensor_to_json)
from cotangent_yangian.errors import NotComplementary, NotDirectSum, NotSubalgebra
from cotangent_yangian.yangian import quantize


def test_permanent():
    ones = lambda i, j: Fraction(1)
    assert permanent([0, 1, 2], [0, 1, 2], ones) == 6
    assert permanent([0, 1], [0, 1], lambda i, j: Fraction(i + j + 1)) == 1 * 3 + 2 * 2
    assert permanent([], [], ones) == 1
    assert permanent([0], [0, 1], ones) == 0


@pytest.mark.parametrize("which", ["gamma", "ee"])
def test_dual_basis(sl2, which):
    r = gamma(sl2) if which == "gamma" else RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json")
    sp = LoopSplitting(r, 2)
    ys = sp.minus_symbols(2)
    for y in ys:
        for y2 in ys:
            tot = sum(v * sp.pair_gen(f, y2) for f, v in sp.dual(y).items())
            assert tot == (1 if y == y2 else 0)


def test_to_from_standard_roundtrip(sl2):
    sp = LoopSplitting(RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json"), 2)
    for y in sp.minus_symbols(2):
        assert sp.from_standard(sp.to_standard(y)) == {y: 1}


def test_sym_json_roundtrip():
    for s in [(2, 0, G), (0, 2, GSTAR), (-3, 1, R)]:
        assert sym_from_json(sym_to_json(s)) == s
    assert sym_to_json((1, 2, GSTAR)) == ["g*", 3, 1]


def test_tensor_json_roundtrip(sl2):
    q = quantize(lie=sl2, K=2)
    for g in q.generators(1):
        t = q.coproduct_gen(g)
        data = tensor_to_json(t)
        assert tensor_from_json(json.loads(dumps(data)), K=2) == t


def test_finite_splitting_checks(sl2):
    e, f, h = ({sl2.labels.index(x): 1} for x in "efh")
    FiniteSplitting(sl2, [h, e], [f], 2)
    with pytest.raises((NotSubalgebra, NotComplementary, NotDirectSum)):
        FiniteSplitting(sl2, [e, f], [h], 2)
    with pytest.raises((NotDirectSum, NotComplementary)):
        FiniteSplitting(sl2, [h, e], [e], 2)
