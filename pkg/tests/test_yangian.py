import json

import pytest

from cotangent_yangian.classical import RMatrixInput, gamma
from cotangent_yangian.core import FIXTURES, G, GSTAR
from cotangent_yangian.duality import tensor_to_json
from cotangent_yangian.pbw import Tensor
from cotangent_yangian.suites import BOREL_EXPECTED, borel_text
from cotangent_yangian.yangian import (BOREL_SPEC, borel_summary, build_matched_pair, gen_leg, quantize,
                                       verify_hopf, verify_quantization)


@pytest.fixture(scope="module")
def q2(sl2):
    return quantize(lie=sl2, K=2)


def test_coproduct_of_eps_h1(q2, idx):
    h = idx["h"]
    d = q2.coproduct_gen((1, h, GSTAR))
    # frozen from the quantization at K = 2; the hbar part is fixed by Delta - Delta^op = hbar delta
    expected = [
        {"hbar": [[0, 1, 1]], "legs": [[["g*", 3, 1]], []]},
        {"hbar": [[0, 1, 1]], "legs": [[], [["g*", 3, 1]]]},
        {"hbar": [[1, -1, 1]], "legs": [[["g*", 1, 0]], [["g*", 2, 0]]]},
        {"hbar": [[1, 1, 1]], "legs": [[["g*", 2, 0]], [["g*", 1, 0]]]},
    ]
    key = lambda r: json.dumps(r, sort_keys=True)
    assert sorted(tensor_to_json(d), key=key) == sorted(expected, key=key)


def test_constant_modes_primitive(q2):
    for g in q2.plus_symbols(0):
        assert q2.coproduct_gen(g) == q2.element(g).embed(2, (0,)) + q2.element(g).embed(2, (1,))
    for g in q2.plus_symbols(1)[3:]:
        assert q2.coproduct_gen(g).hpart(1)


def test_quantization_small(sl2, sl3):
    assert verify_quantization(quantize(lie=sl2, K=2), N=2).ok
    assert verify_quantization(quantize(lie=sl3, K=1), N=0).ok


def test_quantization_shifted(sl2):
    r = RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json")
    q = quantize(r, K=2)
    assert verify_quantization(q, N=1).ok
    assert verify_quantization(q, N=1, shifted=True).ok


def test_hopf_small(q2):
    assert verify_hopf(q2, N=1).ok


def test_hopf_fault_injection(sl2, idx):
    q = quantize(lie=sl2, K=2)
    target = (1, idx["h"], GSTAR)

    def bad(g, d):
        if g == target:
            d = d + Tensor.mono((gen_leg((0, idx["e"], GSTAR)), gen_leg((0, idx["e"], GSTAR))), 1, K=q.K)
        return d

    q.corrupt = bad
    rep = verify_hopf(q, gens=[target, (0, idx["f"], G)], checks=("coassoc", "hom"))
    assert not rep.ok


def test_antipode_inverts(q2, idx):
    g = (1, idx["e"], GSTAR)
    S = q2.antipode_gen(g)
    d = q2.coproduct_gen(g)
    prod = q2.multiply_legs(q2.apply_on_leg(d, 0, lambda l: q2.antipode(q2.leg_element(l))))
    assert not prod and S.hpart(0) == q2.element(g).scale(-1)


def test_borel_stated_values():
    key = lambda r: json.dumps(r, sort_keys=True)
    s = borel_summary(build_matched_pair(BOREL_SPEC))
    br = {(b["x"], b["f"]): b["value"] for b in s["brackets"]}
    assert br[("E", "F^v")] == BOREL_EXPECTED[("brackets", "E", "F^v")]
    cop = {c["gen"]: c["value"] for c in s["coproduct"]}
    for g in ("E", "H", "F^v"):
        assert sorted(map(key, cop[g])) == sorted(map(key, BOREL_EXPECTED[("coproduct", g)]))


def test_borel_from_file_matches_golden():
    q = build_matched_pair(str(FIXTURES / "borel.json"))
    from cotangent_yangian.duality import dumps
    assert dumps(borel_summary(q)) + "\n" == (FIXTURES / "borel_golden.json").read_text() == borel_text()
