from fractions import Fraction

import pytest

from cotangent_yangian.classical import RMatrixInput
from cotangent_yangian.core import FIXTURES, G, GSTAR
from cotangent_yangian.errors import DomainUndeclared, NoUnitLeadingTerm, RequiresRational, WindowTooSmall
from cotangent_yangian.pbw import Tensor
from cotangent_yangian.rmat import (RMatrices, TwistedR, cap, clear_denominators, cmul, invert, r_reg, r_sing,
                                    reexpand, semiclassical_defect, series_json, substitute_w, times_binomial,
                                    uniqueness_perturbation, verify_aux_lemma, verify_cocycle, verify_hz_lemma,
                                    verify_intertwining, verify_qybe, verify_translation, verify_twisted_R)
from cotangent_yangian.yangian import gen_leg

UNIT = ((), ())


def _z(*terms):
    """Scalar (no-leg) series in (z1, z2, w): terms are (exponents, coefficient)."""
    return Tensor({(tuple(z), 0, (UNIT,)): Fraction(c) for z, c in terms}, 1, 3, 2)


@pytest.fixture(scope="module")
def M(sl2):
    return RMatrices(sl2, K=2, W=4)


def test_reexpand_inverse_sum_z1_big():
    got = reexpand(_z(((0, 0, -1), 1)), "|z1|>|z2|", 2)
    assert got == _z(((-1, 0, 0), 1), ((-2, 1, 0), -1), ((-3, 2, 0), 1))


def test_reexpand_inverse_sum_z2_big():
    got = reexpand(_z(((0, 0, -1), 1)), "|z2|>|z1|", 1)
    assert got == _z(((0, -1, 0), 1), ((1, -2, 0), -1))


def test_reexpand_w_domain():
    # 1/z1 = 1/(w - z2) = 1/w + z2/w^2 + ...
    got = reexpand(_z(((-1, 0, 0), 1)), "|w|>|z2|", 2)
    assert got == _z(((0, 0, -1), 1), ((0, 1, -2), 1), ((0, 2, -3), 1))


def test_reexpand_roundtrip():
    n = 4
    series = reexpand(_z(((0, 0, -1), 1)), "|z1|>|z2|", n)
    back = times_binomial(series, 1, 0, 1)
    assert back.filter(lambda k: k[0][1] <= n) == _z(((0, 0, 0), 1))


def test_reexpand_polynomial_agrees_with_substitution():
    t = _z(((1, 0, 2), 3), ((0, -1, 1), 1))
    for dom in ("|z1|>|z2|", "|z2|>|z1|"):
        assert reexpand(t, dom, 5) == substitute_w(t)


def test_domain_errors():
    one_var = Tensor({((1,), 0, (UNIT,)): 1}, 1, 1, 2)
    with pytest.raises(DomainUndeclared):
        reexpand(one_var, "|z1|>|z2|", 2)
    with pytest.raises(DomainUndeclared):
        reexpand(_z(((0, 0, -1), 1)), "|z1|>|w|", 2)
    with pytest.raises(WindowTooSmall):
        reexpand(_z(((0, 0, -1), 1)), "|z1|>|z2|", 5, exact_order=3)
    with pytest.raises(DomainUndeclared):
        substitute_w(_z(((0, 0, -1), 1)))
    with pytest.raises(WindowTooSmall):
        clear_denominators(_z(((-3, 0, 0), 1)), 2)


def test_r_sing_leading_term(sl2):
    rs = r_sing(sl2, 1)
    cas = sl2.casimir()
    expect = Tensor({((-1,), 1, (gen_leg((0, a, GSTAR)), gen_leg((0, b, G)))): v for (a, b), v in cas.items()},
                    2, 1, 2)
    assert rs == expect
    assert uniqueness_perturbation(sl2) == rs


def test_r_sing_signs(sl2, idx):
    rs = r_sing(sl2, 3)
    e, f = idx["e"], idx["f"]
    # z^{-3}: (i, j) = (0, 2), (1, 1), (2, 0) with C(2, i) (-1)^i
    coeff = {i: rs.terms.get(((-3,), 1, (gen_leg((i, e, GSTAR)), gen_leg((2 - i, f, G))))) for i in range(3)}
    assert coeff == {0: 1, 1: -2, 2: 1}


def test_r_reg_legs(sl2):
    t = r_reg(sl2, 1)
    for (z, h, (l1, l2)), c in t.terms.items():
        assert l2[0] == () and all(x[0] < 0 for x in l2[1])


def test_inverses(M):
    one = Tensor.unit(2, 1, 2)
    assert cmul(M.Rs, M.Rs_inv, M.algs2, M.K, M.W) == one
    assert cmul(M.R, M.R_inv, M.algs2, M.K, M.W) == one
    assert invert(M.Rs, M.algs2, M.K, M.W) == M.Rs_inv
    with pytest.raises(NoUnitLeadingTerm):
        invert(M.rs, M.algs2, M.K, M.W)


def test_semiclassical(M):
    assert not semiclassical_defect(M)


def test_intertwining_loop1(M):
    gens = M.q.generators(1)
    assert verify_intertwining(M, gens, zdepth=3).ok
    assert not verify_intertwining(M, gens, zdepth=3, perturb=uniqueness_perturbation(M.lie)).ok


def test_lemmas(M):
    assert verify_aux_lemma(M, W=2, order=2).ok
    assert verify_hz_lemma(M, W=2, order=2).ok


def test_cocycle_w1(M):
    assert verify_cocycle(M, W=1).ok


def test_qybe_and_corruption(sl2, M):
    assert verify_qybe(M, 3).ok
    bad = RMatrices(sl2, 2, 4, M.q, corrupt=True)
    # the dropped sign is invisible below weight 3
    assert verify_qybe(bad, 2).ok
    assert not verify_qybe(bad, 3).ok
    assert not verify_qybe(bad, 4).ok


def test_translation(M):
    for which in ("r_sing", "R_s", "R"):
        assert verify_translation(M, W=2, order=2, which=which).ok


def test_twisted_R(sl2, idx):
    r = RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json")
    T = TwistedR(r, zdepth=2, N=1)
    gens = T.q.generators(1)
    assert verify_twisted_R(T, gens).ok
    T.R = T.M.R
    assert not verify_twisted_R(T, gens).ok
    e = idx["e"]
    with pytest.raises(RequiresRational):
        TwistedR(RMatrixInput(sl2, {(e, 1, e, 0): 1}))


def test_series_json(M):
    data = series_json(M.q, cap(M.rs, 2))
    assert data["domain"] == "z=inf"
    assert [t["zpow"] for t in data["terms"]] == [[-1], [-2]]
