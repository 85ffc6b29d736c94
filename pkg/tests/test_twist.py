import pytest

from cotangent_yangian.classical import RMatrixInput, gamma
from cotangent_yangian.core import FIXTURES
from cotangent_yangian.pbw import Tensor
from cotangent_yangian.twist import Twist, factorize, verify_twist


@pytest.fixture(scope="module")
def r_ee(sl2):
    return RMatrixInput.from_json(sl2, FIXTURES / "r_ee.json")


def test_self_twist_trivial(sl2):
    tw = Twist(gamma(sl2), gamma(sl2), 2, 2)
    assert tw.F == Tensor.unit(2, 0, 2)


def test_twist_small(sl2, r_ee):
    rep = verify_twist(gamma(sl2), r_ee, K=2, N=1)
    assert rep.ok, rep["witnesses"][:1]
    assert set(rep["checks"]) >= {"bracket", "coproduct", "cocycle", "skew", "translation", "inverse"}


def test_reverse_direction(sl2, r_ee):
    assert verify_twist(r_ee, gamma(sl2), K=1, N=1).ok


def test_first_order_is_tail(sl2, r_ee):
    tw = Twist(gamma(sl2), r_ee, 2, 1)
    F1 = tw.F.hpart(1)
    assert F1 and all(k[1] == 1 for k in F1.terms)


def test_corrupted_twist_rejected(sl2, r_ee):
    def bump(F):
        F = F.copy()
        k = min(k for k in F.terms if k[1] == 1)
        F.terms[k] += 1
        return F

    assert not verify_twist(gamma(sl2), r_ee, K=2, N=1, corrupt=bump).ok


def test_factorize_roundtrip(sl2, r_ee):
    from cotangent_yangian.pbw import exp_truncated
    tw = Twist(gamma(sl2), r_ee, 2, 1)
    Y, X = factorize(tw.Z, tw.algs, tw.s2.is_minus)
    lhs = exp_truncated(Y, tw.algs).mul(exp_truncated(X, tw.algs), tw.algs)
    assert lhs == exp_truncated(tw.Z, tw.algs)
