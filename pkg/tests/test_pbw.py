import random
from fractions import Fraction

import pytest

from cotangent_yangian.core import G
from cotangent_yangian.errors import BadUnitPart, NotTopologicallyNilpotent, WindowOverflow
from cotangent_yangian.pbw import (Tensor, bch, coproduct_U, exp_truncated, inverse_truncated, log_truncated,
                                   loop_enveloping, multiply, naive_normal_order)


@pytest.fixture(scope="module")
def env(sl2):
    return loop_enveloping(sl2)


def _mode(idx, lab, n):
    return (n, idx[lab], G)


def test_ef_straightening(env, idx):
    e, f, h = (_mode(idx, x, 0) for x in "efh")
    # f < h in the symbol order, so h f = f h - 2 f
    assert env.normal_order((h, f)) == {(f, h): 1, (f,): -2}
    assert env.normal_order((f, e)) == {(e, f): 1, (h,): -1}


def test_oracle_random_words_sl3(sl3):
    env = loop_enveloping(sl3)
    rng = random.Random(7)
    letters = [(n, a, G) for n in (-1, 0, 1) for a in range(sl3.dim)]
    for _ in range(150):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(2, 4)))
        assert env.normal_order(w) == naive_normal_order(env.bracket, w)


def test_idempotent(env, idx):
    w = (_mode(idx, "h", 1), _mode(idx, "f", 0), _mode(idx, "e", -1))
    once = env.normal_order(w)
    for m in once:
        assert env.normal_order(m) == {m: 1}


def test_associativity_random(env, sl2):
    rng = random.Random(1)
    letters = [(n, a, G) for n in (-1, 0, 1) for a in range(sl2.dim)]

    def elt():
        return {tuple(sorted(rng.choice(letters) for _ in range(rng.randint(0, 2)))): Fraction(rng.randint(1, 4))}

    for _ in range(100):
        A, B, C = elt(), elt(), elt()
        assert multiply(env, multiply(env, A, B), C) == multiply(env, A, multiply(env, B, C))


def test_window_overflow(sl2, idx):
    env = loop_enveloping(sl2, window=(-1, 1))
    with pytest.raises(WindowOverflow):
        env.normal_order((_mode(idx, "h", 1), _mode(idx, "e", 1)))


def _u(env, word, h=1, K=3):
    return Tensor({((), h, (((), m),)): c for m, c in env.normal_order(word).items()}, 1, 0, K)


def test_exp_log_inverse(env, idx):
    x = _u(env, (_mode(idx, "e", -1),)) + _u(env, (_mode(idx, "f", 0),), h=2)
    algs = [env]
    assert log_truncated(exp_truncated(x, algs), algs) == x
    E = exp_truncated(x, algs)
    assert E.mul(inverse_truncated(E, algs), algs) == Tensor.unit(1, 0, 3)


def test_bch_primitive(env, idx):
    x = _u(env, (_mode(idx, "e", -1),))
    y = _u(env, (_mode(idx, "f", 0),))
    H = bch(x, y, [env])
    prim = H.embed(2, (0,)) + H.embed(2, (1,))
    assert coproduct_U(H) == prim
    # second-order term is half the commutator
    assert H.hpart(2) == _u(env, (_mode(idx, "h", -1),), h=2).scale(Fraction(1, 2))


def test_exp_needs_positive_valuation(env, idx):
    with pytest.raises(NotTopologicallyNilpotent):
        exp_truncated(_u(env, (_mode(idx, "e", 0),), h=0), [env])
    with pytest.raises(BadUnitPart):
        log_truncated(_u(env, (_mode(idx, "e", 0),), h=0), [env])
