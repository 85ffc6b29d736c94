from fractions import Fraction

import pytest

from cotangent_yangian.core import GSTAR
from cotangent_yangian.errors import LegActionUndefined, WindowTooSmall
from cotangent_yangian.repmod import (SmoothModule, build_coregular, closure_report, commutator, dense, evaluate,
                                      evaluate_R, identity, kron, mat_mul, trivial_module, verify_module_relations,
                                      verify_qybe_on_modules)
from cotangent_yangian.rmat import RMatrices, r_sing
from cotangent_yangian.yangian import quantize


@pytest.fixture(scope="module")
def mod(sl2):
    Mod, rep = build_coregular(1, 2, lie=sl2, K=3)
    assert rep.ok
    return Mod


@pytest.fixture(scope="module")
def RM(sl2, mod):
    return RMatrices(sl2, 3, 2, mod.q)


def test_matrix_helpers():
    A = {(0, 1): Fraction(1)}
    B = {(1, 0): Fraction(1)}
    assert mat_mul(A, B) == {(0, 0): 1}
    assert commutator(A, B) == {(0, 0): 1, (1, 1): -1}
    assert kron(identity(2), A, 2) == {(0, 1): 1, (2, 3): 1}
    assert dense(A, 2) == [[0, 1], [0, 0]]


def test_coregular_basis(mod, sl2):
    assert mod.dim == 1 + sl2.dim
    assert mod.basis[0] == ()
    assert closure_report(mod)["high_modes_nonzero"] == []


def test_h0_weights(mod, idx):
    h0 = mod.gen_matrix((0, idx["h"], 0))
    diag = [h0.get((i, i), 0) for i in range(mod.dim)]
    weight = {mod.basis[i]: diag[i] for i in range(mod.dim)}
    assert weight[()] == 0
    assert weight[((0, idx["e"], GSTAR),)] == 2
    assert weight[((0, idx["f"], GSTAR),)] == -2
    assert weight[((0, idx["h"], GSTAR),)] == 0


def test_relations(mod):
    assert verify_module_relations(mod).ok


def test_window_checks(sl2):
    with pytest.raises(WindowTooSmall):
        SmoothModule(quantize(lie=sl2, K=1), 1, 3)


def test_negative_modes_undefined(mod, idx):
    with pytest.raises(LegActionUndefined):
        mod.act_free((-1, idx["e"], 0), ())


def test_R_finite(RM, mod):
    ev, rep = evaluate_R(RM, mod, mod)
    assert rep.ok
    assert rep["exponents"] == [-1, 0]
    assert ev[(0,)] == identity(mod.dim ** 2)


def test_trivial_leg_kills_r_sing(sl2, mod):
    T = trivial_module(mod.q)
    assert evaluate(r_sing(sl2, 3, 3), T, mod) == {}


def test_module_qybe(RM, mod):
    T = trivial_module(mod.q)
    for mix in ((T, T, T), (T, mod, mod), (mod, mod, mod)):
        assert verify_qybe_on_modules(RM, *mix).ok


def test_module_qybe_perturbed(sl2, mod):
    from cotangent_yangian.rmat import cmul, exp_capped, negate_z

    W = 6
    bad = RMatrices(sl2, 3, W, mod.q)
    k = min(k for k in bad.rs.terms if k[0] == (-1,))
    bad.rs.terms[k] += 1
    bad.Rs = exp_capped(bad.rs, bad.algs2, 3, W)
    bad.Rs_inv = exp_capped(-bad.rs, bad.algs2, 3, W)
    bad.R = cmul(negate_z(bad.Rs.permute_legs((1, 0))), bad.Rs_inv, bad.algs2, 3, W)
    assert not verify_qybe_on_modules(bad, mod, mod, mod).ok
