import pytest

from cotangent_yangian.core import G, GSTAR
from cotangent_yangian.vertex import (MeromorphicCoproduct, VacuumModule, check_skew, verify_delta_z_hom,
                                      verify_vertex_axioms)


@pytest.fixture(scope="module")
def V(sl2):
    return VacuumModule(sl2, K=2)


def test_axioms_depth2(sl2, V):
    rep = verify_vertex_axioms(sl2, depth=2, zmax=2, V=V)
    assert rep.ok, rep["witnesses"][:1]
    assert rep["checks"]["associativity"] > 0


def test_ef_ope_singular_part(sl2, V, idx):
    e, f, h = idx["e"], idx["f"], idx["h"]
    Y = V._Y_mono((V.mode(e, 0),), (V.mode(f, 0),), 2)
    # e(z) f_{-1}|0> has z^{-1} h_{-1}|0> and z^{-2} kappa(e, f)|0> = 0 at level 0
    sing = {k: v for k, v in Y.items() if k[0] < 0}
    assert sing and all(k[0] == -1 for k in sing)


def test_broken_singular_part_detected(sl2):
    V2 = VacuumModule(sl2)
    orig = V2._Y_mono

    def bad(A, B, zmax):
        r = orig(A, B, zmax)
        return {k: (v if k[0] >= 0 or len(A) < 2 else 2 * v) for k, v in r.items()}

    V2._Y_mono = bad
    assert not verify_vertex_axioms(sl2, depth=3, zmax=3, V=V2).ok


def test_delta_z_hom_small(V):
    q = V.q
    pairs = [(x, f) for x in q.plus_symbols(0) for f in q.s_symbols(1)]
    assert verify_delta_z_hom(MeromorphicCoproduct(V, W=4), pairs, 3).ok


def test_delta_z_of_plus_generator(V, idx):
    mc = MeromorphicCoproduct(V, W=3)
    g = (1, idx["h"], G)
    d = mc.delta_gen(g)
    # tau_z(h t) (x) 1 + 1 (x) h t = (h t + z h) (x) 1 + 1 (x) h t
    zpows = sorted({k[0] for k in d.terms})
    assert zpows == [(0,), (1,)]
