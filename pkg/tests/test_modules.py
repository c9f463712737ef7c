import pytest
from hypothesis import given, strategies as st

from amalgrade import QQ, RingPresentation, polynomial_ring
from amalgrade.errors import AmbientMismatch, InvalidInput
from amalgrade.modules import (FPModule, ModuleMap, direct_sum, free_module, free_resolution_steps,
                               homology, ideal_as_module, koszul_hom_complex, quotient_module,
                               syzygies, vector)

XY = polynomial_ring("x,y")
XYZ = polynomial_ring("x,y,z")
D = RingPresentation(["x"], QQ, ["x^2"])


def _evaluates_to_zero(S, gens, M):
    for row in S.embedding:
        total = [M.ring.cover.zero] * M.rank
        for c, g in zip(row, gens):
            total = [t + c * M.ring.cover(gi) for t, gi in zip(total, g)]
        if not M.relation_gb.contains(vector(total)) and any(M.ring.reduce(t) for t in total):
            return False
    return True


def test_koszul_syzygy():
    M = free_module(XY, 1)
    S = syzygies([["x"], ["y"]], M)
    assert len(S.embedding) == 1
    a, b = S.embedding[0]
    assert a * XY.cover("x") + b * XY.cover("y") == XY.cover.zero
    assert {a, b} == {XY.cover("y"), XY.cover("-x")} or {a, b} == {XY.cover("-y"), XY.cover("x")}


def test_syzygy_in_quotient():
    S = syzygies([["x"]], free_module(D, 1))
    assert [tuple(r) for r in S.embedding] == [(D.cover("x"),)]


def test_three_koszul_relations():
    gens = [["x"], ["y"], ["z"]]
    S = syzygies(gens, free_module(XYZ, 1))
    assert len(S.embedding) == 3
    assert _evaluates_to_zero(S, gens, free_module(XYZ, 1))


def test_syzygy_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        syzygies([["x", "y"]], free_module(XY, 1))


def test_hom_koszul_examples():
    X = polynomial_ring("x")
    C = koszul_hom_complex([X.cover("x")], free_module(X, 1))
    assert homology(C, 0).is_zero
    C2 = koszul_hom_complex(XY.gens, free_module(XY, 1))
    assert [homology(C2, i).is_zero for i in range(3)] == [True, True, False]
    C3 = koszul_hom_complex([D.cover("x")], free_module(D, 1))
    assert not homology(C3, 0).is_zero


def test_homology_index_out_of_range():
    C = koszul_hom_complex(XY.gens, free_module(XY, 1))
    with pytest.raises(IndexError):
        homology(C, 3)


def test_resolutions():
    F = free_resolution_steps(quotient_module(XY.ideal("x", "y")), 5)
    assert [M.rank for M in F.modules] == [1, 2, 1]
    assert F.check()
    P = free_resolution_steps(quotient_module(D.ideal("x")), 4)
    assert len(P.maps) == 4
    assert all(M.rank == 1 for M in P.modules)
    assert F.check() and P.check()
    assert free_resolution_steps(free_module(XY, 2), 3).length == 0
    with pytest.raises(InvalidInput):
        free_resolution_steps(free_module(XY, 1), 0)


def test_module_map_well_definedness():
    M = quotient_module(XY.ideal("x"))
    N = quotient_module(XY.ideal("x", "y"))
    ModuleMap(M, N, [vector([XY.cover.one])])
    with pytest.raises(InvalidInput):
        ModuleMap(N, M, [vector([XY.cover.one])])


def test_zero_module_and_direct_sum():
    assert FPModule(XY, 0).is_zero()
    assert quotient_module(XY.ideal("1")).is_zero()
    S = direct_sum(quotient_module(XY.ideal("x")), free_module(XY, 1))
    assert S.rank == 2 and not S.is_free()
    I = ideal_as_module(XY.ideal("x", "y"))
    assert I.rank == 2 and len(I.relations) == 1


term = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
poly = st.lists(term, min_size=1, max_size=3).map(
    lambda ts: sum((XYZ.cover.monomial(t[1:], t[0]) for t in ts), XYZ.cover.zero))


@given(st.lists(st.tuples(poly, poly), min_size=1, max_size=3))
def test_syzygies_compose_to_zero(gens):
    M = free_module(XYZ, 2)
    S = syzygies([list(g) for g in gens], M)
    for row in S.embedding:
        for k in range(2):
            assert sum((c * g[k] for c, g in zip(row, gens)), XYZ.cover.zero).is_zero()


@given(st.lists(poly, min_size=1, max_size=3))
def test_resolution_is_complex(gens):
    I = XYZ.ideal(gens)
    if I.is_unit():
        return
    F = free_resolution_steps(quotient_module(I), 3)
    assert F.check()


@given(st.integers(1, 3))
def test_regular_sequence_koszul_exact(n):
    xs = XYZ.gens[:n]
    C = koszul_hom_complex(xs, free_module(XYZ, 1))
    flags = [homology(C, i).is_zero for i in range(n + 1)]
    assert flags == [True] * n + [False]
