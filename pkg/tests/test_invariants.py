import itertools
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from amalgrade import GF, QQ, RingPresentation, polynomial_ring
from amalgrade.errors import InvalidInput, NotDecidable
from amalgrade.invariants import (INF, annihilator, ext_grade, factor_polynomial, format_value,
                                  height, height_on_module, is_prime, koszul_cohomology_flags,
                                  koszul_grade, krull_dim, minimal_primes, minimal_transversals,
                                  quotient_dim)
from amalgrade.modules import direct_sum, free_module, ideal_as_module, quotient_module
from amalgrade.rings import intersection

XY = polynomial_ring("x,y")
XYZ = polynomial_ring("x,y,z")
PLANE_LINE = RingPresentation(["X", "Y", "Z"], QQ, ["(X - Y)*Y", "(X - Y)*Z"])


# -- brute-force oracles for monomial ideals -------------------------------------------

def _supports(I):
    return [frozenset(g.variables()) for g in I.gens]


def brute_min_covers(supports, n):
    covers = [frozenset(S) for k in range(n + 1) for S in itertools.combinations(range(n), k)
              if all(S_ & set(S) for S_ in supports)]
    return sorted({c for c in covers if not any(d < c for d in covers)}, key=sorted)


def brute_dim(supports, n):
    # dim k[x]/I for monomial I: largest variable set containing no generator's support
    return max((k for k in range(n + 1) for S in itertools.combinations(range(n), k)
                if not any(s <= set(S) for s in supports)), default=-1)


monomial = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).filter(any)
monomial_ideal = st.lists(monomial, min_size=1, max_size=4)


def _mono_ideal(R, exps):
    return R.ideal([R.cover.monomial(e) for e in exps])


# -- grades ----------------------------------------------------------------------------

def test_grade_examples():
    assert koszul_grade(XY.ideal("x", "y")) == 2
    assert koszul_grade(XY.ideal(), free_module(XY, 1)) == 0
    assert koszul_grade(XY.ideal("1", "x")) == INF
    assert koszul_grade(PLANE_LINE.maximal_graded()) == 1
    assert ext_grade(PLANE_LINE.maximal_graded()) == 1


def test_ext_examples():
    assert ext_grade(XY.ideal("x", "y")) == 2
    assert ext_grade(XY.ideal("x", "y"), ideal_as_module(XY.ideal("x", "y"))) == 1
    D = RingPresentation(["x"], QQ, ["x^2"])
    assert ext_grade(D.ideal("x")) == 0
    with pytest.raises(InvalidInput):
        ext_grade(XY.ideal(1))
    with pytest.raises(InvalidInput):
        ext_grade(XY.ideal("x"), quotient_module(XY.ideal(1)))


def test_format_value():
    assert format_value(INF) == "inf"
    assert format_value(2) == 2


@given(monomial_ideal, monomial_ideal)
def test_koszul_equals_ext_on_monomial_pairs(a, m):
    I = _mono_ideal(XYZ, a)
    M = quotient_module(_mono_ideal(XYZ, m))
    assert koszul_grade(I, M) == ext_grade(I, M)


@given(monomial_ideal, st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 3)), min_size=1,
                                max_size=2))
def test_generating_set_invariance(a, combos):
    I = _mono_ideal(XYZ, a)
    extra = []
    for c, k in combos:
        g = I.gens[k % len(I.gens)]
        extra.append(g * XYZ.cover(c) + I.gens[0] * XYZ.cover("x"))
    J = I.with_gens(list(I.gens) + extra)
    assert J == I
    assert koszul_grade(I) == koszul_grade(J)


@given(monomial_ideal, monomial_ideal)
def test_direct_sum_splitting(a, m):
    I = _mono_ideal(XYZ, a)
    M = quotient_module(_mono_ideal(XYZ, m))
    R1 = free_module(XYZ, 1)
    assert koszul_grade(I, direct_sum(R1, M)) == min(koszul_grade(I, R1), koszul_grade(I, M))


@given(monomial_ideal)
def test_grade_at_most_height(a):
    I = _mono_ideal(XYZ, a)
    assert koszul_grade(I) <= height(I)


def test_cohomology_flags_regular_sequence():
    assert koszul_cohomology_flags(XY.ideal("x", "y")) == [False, False, True]


# -- dimension and primes ----------------------------------------------------------------

def test_dim_examples():
    assert krull_dim(XY) == 2
    assert krull_dim(RingPresentation(["x"], QQ, ["x^2"])) == 0
    assert krull_dim(PLANE_LINE) == 2
    assert krull_dim(RingPresentation(["x"], QQ, ["1"])) == -math.inf


@given(monomial_ideal)
def test_dim_matches_brute_force(a):
    I = _mono_ideal(XYZ, a)
    assert quotient_dim(I) == brute_dim(_supports(I), 3)


@given(monomial_ideal)
def test_minimal_primes_match_brute_force(a):
    I = _mono_ideal(XYZ, a)
    got = sorted((sorted(XYZ.names.index(str(g)) for g in P.gens) for P in minimal_primes(I)))
    assert got == [sorted(c) for c in brute_min_covers(_supports(I), 3)]


@given(monomial_ideal)
def test_monomial_height_is_min_cover(a):
    I = _mono_ideal(XYZ, a)
    assert height(I) == min(len(c) for c in brute_min_covers(_supports(I), 3))


def test_minimal_transversals():
    sets = [frozenset({0, 1}), frozenset({0, 2})]
    assert sorted(map(sorted, minimal_transversals(sets))) == [[0], [1, 2]]


def test_minimal_primes_examples():
    got = {P.gens for P in minimal_primes(XYZ.ideal("x*y", "x*z"))}
    assert got == {XYZ.ideal("x").gens, XYZ.ideal("y", "z").gens}
    assert minimal_primes(XY.ideal("x")) == [XY.ideal("x")]
    T = polynomial_ring("X,Y,Z")
    I = intersection(T.ideal("Y", "Z"), T.ideal("X - Y"))
    verified = minimal_primes(I, [T.ideal("Y", "Z"), T.ideal("X - Y")])
    assert set(verified) == {T.ideal("Y", "Z"), T.ideal("X - Y")}
    assert set(minimal_primes(I)) == set(verified)


def test_bad_decomposition_rejected():
    with pytest.raises((NotDecidable, InvalidInput)):
        minimal_primes(XY.ideal("x*y"), [XY.ideal("x")])
    with pytest.raises((NotDecidable, InvalidInput)):
        minimal_primes(XY.ideal("x*y"), [XY.ideal("x"), XY.ideal("x", "y")])


def test_heights():
    assert height(XY.ideal("x")) == 1
    assert height(PLANE_LINE.maximal_graded()) == 2
    assert height(XY.ideal()) == 0
    assert height(XY.ideal(1)) == INF


def test_height_on_module():
    assert height_on_module(XY.ideal("x"), free_module(XY, 1)) == 1
    assert height_on_module(XY.ideal("x"), quotient_module(XY.ideal("y"))) == 1
    assert height_on_module(XY.ideal(1), free_module(XY, 1)) == INF
    assert annihilator(quotient_module(XY.ideal("y"))) == XY.ideal("y")


# -- factoring ----------------------------------------------------------------------------

def _product(facs, ring):
    out = ring.one
    for h, k in facs:
        out = out * h**k
    return out


def test_factor_over_q():
    f = XY.cover("x^2*y - y^3")
    facs = factor_polynomial(f)
    assert _product(facs, XY.cover).monic() == f.monic()
    assert len(facs) == 3


def test_factor_mod_p_multivariate():
    F = polynomial_ring("x,y", GF(7))
    f = F.cover("(x - y)*(x + 2*y + 1)*(x - y)")
    facs = factor_polynomial(f)
    assert _product(facs, F.cover).monic() == f.monic()
    assert sorted(k for _, k in facs) == [1, 2]


def test_prime_certificates():
    assert is_prime(XY.ideal("x"))
    assert is_prime(XY.ideal("x - y"))
    assert not is_prime(XY.ideal("x*y"))
    assert is_prime(XYZ.ideal("x", "y"))


uni = st.lists(st.integers(-5, 5), min_size=2, max_size=6)


@given(uni, st.sampled_from([2, 3, 5, 7, 32003]))
def test_univariate_factoring_matches_sympy(coeffs, p):
    X = polynomial_ring("x", GF(p))
    f = sum((X.cover.monomial((i,), c) for i, c in enumerate(coeffs)), X.cover.zero)
    if f.is_constant():
        return
    facs = factor_polynomial(f)
    assert _product(facs, X.cover).monic() == f.monic()
    t = sympy.Symbol("x")
    ref = sympy.Poly(sum(c * t**i for i, c in enumerate(coeffs)), t, modulus=p).factor_list()[1]
    assert sorted((h.degree(), k) for h, k in ref) == sorted((h.total_degree(), k) for h, k in facs)
