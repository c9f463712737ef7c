import pytest
from hypothesis import given, strategies as st

from amalgrade import QQ, RingMap, RingPresentation, polynomial_ring
from amalgrade.amalgamation import AmalgamDatum, duplication, trivial_extension
from amalgrade.checkers import (CM, COUNTEREXAMPLE, FAILS, HOLDS, INAPPLICABLE, INCONSISTENT,
                                IdealFamily, check_dimension_transfer, check_height_transfer,
                                check_hypotheses, check_integral_flat_corollaries,
                                check_lemma_grade_min, check_oracle, check_theorem_maximal,
                                check_theorem_nilpotent, cm_in_sense_of, reverify)
from amalgrade.modules import free_module, ideal_as_module

X = polynomial_ring("x")
XY = polynomial_ring("x,y")


def triv(M_kind):
    M = free_module(XY, 1) if M_kind == "free" else ideal_as_module(XY.ideal("x", "y"))
    return trivial_extension(XY, M)


def test_monomial_sample_is_reproducible():
    a = IdealFamily.monomial_sample(XY, seed=7)
    b = IdealFamily.monomial_sample(XY, seed=7)
    assert [I.gens for I in a.members] == [I.gens for I in b.members]
    assert len(a.members) >= 5
    assert all(I.is_monomial() and not I.is_unit() for I in a.members)


def test_cm_examples():
    assert cm_in_sense_of(XY, IdealFamily.monomial_sample(XY)).verdict == CM
    S = RingPresentation(["X", "Y", "Z"], QQ, ["(X - Y)*Y", "(X - Y)*Z"])
    rep = cm_in_sense_of(S, IdealFamily.maximal_graded(S))
    assert rep.verdict == COUNTEREXAMPLE
    assert rep.witness["values"] == {"kgr": 1, "ht": 2}
    D = RingPresentation(["x"], QQ, ["x^2"])
    rep = cm_in_sense_of(D, IdealFamily.explicit(D, [D.ideal("x")]))
    assert rep.verdict == CM and rep.rows[0].values == {"kgr": 0, "ht": 0}


def test_theorem_maximal_examples():
    rep = check_theorem_maximal(duplication(X, X.ideal("x")))
    assert rep.verdict == CM and rep.rows[0].values["kgr_mprime"] == 1
    rep = check_theorem_maximal(triv("ideal"))
    assert rep.verdict == COUNTEREXAMPLE
    v = rep.rows[0].values
    assert (v["kgr_mprime"], v["kgr_A"], v["kgr_J"], v["dim_A"]) == (1, 2, 1, 2)
    assert rep.details["lhs"] == rep.details["rhs"] == COUNTEREXAMPLE
    rep = check_theorem_maximal(triv("free"))
    assert rep.verdict == CM and rep.rows[0].values["min_rhs"] == 2


def _plane_line():
    A = polynomial_ring("X")
    B = polynomial_ring("X,Y")
    return AmalgamDatum(A, B, RingMap(A, B, ["X"]), B.ideal("X", "Y"), ("X", "Y"), {"algebra"})


def test_theorem_maximal_inapplicable_without_finiteness():
    assert check_theorem_maximal(_plane_line()).verdict == INAPPLICABLE


def test_theorem_nilpotent_examples():
    F = IdealFamily.monomial_sample(XY)
    rep = check_theorem_nilpotent(triv("free"), F)
    assert rep.verdict == CM
    assert all(r.holds for r in rep.rows)
    rep = check_theorem_nilpotent(triv("ideal"), IdealFamily.maximal_graded(XY))
    assert rep.verdict == COUNTEREXAMPLE
    m = rep.rows[0].values
    assert m["kgr_J"] == 1 and m["ht"] == 2 and not m["hyp"] and not m["conc"]
    P = RingPresentation([], QQ)
    rep = check_theorem_nilpotent(trivial_extension(P, free_module(P, 1)),
                                  IdealFamily.monomial_sample(P))
    assert rep.verdict == CM
    assert all(r.values["kgr_e"] == r.values["ht_e"] == 0 for r in rep.rows)
    assert check_theorem_nilpotent(_plane_line(), IdealFamily.maximal_graded(_plane_line().A)).verdict \
        == INAPPLICABLE


def test_grade_min_examples():
    rep = check_lemma_grade_min(duplication(X, X.ideal("x")), X.ideal("x"))
    assert rep.verdict == HOLDS and rep.rows[0].values == {"kgr_e": 1, "kgr_A": 1, "kgr_J": 1}
    rep = check_lemma_grade_min(triv("ideal"), XY.ideal("x"))
    assert rep.verdict == HOLDS and rep.rows[0].values["kgr_e"] == 1
    rep = check_lemma_grade_min(triv("ideal"), XY.ideal())
    assert rep.rows[0].values == {"kgr_e": 0, "kgr_A": 0, "kgr_J": 0}


def test_flat_integral_examples():
    F = IdealFamily.explicit(X, [X.ideal(), X.ideal("x")])
    assert check_integral_flat_corollaries(duplication(X, X.ideal("x")), F).verdict == CM
    G = IdealFamily.maximal_graded(XY)
    rep = check_integral_flat_corollaries(duplication(XY, XY.ideal("x", "y")), G)
    assert rep.verdict == COUNTEREXAMPLE
    assert rep.witness["values"]["kgr_J"] == 1
    assert rep.details["certificate"] == "identity"
    H = IdealFamily.monomial_sample(XY)
    assert check_integral_flat_corollaries(duplication(XY, XY.ideal()), H).verdict == CM
    assert check_integral_flat_corollaries(triv("free"), H).verdict == INAPPLICABLE


def test_free_basis_certificate():
    A = polynomial_ring("x")
    B = RingPresentation(["x", "s"], QQ, ["s^2 - x"])
    d = AmalgamDatum(A, B, RingMap(A, B, ["x"]), B.ideal("s"), ("s",),
                     {"module_finite"}, module_gens=("s", "x"), free_basis=("1", "s"))
    rep = check_integral_flat_corollaries(d, IdealFamily.explicit(A, [A.ideal("x"), A.ideal()]))
    assert rep.details["certificate"] == "free-basis"
    assert rep.verdict in (CM, COUNTEREXAMPLE)
    bad = AmalgamDatum(A, B, RingMap(A, B, ["x"]), B.ideal("s"), ("s",),
                       {"module_finite"}, module_gens=("s", "x"), free_basis=("1",))
    assert check_integral_flat_corollaries(bad, IdealFamily.maximal_graded(A)).verdict \
        == INAPPLICABLE


def test_hypotheses_plane_line():
    d = _plane_line()
    F = IdealFamily.explicit(d.A, [d.A.ideal(), d.A.ideal("X"), d.A.ideal("X^2")])
    rep = check_hypotheses(d, F)
    assert rep.verdict == HOLDS
    assert all(r.values["kgr_A"] == r.values["kgr_J"] == r.values["ht"] for r in rep.rows)


def test_height_and_dimension_transfer():
    F = IdealFamily.monomial_sample(XY)
    assert check_height_transfer(triv("ideal"), F).verdict == HOLDS
    assert check_dimension_transfer(duplication(XY, XY.ideal("x", "y"))).verdict == HOLDS
    assert check_dimension_transfer(_plane_line()).verdict == INAPPLICABLE


def test_oracle_on_amalgam():
    R = _plane_line().amalgam.presentation
    assert check_oracle(R, IdealFamily.maximal_graded(R)).verdict == HOLDS


def test_reverify_detects_tampering():
    rep = cm_in_sense_of(XY, IdealFamily.explicit(XY, [XY.ideal("x", "y")]))
    rep.rows[0].values["kgr"] = 5
    assert reverify(rep, seed=1).verdict == INCONSISTENT
    ok = reverify(cm_in_sense_of(XY, IdealFamily.monomial_sample(XY)), seed=3)
    assert ok.verdict == CM and ok.reverified >= 1


def test_report_json_shape():
    rep = cm_in_sense_of(XY, IdealFamily.explicit(XY, [XY.ideal(1)])).to_dict()
    assert rep["rows"][0]["values"] == {"kgr": "inf", "ht": "inf"}


# one direction holds for any family: CM amalgam rows with ht a^e >= ht a force the A-side rows
mono = st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any)


@given(st.lists(mono, min_size=1, max_size=2), st.integers(0, 10**6))
def test_upward_direction_on_duplications(jexps, seed):
    d = duplication(XY, XY.ideal([XY.cover.monomial(e) for e in jexps]))
    F = IdealFamily.monomial_sample(XY, count=4, seed=seed)
    rep = check_integral_flat_corollaries(d, F)
    assert rep.verdict in (CM, COUNTEREXAMPLE)
    assert rep.details["lhs"] == rep.details["rhs"]
    assert rep.details["upward_direction"] in (True, "vacuous")
