from fractions import Fraction

import pytest
from hypothesis import given, settings

from chancelogic.formula import (
    And,
    CondProbCmp,
    Holds,
    Implies,
    Inev,
    Monomial,
    Not,
    Occ,
    Or,
    P,
    Polynomial,
    Poss,
    ProbCmp,
    TimeEq,
    conj,
    const,
    desugar,
    event_symbols,
    fact_symbols,
    is_core,
    prob_cmp,
    subformulas,
    time_symbols,
)
from strategies import formulas

phi = Holds("t1", "t2", "f")
psi = Occ("t1", "t2", "e")


def test_poss_desugars_to_dual_of_inev():
    assert desugar(Poss("t", phi)) == Not(Inev("t", Not(phi)))


def test_conditional_desugars_to_product_form():
    got = desugar(CondProbCmp("t", phi, psi, ">=", Fraction(9, 10)))
    want = ProbCmp(
        "t",
        Polynomial((Monomial(1, (And(phi, psi),)), Monomial(Fraction(-9, 10), (psi,)))),
        ">=",
        const(0),
    )
    assert got == want


def test_implies_desugars_to_disjunction():
    assert desugar(Implies(phi, psi)) == Or(Not(phi), psi)


def test_core_formula_is_a_fixed_point():
    f = Inev("t0", And(phi, prob_cmp("t1", P(psi), ">", Fraction(1, 3))))
    assert desugar(f) == f
    assert is_core(f)


@pytest.mark.parametrize(
    "f, expected",
    [
        (Holds("t1", "t2", "f"), {"t1", "t2"}),
        (prob_cmp("t0", P(Inev("t1", Occ("t2", "t3", "crash"))), "=", Fraction(1, 2)), {"t0", "t1", "t2", "t3"}),
        (TimeEq("t1", "t1"), {"t1"}),
    ],
)
def test_time_symbols(f, expected):
    assert time_symbols(f) == expected


def test_symbol_collectors_look_under_p_and_inev():
    f = prob_cmp("t", P(Inev("u", phi)) * P(psi), "<", 1)
    assert fact_symbols(f) == {"f"}
    assert event_symbols(f) == {"e"}
    assert phi in set(subformulas(f))


def test_probcmp_needs_a_p_term():
    with pytest.raises(ValueError):
        ProbCmp("t", const(1), ">=", const(0))


def test_unknown_comparator_rejected():
    with pytest.raises(ValueError):
        ProbCmp("t", P(phi), "!=", const(0))
    with pytest.raises(ValueError):
        CondProbCmp("t", phi, psi, "=>", Fraction(1, 2))


def test_empty_polynomial_rejected():
    with pytest.raises(ValueError):
        Polynomial(())


def test_polynomial_arithmetic_keeps_structure():
    p = 2 * P(phi) - P(psi) * P(phi) + Fraction(1, 3)
    assert [m.coef for m in p.terms] == [2, -1, Fraction(1, 3)]
    assert p.terms[1].factors == (psi, phi)
    assert not p.is_constant() and const(5).is_constant()


def test_operators_build_nodes():
    assert (phi & psi) == And(phi, psi)
    assert (phi | psi) == Or(phi, psi)
    assert ~phi == Not(phi)
    assert (phi >> psi) == Implies(phi, psi)
    assert conj(phi, psi, phi) == And(And(phi, psi), phi)


def test_nodes_hash_structurally():
    a, b = And(Holds("a", "b", "c"), psi), And(Holds("a", "b", "c"), psi)
    assert a == b and hash(a) == hash(b) and len({a, b}) == 1


@settings(max_examples=150, deadline=None)
@given(formulas())
def test_desugar_is_idempotent_and_core(f):
    d = desugar(f)
    assert is_core(d)
    assert desugar(d) == d


@settings(max_examples=150, deadline=None)
@given(formulas())
def test_desugar_preserves_time_symbols(f):
    assert time_symbols(desugar(f)) == time_symbols(f)
