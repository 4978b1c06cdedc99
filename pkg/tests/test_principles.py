from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings

from chancelogic.constraints import check_coherence, check_constraints
from chancelogic.examples import NAMES, fixture_model
from chancelogic.model import Distribution
from chancelogic.formula import And, Holds, Not, Occ, TimeEq
from chancelogic.principles import (
    SchemaInstance,
    check_schema,
    expected_future_probability,
    miller_formula,
    past_determined,
    sample_instances,
)
from chancelogic.semantics import Evaluator, probability, valid_in_model
from strategies import ALPHAS, model_and_formulas

HEADS = Occ("t1", "t2", "heads")


def test_miller_on_coin_at_seven_tenths():
    m = fixture_model("coin")
    assert check_schema(m, SchemaInstance("miller", ("t0", "t1"), (HEADS,), Fraction(7, 10)))
    # the left side is 7/20 and the right side 7/10 * 1/2
    assert valid_in_model(m, miller_formula("t0", "t1", HEADS, Fraction(7, 10)))


@pytest.mark.parametrize("name", NAMES)
def test_miller_with_zero_alpha(name):
    m = fixture_model(name)
    for inst in sample_instances(m, [TimeEq(next(iter(m.times)), next(iter(m.times)))], ("miller",), (Fraction(0),)):
        assert check_schema(m, inst)


def test_inevitability_persistence_fails_without_refinement():
    m = fixture_model("coin")
    t1, t2 = m.times["t1"], m.times["t2"]
    parts = {**m.partitions, t1: tuple(frozenset({w}) for w in m.worlds), t2: m.partitions[t1]}
    broken = replace(m, partitions=parts)
    assert "C1" in check_constraints(broken).labels
    res = check_schema(broken, SchemaInstance("inevitability-persists", ("t1", "t2"), (HEADS,)))
    assert res.counterexample == "fair-heads"


def test_expected_value_on_coin():
    m = fixture_model("coin")
    assert expected_future_probability(m, "t0", "t1", "fair-heads", HEADS) == Fraction(3, 5)


@pytest.mark.parametrize("name", NAMES)
def test_expected_value_degenerate_and_contradiction(name):
    m = fixture_model(name)
    t = next(iter(m.times))
    never = Not(TimeEq(t, t))
    for w in m.worlds:
        for a in m.times:
            for b in m.times:
                if m.times[a] > m.times[b]:
                    continue
                assert expected_future_probability(m, a, b, w, never) == 0
        atom = Occ(t, t, next(iter(sorted(m.events))))
        assert expected_future_probability(m, t, t, w, atom) == probability(m, t, w, atom)


def test_expected_value_rejects_reversed_times():
    with pytest.raises(ValueError):
        expected_future_probability(fixture_model("coin"), "t2", "t0", "fair-heads", HEADS)


def test_schema_instance_validation():
    with pytest.raises(ValueError, match="unknown schema"):
        SchemaInstance("telepathy", ("t0",), (HEADS,))
    with pytest.raises(ValueError, match="alpha"):
        SchemaInstance("miller", ("t0", "t1"), (HEADS,), Fraction(3, 2))
    with pytest.raises(ValueError, match="past-determined"):
        past_determined("t0", "t1", "t2", HEADS)


def test_detachment_skips_models_without_the_entailment():
    m = fixture_model("coin")
    res = check_schema(m, SchemaInstance("detachment", ("t0",), (HEADS, Occ("t1", "t2", "tails"))))
    assert res and "does not hold" in res.detail


def test_car_detachment_step():
    m = fixture_model("car")
    wide, narrow = Holds("tM", "tMp", "below-freezing"), Holds("ts", "tsp", "below-freezing")
    assert check_schema(m, SchemaInstance("detachment", ("t0",), (wide, narrow)))
    assert probability(m, "t0", "cold-key-start", narrow) >= Fraction(4, 5)


@settings(max_examples=40, deadline=None)
@given(model_and_formulas(), ALPHAS)
def test_miller_holds_on_generated_models(mf, alpha):
    m, fs = mf
    ev = Evaluator(m)
    for inst in sample_instances(m, fs, ("miller",), (alpha,)):
        assert check_schema(m, inst, ev)


@settings(max_examples=40, deadline=None)
@given(model_and_formulas())
def test_expected_value_identity_on_generated_models(mf):
    m, fs = mf
    ev = Evaluator(m)
    for a in m.times:
        for b in m.times:
            if m.times[a] > m.times[b]:
                continue
            for w in m.worlds:
                for f in fs:
                    assert expected_future_probability(m, a, b, w, f, ev) == ev.probability(m.times[a], w, f)


@settings(max_examples=40, deadline=None)
@given(model_and_formulas())
def test_valid_families_and_detachment_on_generated_models(mf):
    m, fs = mf
    ev = Evaluator(m)
    fams = ("past-determined", "inevitable-certain", "inevitability-persists")
    for inst in sample_instances(m, fs, fams):
        assert check_schema(m, inst, ev)
    for t in m.times:
        for a in fs:
            for b in fs:
                assert check_schema(m, SchemaInstance("detachment", (t,), (And(a, b), a)), ev)


def test_expected_value_needs_coherent_chances():
    # clean under C1-C6, but the t0 chances are not the mixture of the t1 ones
    m = fixture_model("coin")
    t0 = m.times["t0"]
    skew = Distribution({"fair-heads": Fraction(1, 2), "fair-tails": Fraction(1, 4), "biased-heads": Fraction(1, 8), "biased-tails": Fraction(1, 8)})
    m2 = replace(m, measures={**m.measures, **{(t0, w): skew for w in m.worlds}})
    assert not check_constraints(m2) and check_coherence(m2)
    assert probability(m2, "t0", "fair-heads", HEADS) == Fraction(5, 8)
    assert expected_future_probability(m2, "t0", "t1", "fair-heads", HEADS) == Fraction(11, 20)
    bad = [i for i in sample_instances(m2, [HEADS], ("miller",)) if not check_schema(m2, i)]
    assert bad
