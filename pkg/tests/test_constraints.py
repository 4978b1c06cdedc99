import json
from dataclasses import replace
from fractions import Fraction

import pytest

from chancelogic.constraints import CONSTRAINTS, check_coherence, check_constraints
from chancelogic.examples import MUTATIONS, NAMES, fixture_model, mutated_fixture
from chancelogic.model import Distribution, build_model
from chancelogic.syntax import parse_model


@pytest.mark.parametrize("name", NAMES)
def test_fixtures_are_clean_and_coherent(name):
    m = fixture_model(name)
    assert not check_constraints(m)
    assert not check_coherence(m)


@pytest.mark.parametrize("c", CONSTRAINTS)
def test_each_mutation_triggers_its_constraint(c):
    report = check_constraints(mutated_fixture(c))
    assert c in report.labels
    # single-edit mutations trigger their target plus at most one consequence
    assert len(report.labels) <= 2


def test_mutation_table_covers_every_constraint():
    assert set(MUTATIONS) == set(CONSTRAINTS)


def test_c1_witness_when_refinement_is_reversed():
    m = fixture_model("coin")
    t1, t2 = m.times["t1"], m.times["t2"]
    parts = dict(m.partitions)
    parts[t1], parts[t2] = tuple(frozenset({w}) for w in m.worlds), m.partitions[t1]
    report = check_constraints(replace(m, partitions=parts))
    witnesses = [v.witness for v in report if v.constraint == "C1"]
    assert (t1, t2, "fair-heads", "fair-tails") in witnesses


def _one_world(extents):
    return {
        "times": {"a": 0, "b": 1, "c": 2, "d": 3},
        "worlds": ["w"],
        "facts": {"f": extents},
        "R": {"mode": "explicit", "classes": {t: [["w"]] for t in "abcd"}},
        "prob": {t: [{"class": ["w"], "dist": {"w": 1}}] for t in "abcd"},
    }


def _audit(raw, strict=False):
    return check_constraints(build_model(parse_model(json.dumps(raw)), check=False), strict_c3=strict)


def test_c3_interior_gap():
    report = _audit(_one_world([["w", "a", "d"]]))
    gaps = {(v.witness[4], v.witness[5]) for v in report if v.constraint == "C3"}
    assert (Fraction(1), Fraction(2)) in gaps


def test_c3_side_conditions_exempt_end_points():
    names = "abcd"
    inner = [["w", x, y] for i, x in enumerate(names) for y in names[i:] if (x, y) not in {("a", "a"), ("d", "d")}]
    assert not _audit(_one_world(inner))
    strict = _audit(_one_world(inner), strict=True)
    gaps = {(v.witness[4], v.witness[5]) for v in strict}
    assert gaps == {(Fraction(0), Fraction(0)), (Fraction(3), Fraction(3))}


def test_report_rendering():
    clean = check_constraints(fixture_model("coin"))
    assert clean.render() == "clean: C1-C6 all hold"
    assert clean.to_json() == {"scope": "C1-C6", "clean": True, "violations": []}
    bad = check_constraints(mutated_fixture("C4"))
    payload = json.loads(bad.dumps())
    assert payload["clean"] is False and payload["violations"][0]["constraint"] == "C4"
    assert "C4:" in bad.render()


def test_coherence_is_separate_from_c1_c6():
    m = fixture_model("coin")
    t0 = m.times["t0"]
    skew = Distribution({"fair-heads": Fraction(1, 2), "fair-tails": Fraction(1, 4), "biased-heads": Fraction(1, 8), "biased-tails": Fraction(1, 8)})
    measures = dict(m.measures)
    for w in m.worlds:
        measures[(t0, w)] = skew
    m2 = replace(m, measures=measures)
    assert not check_constraints(m2)
    coh = check_coherence(m2)
    assert coh and coh.labels == {"coherence"} and coh.scope == "coherence"
