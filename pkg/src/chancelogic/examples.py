"""Built-in worked examples: the coin, car and carry models.

Each example pairs a model with premises (checked to be true at every
world) and conclusions. Every number shown by ``example`` is recomputed
from the model here; nothing is stored as an answer except the bound it
is compared with.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources

from .formula import COMPARATORS, Formula
from .model import Distribution, Model, build_model
from .principles import SchemaInstance, check_schema, expected_future_probability
from .semantics import Evaluator, counterexample, entails_in_model
from .syntax import format_rational, parse_formula, parse_model

NAMES = ("coin", "car", "carry")


@dataclass(frozen=True)
class Query:
    """A number or truth value computed from the model, compared with ``bound``.

    kind ``prob``    P_time(formula) at ``world``
         ``expect``  expected chance at ``future`` seen from ``time``
         ``valid``   formula true at every world (value is a bool)
         ``entails`` formula entails ``other`` (value is a bool)
         ``miller``  Miller instance (time, future, formula, bound as alpha)
    """

    label: str
    kind: str
    formula: Formula
    op: str = "="
    bound: Fraction | bool = True
    time: str | None = None
    future: str | None = None
    world: str | None = None
    other: Formula | None = None


@dataclass(frozen=True)
class QueryResult:
    query: Query
    value: Fraction | bool
    ok: bool

    def render(self) -> str:
        q, mark = self.query, "ok  " if self.ok else "FAIL"
        if isinstance(self.value, bool):
            return f"[{mark}] {q.label}: {'holds' if self.value else 'fails'}"
        shown = f"{format_rational(self.value)} = {float(self.value):g}"
        return f"[{mark}] {q.label}: {shown} {q.op} {format_rational(q.bound)}"

    @property
    def statement(self) -> str:
        q = self.query
        return f"{q.formula}  entails  {q.other}" if q.kind == "entails" else str(q.formula)

    def to_json(self) -> dict:
        v = self.value if isinstance(self.value, bool) else format_rational(self.value)
        out = {"label": self.query.label, "kind": self.query.kind, "formula": self.statement, "value": v, "ok": self.ok}
        if not isinstance(self.value, bool):
            out["decimal"] = float(self.value)
            out["op"] = self.query.op
            out["bound"] = format_rational(self.query.bound)
        return out


def run_query(m: Model, q: Query, ev: Evaluator | None = None) -> QueryResult:
    ev = ev or Evaluator(m)
    if q.kind == "valid":
        value = counterexample(m, q.formula, ev) is None
        return QueryResult(q, value, value == q.bound)
    if q.kind == "entails":
        value = entails_in_model(m, q.formula, q.other, ev)
        return QueryResult(q, value, value == q.bound)
    if q.kind == "miller":
        value = bool(check_schema(m, SchemaInstance("miller", (q.time, q.future), (q.formula,), q.bound), ev))
        return QueryResult(q, value, value)
    if q.kind == "prob":
        value = ev.probability(m.time(q.time), q.world, q.formula)
    elif q.kind == "expect":
        value = expected_future_probability(m, q.time, q.future, q.world, q.formula, ev)
    else:
        raise ValueError(f"unknown query kind {q.kind!r}")
    return QueryResult(q, value, COMPARATORS[q.op](value, q.bound))


@dataclass(frozen=True)
class Fixture:
    name: str
    narrative: str
    model: Model
    premises: tuple[Query, ...] = ()
    conclusions: tuple[Query, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def run(self) -> tuple[list[QueryResult], list[QueryResult]]:
        ev = Evaluator(self.model)
        return [run_query(self.model, q, ev) for q in self.premises], [
            run_query(self.model, q, ev) for q in self.conclusions
        ]


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown example {name!r}; expected one of {', '.join(NAMES)}")
    return resources.files("chancelogic").joinpath("fixtures").joinpath(f"{name}.json").read_text()


def fixture_model(name: str) -> Model:
    return build_model(parse_model(fixture_text(name)))


def _f(text: str) -> Formula:
    return parse_formula(text)


def _coin() -> Fixture:
    m = fixture_model("coin")
    heads = _f("OCC(t1,t2,heads)")
    w = m.worlds[0]
    return Fixture(
        "coin",
        "At t0 one of two coins is picked at random: the fair coin with chance 1/2, "
        "a coin biased 7/10 towards heads otherwise. The picked coin is flipped "
        "between t1 and t2.",
        m,
        premises=(
            Query("the fair coin is picked with chance 1/2", "prob", _f("OCC(t0,t1,choose-fair)"), "=", Fraction(1, 2), "t0", world=w),
            Query("a fair coin lands heads with chance 1/2", "prob", heads, "=", Fraction(1, 2), "t1", world="fair-heads"),
            Query("the biased coin lands heads with chance 7/10", "prob", heads, "=", Fraction(7, 10), "t1", world="biased-heads"),
        ),
        conclusions=(
            Query("P[t0](heads)", "prob", heads, "=", Fraction(3, 5), "t0", world=w),
            Query("expected chance of heads at t1, seen from t0", "expect", heads, "=", Fraction(3, 5), "t0", "t1", w),
            Query("Miller instance, t0 <= t1, alpha 7/10", "miller", heads, bound=Fraction(7, 10), time="t0", future="t1"),
        ),
    )


def _car() -> Fixture:
    m = fixture_model("car")
    w = m.worlds[0]
    start, key = "OCC(ts,tsp,start)", "OCC(ts,tsp,turn-key)"
    cold_s, cold_m = "HOLDS(ts,tsp,below-freezing)", "HOLDS(tM,tMp,below-freezing)"
    return Fixture(
        "car",
        "The car starts 3/10 of the time when the key is turned below freezing, and "
        "there is a 4/5 chance it is below freezing all morning (tM to tMp). The "
        "start attempt (ts to tsp) lies inside the morning. Turning the key is "
        "independent of the temperature. Warm weather always lets the car start, "
        "which attains the upper bound on P(start).",
        m,
        premises=(
            Query("start given key and cold", "valid", _f(f"P[t0]({start} | {key} & {cold_s}) = 3/10")),
            Query("cold all morning", "valid", _f(f"P[t0]({cold_m}) = 4/5")),
            Query("attempt lies inside the morning", "valid", _f("tM <= ts & ts < tsp & tsp <= tMp")),
            Query("key and temperature independent", "valid", _f(f"P[t0]({key} & {cold_s}) = P[t0]({key}) * P[t0]({cold_s})")),
        ),
        conclusions=(
            Query("cold over the morning entails cold during the attempt", "entails", _f(cold_m), other=_f(cold_s)),
            Query("P[t0](cold during attempt)", "prob", _f(cold_s), ">=", Fraction(4, 5), "t0", world=w),
            Query("P[t0](start & key)", "prob", _f(f"{start} & {key}"), "=", Fraction(6, 25), "t0", world=w),
            Query("P[t0](start)", "prob", _f(start), "<=", Fraction(11, 25), "t0", world=w),
        ),
        notes=("the bound 11/25 is attained because the warm-weather start chance is 1",),
    )


def _carry() -> Fixture:
    m = fixture_model("carry")
    co = "OCC(t1,t2,carry-b1) & OCC(t1,t2,carry-b2)"
    full = "HOLDS(t1,t2,plane-full)"
    return Fixture(
        "carry",
        "There is an even chance the plane will be full. If it is full, there is a "
        "4/5 chance it will be impossible to carry both bags on board. Six "
        "world-histories realise one model of these premises; the masses are a "
        "reconstruction, one witness among many.",
        m,
        premises=(
            Query("no co-carry given a full plane", "valid", _f(f"P[now](~POSS[t1]({co}) | {full}) = 4/5")),
            Query("plane full", "valid", _f(f"P[now]({full}) = 1/2")),
            Query("time order", "valid", _f("now < t1 & t1 < t2")),
        ),
        conclusions=(
            Query("P[now](not possible to co-carry)", "prob", _f(f"~POSS[t1]({co})"), ">=", Fraction(2, 5), "now", world="w1"),
            Query("co-carry will have chance 0 at t1", "valid", _f(f"P[now](P[t1]({co}) = 0) >= 2/5")),
            Query("P[now](co-carry)", "prob", _f(co), "<=", Fraction(3, 5), "now", world="w1"),
        ),
    )


_BUILDERS = {"coin": _coin, "car": _car, "carry": _carry}


def load_fixture(name: str) -> Fixture:
    if name not in _BUILDERS:
        raise KeyError(f"unknown example {name!r}; expected one of {', '.join(NAMES)}")
    return _BUILDERS[name]()


# Single-edit mutations of valid fixtures, one per constraint.


def _swap_partition(m: Model, t: str, classes) -> Model:
    parts = dict(m.partitions)
    parts[m.times[t]] = tuple(frozenset(c) for c in classes)
    return replace(m, partitions=parts)


def _swap_measure(m: Model, t: str, w: str, dist: Distribution) -> Model:
    measures = dict(m.measures)
    measures[(m.times[t], w)] = dist
    return replace(m, measures=measures)


def _edit_extent(m: Model, kind: str, sym: str, cell, add: bool) -> Model:
    table = dict(m.facts if kind == "fact" else m.events)
    a, b, w = cell
    entry = (m.times[a], m.times[b], w)
    table[sym] = table[sym] | {entry} if add else table[sym] - {entry}
    return replace(m, **{"facts" if kind == "fact" else "events": table})


def _c1(m: Model) -> Model:
    # w1 and w2 share a class at t2 though they were apart at t1
    return _swap_partition(m, "t2", [{"w1", "w2"}, {"w3"}, {"w4"}, {"w5"}, {"w6"}])


def _c2(m: Model) -> Model:
    return _swap_partition(m, "t1", [{"fair-heads", "fair-tails"}, {"biased-heads"}])


def _c3(m: Model) -> Model:
    return _edit_extent(m, "fact", "fair-coin", ("t0", "t2", "fair-heads"), add=True)


def _c4(m: Model) -> Model:
    return _edit_extent(m, "event", "choose-fair", ("t0", "t1", "fair-tails"), add=False)


def _c5(m: Model) -> Model:
    return _swap_measure(m, "t2", "fair-heads", Distribution.point("fair-tails"))


def _c6(m: Model) -> Model:
    return _swap_measure(m, "t1", "fair-heads", Distribution.point("fair-heads"))


MUTATIONS = {
    "C1": ("carry", _c1),
    "C2": ("coin", _c2),
    "C3": ("coin", _c3),
    "C4": ("coin", _c4),
    "C5": ("coin", _c5),
    "C6": ("coin", _c6),
}


def mutated_fixture(constraint: str) -> Model:
    """The fixture model with one edit that breaks ``constraint``."""
    name, edit = MUTATIONS[constraint]
    return edit(fixture_model(name))
