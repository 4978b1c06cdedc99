"""Seeded random models and formulas, plus a random-search model finder.

Models are built to satisfy C1-C6 rather than filtered for them:

* partitions refine as time grows (C1) and are partitions (C2);
* an extent cell (symbol, interval, R-class at the interval's end) is
  drawn once for the whole class, so R-related worlds agree on the past
  (C4); fact extents are then closed under subintervals, re-spreading
  over classes until nothing changes (C3 in its strict form, hence also
  the literal one);
* chance functions are drawn per (time, class) inside the class (C5,
  C6), top-down: a later class of positive mass inherits its parent's
  chance conditioned on it, so generated models are also coherent.
"""

from __future__ import annotations

import itertools
import random
import time as _time
from dataclasses import dataclass, replace
from fractions import Fraction

from .constraints import check_constraints
from .formula import (
    And,
    CondProbCmp,
    Formula,
    Holds,
    Implies,
    Inev,
    Monomial,
    Not,
    Occ,
    Or,
    Polynomial,
    Poss,
    ProbCmp,
    TimeEq,
    TimeLe,
    TimeLt,
    event_symbols,
    fact_symbols,
    subformulas,
    time_symbols,
)
from .model import Distribution, Extent, Model, Partition
from .semantics import Evaluator


@dataclass(frozen=True)
class GenParams:
    max_worlds: int = 4
    max_times: int = 4
    max_facts: int = 2
    max_events: int = 2
    seed: int = 0
    mass_granularity: int = 10

    def __post_init__(self) -> None:
        for name in ("max_worlds", "max_times", "max_facts", "max_events", "mass_granularity"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass(frozen=True)
class Signature:
    """Symbols a generated model must interpret."""

    times: tuple[str, ...]
    facts: tuple[str, ...] = ()
    events: tuple[str, ...] = ()
    # time comparisons the assignment should respect; a search hint only
    order: tuple[Formula, ...] = ()
    # (kind, symbol, start, end) for every HOLDS/OCC atom; extents favour these
    cells: tuple[tuple[str, str, str, str], ...] = ()

    @classmethod
    def of(cls, f: Formula) -> Signature:
        cells = {("fact", g.fact, g.start, g.end) for g in subformulas(f) if isinstance(g, Holds)}
        cells |= {("event", g.event, g.start, g.end) for g in subformulas(f) if isinstance(g, Occ)}
        return cls(
            tuple(sorted(time_symbols(f))),
            tuple(sorted(fact_symbols(f))),
            tuple(sorted(event_symbols(f))),
            tuple(_order_hints(f)),
            tuple(sorted(cells)),
        )


def _order_hints(f: Formula) -> list[Formula]:
    """Time comparisons among the top-level conjuncts of ``f``."""
    if isinstance(f, And):
        return _order_hints(f.left) + _order_hints(f.right)
    return [f] if isinstance(f, (TimeEq, TimeLe, TimeLt)) else []


def _respects(times: dict[str, Fraction], hints) -> bool:
    ops = {TimeEq: lambda a, b: a == b, TimeLe: lambda a, b: a <= b, TimeLt: lambda a, b: a < b}
    return all(ops[type(h)](times[h.left], times[h.right]) for h in hints)


def _assign_times(rng: random.Random, p: GenParams, grid, sig: Signature) -> dict[str, Fraction]:
    for _ in range(64):
        n = rng.randint(1, max(1, min(p.max_times, len(sig.times))))
        pool = sorted(rng.sample(grid, n))
        times = {s: rng.choice(pool) for s in sig.times}
        if _respects(times, sig.order):
            break
    return times


def _random_partition(rng: random.Random, items: list[str]) -> list[list[str]]:
    k = rng.randint(1, len(items))
    groups: dict[int, list[str]] = {}
    for w in items:
        groups.setdefault(rng.randrange(k), []).append(w)
    return list(groups.values())


def _partitions(rng: random.Random, worlds: tuple[str, ...], points: list[Fraction]) -> dict[Fraction, Partition]:
    order = {w: i for i, w in enumerate(worlds)}
    out: dict[Fraction, Partition] = {}
    current = [list(worlds)] if rng.random() < 0.5 else _random_partition(rng, list(worlds))
    for i, t in enumerate(points):
        if i:
            current = [g for cls in current for g in (_random_partition(rng, cls) if rng.random() < 0.6 else [cls])]
        out[t] = tuple(sorted((frozenset(c) for c in current), key=lambda c: min(order[w] for w in c)))
    return out


def _class_of(partitions: dict[Fraction, Partition]) -> dict[tuple[Fraction, str], frozenset[str]]:
    return {(t, w): cls for t, part in partitions.items() for cls in part for w in cls}


def _intervals(points: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    return list(itertools.combinations_with_replacement(points, 2))


def _draw_extent(rng, partitions, points, density: float, focus=()) -> set[Extent]:
    ext: set[Extent] = set()
    for a, b in _intervals(points):
        d = 0.5 if (a, b) in focus else density
        for cls in partitions[b]:
            if rng.random() < d:
                ext.update((a, b, w) for w in cls)
    return ext


def _focus(times: dict[str, Fraction], cells, kind: str, sym: str) -> set[tuple[Fraction, Fraction]]:
    return {(times[a], times[b]) for k, s, a, b in cells if k == kind and s == sym and times[a] <= times[b]}


def _close_fact(ext: set[Extent], partitions, points) -> frozenset[Extent]:
    """Least superset closed under grid subintervals and agreement within classes."""
    class_of = _class_of(partitions)
    ext = set(ext)
    changed = True
    while changed:
        changed = False
        for a, d, w in list(ext):
            for b, c in _intervals([t for t in points if a <= t <= d]):
                if (b, c, w) not in ext:
                    ext.add((b, c, w))
                    changed = True
        for a, b, w in list(ext):
            for v in class_of[(b, w)]:
                if (a, b, v) not in ext:
                    ext.add((a, b, v))
                    changed = True
    return frozenset(ext)


def _fresh(rng: random.Random, cls: list[str], g: int) -> Distribution:
    cuts = sorted(rng.randint(0, g) for _ in range(len(cls) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [g])]
    return Distribution({w: Fraction(k, g) for w, k in zip(cls, parts)})


def _measures(rng, worlds, points, partitions, g) -> dict[tuple[Fraction, str], Distribution]:
    order = {w: i for i, w in enumerate(worlds)}
    out: dict[tuple[Fraction, str], Distribution] = {}
    prev = None
    for t in points:
        for cls in partitions[t]:
            members = sorted(cls, key=order.__getitem__)
            dist = None
            if prev is not None:
                parent = out[(prev, members[0])]
                if parent.measure(cls):
                    dist = parent.conditional(cls)
            if dist is None:
                dist = _fresh(rng, members, g)
            for w in members:
                out[(t, w)] = dist
        prev = t
    return out


def generate_model(p: GenParams, signature: Signature | None = None) -> Model:
    """A model satisfying C1-C6 (and coherence); a pure function of ``p`` and ``signature``."""
    rng = random.Random(p.seed)
    worlds = tuple(f"w{i}" for i in range(rng.randint(1, p.max_worlds)))
    grid = [Fraction(i, 2) for i in range(2 * p.max_times + 1)]
    if signature is None:
        n = rng.randint(1, p.max_times)
        points = sorted(rng.sample(grid, n))
        times = {f"t{i}": v for i, v in enumerate(points)}
        facts = [f"f{i}" for i in range(rng.randint(1, p.max_facts))]
        events = [f"e{i}" for i in range(rng.randint(1, p.max_events))]
    else:
        times = _assign_times(rng, p, grid, signature)
        points = sorted(set(times.values()))
        facts, events = list(signature.facts), list(signature.events)
    cells = signature.cells if signature else ()
    partitions = _partitions(rng, worlds, points)
    dens = (0.05, 0.2) if cells else (0.2, 0.4, 0.6)
    fact_ext = {
        s: _close_fact(
            _draw_extent(rng, partitions, points, rng.choice(dens), _focus(times, cells, "fact", s)), partitions, points
        )
        for s in facts
    }
    event_ext = {
        s: frozenset(_draw_extent(rng, partitions, points, rng.choice(dens), _focus(times, cells, "event", s)))
        for s in events
    }
    measures = _measures(rng, worlds, points, partitions, p.mass_granularity)
    return Model(worlds, times, fact_ext, event_ext, partitions, measures)


def _shift_mass(m: Model, rng: random.Random, g: int) -> Model | None:
    """Move 1/g of chance between two worlds of one class, then re-condition later chances."""
    options = [(i, cls) for i, t in enumerate(m.points) for cls in m.partitions[t] if len(cls) > 1]
    if not options:
        return None
    i, cls = rng.choice(options)
    t = m.points[i]
    members = sorted(cls, key=m.worlds.index)
    dist = m.measures[(t, members[0])]
    src = [w for w in members if dist.mass(w) > 0]
    a = rng.choice(src)
    b = rng.choice([w for w in members if w != a])
    step = min(Fraction(1, g), dist.mass(a))
    masses = {w: dist.mass(w) for w in members}
    masses[a] -= step
    masses[b] += step
    measures = dict(m.measures)
    new = Distribution(masses)
    for w in members:
        measures[(t, w)] = new
    for prev, later in zip(m.points[i:], m.points[i + 1 :]):
        for c in m.partitions[later]:
            rep = min(c, key=m.worlds.index)
            parent = measures[(prev, rep)]
            if parent.measure(c):
                d = parent.conditional(c)
                for w in c:
                    measures[(later, w)] = d
    return replace(m, measures=measures)


def mutate(m: Model, rng: random.Random, granularity: int = 10, cells=()) -> Model:
    """A constraint-preserving local edit.

    Toggles one extent cell, shifts a little chance inside a class, or
    redraws every chance function. ``cells`` (see :class:`Signature`)
    makes toggles favour the intervals a formula talks about.
    """
    points = list(m.points)
    symbols = [("fact", s) for s in m.facts] + [("event", s) for s in m.events]
    roll = rng.random()
    if roll < 0.35:
        shifted = _shift_mass(m, rng, granularity)
        if shifted is not None:
            return shifted
    if not symbols or roll < 0.5:
        return replace(m, measures=_measures(rng, m.worlds, points, m.partitions, granularity))
    focus = [c for c in cells if m.times[c[2]] <= m.times[c[3]]]
    if focus and rng.random() < 0.8:
        kind, sym, a, b = rng.choice(focus)
        a, b = m.times[a], m.times[b]
    else:
        kind, sym = rng.choice(symbols)
        a, b = rng.choice(_intervals(points))
    cls = rng.choice(m.partitions[b])
    table = dict(m.facts if kind == "fact" else m.events)
    ext = set(table[sym])
    cell = {(a, b, w) for w in cls}
    ext = ext - cell if cell <= ext else ext | cell
    if kind == "fact":
        table[sym] = _close_fact(ext, m.partitions, points)
        return replace(m, facts=table)
    table[sym] = frozenset(ext)
    return replace(m, events=table)


# formulas

_COEFS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1), Fraction(1, 3), Fraction(-3, 2))
_BOUNDS = tuple(Fraction(i, 9) for i in range(10)) + (Fraction(1, 2),)
_OPS = (">=", "<=", "=", ">", "<")


def sample_formula(p: GenParams, m: Model, depth: int, rng: random.Random | None = None) -> Formula:
    """A random formula over ``m``'s symbols with nesting at most ``depth``."""
    rng = rng or random.Random(p.seed)
    names = sorted(m.times, key=lambda s: (m.times[s], s))

    def interval() -> tuple[str, str]:
        a, b = rng.choice(names), rng.choice(names)
        if m.times[a] > m.times[b] and rng.random() < 0.9:
            a, b = b, a
        return a, b

    def atom() -> Formula:
        options = ["time"]
        if m.facts:
            options += ["holds"] * 3
        if m.events:
            options += ["occ"] * 3
        kind = rng.choice(options)
        if kind == "holds":
            return Holds(*interval(), rng.choice(sorted(m.facts)))
        if kind == "occ":
            return Occ(*interval(), rng.choice(sorted(m.events)))
        node = rng.choice((TimeEq, TimeLe, TimeLt))
        return node(rng.choice(names), rng.choice(names))

    def poly(d: int) -> Polynomial:
        terms = []
        for _ in range(rng.choice((1, 1, 2))):
            factors = tuple(go(d) for _ in range(rng.choice((1, 1, 2))))
            terms.append(Monomial(rng.choice(_COEFS), factors))
        return Polynomial(tuple(terms))

    def go(d: int) -> Formula:
        if d <= 0:
            return atom()
        kind = rng.choices(
            ("atom", "not", "and", "or", "implies", "inev", "poss", "prob", "cond"),
            weights=(3, 2, 2, 2, 1, 2, 1, 3, 1),
        )[0]
        if kind == "atom":
            return atom()
        if kind == "not":
            return Not(go(d - 1))
        if kind in ("and", "or", "implies"):
            node = {"and": And, "or": Or, "implies": Implies}[kind]
            return node(go(d - 1), go(d - 1))
        t = rng.choice(names)
        if kind == "inev":
            return Inev(t, go(d - 1))
        if kind == "poss":
            return Poss(t, go(d - 1))
        if kind == "cond":
            return CondProbCmp(t, go(d - 1), go(d - 1), rng.choice(_OPS), rng.choice(_BOUNDS))
        lhs = poly(d - 1)
        rhs = Polynomial((Monomial(rng.choice(_BOUNDS)),)) if rng.random() < 0.7 else poly(d - 1)
        return ProbCmp(t, lhs, rng.choice(_OPS), rhs)

    return go(depth)


# bounded model finding


@dataclass(frozen=True)
class SatResult:
    model: Model
    world: str
    trials: int


def _distance(ev: Evaluator, f: Formula, w: str) -> Fraction:
    """How far ``f`` is from holding at ``w``: 0 iff it holds.

    Top-level conjuncts add up; a false probability comparison counts its
    exact gap, any other false conjunct counts 1.
    """
    if isinstance(f, And):
        return _distance(ev, f.left, w) + _distance(ev, f.right, w)
    if ev.truth(f, w):
        return Fraction(0)
    if not isinstance(f, (ProbCmp, CondProbCmp)):
        return Fraction(1)
    return min(Fraction(1), abs(ev.margin(f, w))) or Fraction(1, 1000)


def bounded_sat(
    f: Formula, p: GenParams = GenParams(), budget: int = 20000, timeout: float | None = None
) -> SatResult | None:
    """Randomised local search for a constraint-satisfying model of ``f``.

    Starting from generated models, edits that do not move ``f`` further
    from holding (see :func:`_distance`) are kept; a run that stalls is
    restarted from a fresh model. Returns ``None`` when the budget (trials)
    or ``timeout`` (seconds) runs out; that is no evidence that ``f`` is
    unsatisfiable.
    """
    sig = Signature.of(f)
    if not sig.times:
        sig = replace(sig, times=("t0",))
    rng = random.Random(p.seed)
    deadline = None if timeout is None else _time.monotonic() + timeout
    m, score, stall = None, None, 0
    for trial in range(1, budget + 1):
        if deadline is not None and _time.monotonic() > deadline:
            break
        fresh = m is None or stall >= _PATIENCE
        cand = generate_model(replace(p, seed=rng.getrandbits(64)), sig) if fresh else mutate(m, rng, p.mass_granularity, sig.cells)
        ev = Evaluator(cand)
        dist = min(_distance(ev, f, w) for w in cand.worlds)
        if dist == 0:
            w = next(w for w in cand.worlds if ev.truth(f, w))
            if not check_constraints(cand):
                return SatResult(cand, w, trial)
        if fresh or dist < score:
            m, score, stall = cand, dist, 0
        else:
            stall += 1
            if dist == score or rng.random() < 0.05:
                m, score = cand, dist
    return None


_PATIENCE = 32
