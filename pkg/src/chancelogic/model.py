"""Finite models: worlds, rational time points, extents, R and PR.

A model stores time points as :class:`~fractions.Fraction` values and
keeps the denotation of time symbols in ``times``. ``R`` is stored as one
partition of the worlds per time point, ``PR`` as one
:class:`Distribution` per (time point, world).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping

from .syntax import ModelDescription

Extent = tuple[Fraction, Fraction, str]
Partition = tuple[frozenset[str], ...]


class ModelError(ValueError):
    """Unknown world, time or symbol."""


class BuildError(ValueError):
    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)


class Distribution:
    """Exact probability masses over worlds; zero masses are dropped."""

    __slots__ = ("_masses",)

    def __init__(self, masses: Mapping[str, Any]):
        clean = {}
        for w, m in masses.items():
            m = Fraction(m)
            if m < 0:
                raise ValueError(f"negative mass {m} on {w!r}")
            if m:
                clean[w] = m
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        self._masses = dict(sorted(clean.items()))

    @classmethod
    def point(cls, world: str) -> Distribution:
        return cls({world: 1})

    def mass(self, world: str) -> Fraction:
        return self._masses.get(world, Fraction(0))

    def measure(self, worlds: Iterable[str]) -> Fraction:
        m = self._masses
        return sum((m[w] for w in worlds if w in m), Fraction(0))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._masses)

    def items(self):
        return self._masses.items()

    def conditional(self, worlds: Iterable[str]) -> Distribution:
        ws = set(worlds)
        total = self.measure(ws)
        if total == 0:
            raise ZeroDivisionError("conditioning on a null set")
        return Distribution({w: m / total for w, m in self._masses.items() if w in ws})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Distribution) and self._masses == other._masses

    def __hash__(self) -> int:
        return hash(frozenset(self._masses.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{w}: {m}" for w, m in self._masses.items())
        return f"Distribution({{{inner}}})"


@dataclass(frozen=True, eq=False)
class Model:
    worlds: tuple[str, ...]
    times: Mapping[str, Fraction]
    facts: Mapping[str, frozenset[Extent]]
    events: Mapping[str, frozenset[Extent]]
    partitions: Mapping[Fraction, Partition]
    measures: Mapping[tuple[Fraction, str], Distribution]

    @cached_property
    def points(self) -> tuple[Fraction, ...]:
        """The time line T, ascending."""
        return tuple(sorted(set(self.times.values())))

    @cached_property
    def _point_set(self) -> frozenset[Fraction]:
        return frozenset(self.points)

    @cached_property
    def _access(self) -> dict[tuple[Fraction, str], frozenset[str]]:
        out: dict[tuple[Fraction, str], set[str]] = {}
        for t, partition in self.partitions.items():
            for cls in partition:
                for w in cls:
                    out.setdefault((t, w), set()).update(cls)
        return {k: frozenset(v) for k, v in out.items()}

    def time(self, t: str | Fraction | int) -> Fraction:
        """Resolve a time symbol, or check that a rational is a point of T."""
        if isinstance(t, str):
            if t in self.times:
                return self.times[t]
            try:
                value = Fraction(t)
            except (ValueError, ZeroDivisionError):
                raise ModelError(f"unbound time symbol {t!r}") from None
        else:
            value = Fraction(t)
        if value not in self._point_set:
            raise ModelError(f"{value} is not a time point of the model")
        return value

    def symbol_at(self, value: Fraction) -> str | None:
        """Some time symbol denoting ``value`` (the alphabetically first)."""
        names = sorted(s for s, v in self.times.items() if v == value)
        return names[0] if names else None

    def check_world(self, w: str) -> str:
        if w not in self.worlds:
            raise ModelError(f"unknown world {w!r}")
        return w

    def accessible(self, t: str | Fraction | int, w: str) -> frozenset[str]:
        """R_t^w: worlds sharing w's past up to t."""
        value = self.time(t)
        self.check_world(w)
        return self._access.get((value, w), frozenset())

    def related(self, t: Fraction, w1: str, w2: str) -> bool:
        return w2 in self._access.get((t, w1), ())

    def measure(self, t: str | Fraction | int, w: str) -> Distribution:
        """mu_t^w."""
        value = self.time(t)
        self.check_world(w)
        return self.measures[(value, w)]

    def classes(self, t: str | Fraction | int) -> Partition:
        return self.partitions[self.time(t)]

    def extent(self, symbol: str) -> frozenset[Extent]:
        if symbol in self.facts:
            return self.facts[symbol]
        if symbol in self.events:
            return self.events[symbol]
        raise ModelError(f"unknown fact or event symbol {symbol!r}")


def accessible(m: Model, t: str | Fraction | int, w: str) -> frozenset[str]:
    return m.accessible(t, w)


def _ordered_partition(groups: Iterable[Iterable[str]], order: Mapping[str, int]) -> Partition:
    out = [frozenset(g) for g in groups]
    out.sort(key=lambda c: min((order.get(w, len(order)) for w in c), default=len(order)))
    return tuple(out)


def canonical_partitions(
    worlds: tuple[str, ...],
    points: Iterable[Fraction],
    extents: Iterable[tuple[str, frozenset[Extent]]],
) -> dict[Fraction, Partition]:
    """Coarsest R satisfying C4: same class at t iff same extents ending by t."""
    history: dict[str, list[tuple[str, Fraction, Fraction]]] = {w: [] for w in worlds}
    for sym, ext in extents:
        for a, b, w in ext:
            history[w].append((sym, a, b))
    order = {w: i for i, w in enumerate(worlds)}
    out = {}
    for t in points:
        groups: dict[frozenset, list[str]] = {}
        for w in worlds:
            key = frozenset(e for e in history[w] if e[2] <= t)
            groups.setdefault(key, []).append(w)
        out[t] = _ordered_partition(groups.values(), order)
    return out


class _Resolver:
    def __init__(self, d: ModelDescription):
        self.times = dict(d.times)
        self.values = set(self.times.values())
        self.worlds = set(d.worlds)

    def time(self, ref: Any, where: str) -> Fraction:
        if isinstance(ref, str):
            if ref in self.times:
                return self.times[ref]
            raise BuildError(f"{where}: unknown time reference {ref!r}")
        value = Fraction(ref)
        if value not in self.values:
            raise BuildError(f"{where}: {value} is not one of the model's time points")
        return value

    def world(self, w: str, where: str) -> str:
        if w not in self.worlds:
            raise BuildError(f"{where}: unknown world {w!r}")
        return w


def _resolve_extents(d: ModelDescription, res: _Resolver) -> tuple[dict, dict]:
    overlap = set(d.facts) & set(d.events)
    if overlap:
        raise BuildError(f"symbols used as both fact and event: {sorted(overlap)}")
    out = []
    for kind, table in (("fact", d.facts), ("event", d.events)):
        resolved = {}
        for sym, rows in table.items():
            ext = set()
            for w, a, b in rows:
                where = f"{kind} {sym!r}"
                ta, tb = res.time(a, where), res.time(b, where)
                if ta > tb:
                    raise BuildError(f"{where}: interval ({ta}, {tb}) has start after end")
                ext.add((ta, tb, res.world(w, where)))
            resolved[sym] = frozenset(ext)
        out.append(resolved)
    return out[0], out[1]


def derive_canonical_r(d: ModelDescription) -> dict[Fraction, Partition]:
    """The coarsest partition per time point compatible with the extents (C4)."""
    res = _Resolver(d)
    facts, events = _resolve_extents(d, res)
    points = sorted(res.values)
    return canonical_partitions(tuple(d.worlds), points, list(facts.items()) + list(events.items()))


def build_model(d: ModelDescription, check: bool = True, strict_c3: bool = False) -> Model:
    """Resolve a description into a :class:`Model`.

    Per-class distributions are copied to every world of the listed class.
    With ``check`` set, any C1-C6 violation raises :class:`BuildError`
    carrying the report; with it unset the raw model is returned for
    auditing.
    """
    res = _Resolver(d)
    worlds = tuple(d.worlds)
    order = {w: i for i, w in enumerate(worlds)}
    points = sorted(res.values)
    facts, events = _resolve_extents(d, res)

    if d.r_mode == "derived":
        partitions = canonical_partitions(worlds, points, list(facts.items()) + list(events.items()))
    else:
        partitions = {}
        for ref, groups in d.classes.items():
            t = res.time(ref, "R")
            if t in partitions:
                raise BuildError(f"R: two partitions given for time {t}")
            partitions[t] = _ordered_partition(
                ([res.world(w, f"R at {t}") for w in g] for g in groups), order
            )
        missing = [t for t in points if t not in partitions]
        if missing:
            raise BuildError(f"R: no partition for time point(s) {', '.join(map(str, missing))}")

    measures: dict[tuple[Fraction, str], Distribution] = {}
    for ref, entries in d.prob.items():
        t = res.time(ref, "prob")
        for members, masses in entries:
            where = f"prob at {t}"
            for w in masses:
                res.world(w, where)
            try:
                dist = Distribution(masses)
            except ValueError as exc:
                raise BuildError(f"{where}: {exc}") from None
            for w in members:
                res.world(w, where)
                if (t, w) in measures:
                    raise BuildError(f"{where}: world {w!r} assigned two distributions")
                measures[(t, w)] = dist
    gaps = [(t, w) for t in points for w in worlds if (t, w) not in measures]
    if gaps:
        t, w = gaps[0]
        raise BuildError(f"prob: no distribution for world {w!r} at time {t} ({len(gaps)} gaps)")

    m = Model(
        worlds=worlds,
        times=dict(d.times),
        facts=facts,
        events=events,
        partitions=partitions,
        measures=measures,
    )
    if check:
        from .constraints import check_constraints

        report = check_constraints(m, strict_c3=strict_c3)
        if report:
            raise BuildError("model violates its constraints:\n" + report.render(), report)
    return m


def dump_model(m: Model) -> dict:
    """The JSON-ready file form of ``m`` (explicit R, one entry per class)."""
    fmt = _fmt
    point_name = {}
    for name, value in sorted(m.times.items()):
        point_name.setdefault(value, name)

    def extents(table):
        return {
            sym: [[w, point_name.get(a, fmt(a)), point_name.get(b, fmt(b))] for a, b, w in sorted(ext, key=lambda e: (e[2], e[0], e[1]))]
            for sym, ext in table.items()
        }

    prob = {}
    for t in m.points:
        entries = []
        groups: dict[Distribution, list[str]] = {}
        for w in m.worlds:
            groups.setdefault(m.measures[(t, w)], []).append(w)
        for dist, members in groups.items():
            entries.append({"class": members, "dist": {w: fmt(x) for w, x in dist.items()}})
        prob[point_name[t]] = entries
    return {
        "times": {name: fmt(v) for name, v in m.times.items()},
        "worlds": list(m.worlds),
        "facts": extents(m.facts),
        "events": extents(m.events),
        "R": {
            "mode": "explicit",
            "classes": {point_name[t]: [sorted(c, key=m.worlds.index) for c in m.partitions[t]] for t in m.points},
        },
        "prob": prob,
    }


def _fmt(x: Fraction) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
