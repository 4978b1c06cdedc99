"""Audit a model against constraints C1-C6.

Every check is exhaustive over the finite model. C3 is checked on the
grid of time points only. A report is falsy exactly when the model is
clean.

``check_coherence`` is a separate audit that is not one of C1-C6: it asks
that the chance at a time, conditioned on a later R-class of positive
mass, equal the chance that class assigns. C1-C6 alone do not give the
expected-value principle or Miller's principle; this condition does.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .model import Model

CONSTRAINTS = ("C1", "C2", "C3", "C4", "C5", "C6")


@dataclass(frozen=True)
class Violation:
    constraint: str
    witness: tuple
    message: str

    def to_json(self) -> dict[str, Any]:
        return {
            "constraint": self.constraint,
            "witness": [str(x) for x in self.witness],
            "message": self.message,
        }


@dataclass
class ViolationReport:
    entries: list[Violation] = field(default_factory=list)
    scope: str = "C1-C6"

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def labels(self) -> set[str]:
        return {v.constraint for v in self.entries}

    def add(self, constraint: str, witness: tuple, message: str) -> None:
        self.entries.append(Violation(constraint, witness, message))

    def render(self) -> str:
        if not self.entries:
            return f"clean: {self.scope} all hold" if self.scope == "C1-C6" else f"clean: {self.scope} holds"
        return "\n".join(f"{v.constraint}: {v.message}" for v in self.entries)

    def to_json(self) -> dict[str, Any]:
        return {"scope": self.scope, "clean": not self.entries, "violations": [v.to_json() for v in self.entries]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def check_constraints(m: Model, strict_c3: bool = False) -> ViolationReport:
    """Exhaustively check C1-C6.

    ``strict_c3`` drops the side conditions t1 != t3 and t2 != t4 from C3,
    so a fact must hold over every grid subinterval, point intervals at
    either end included.
    """
    report = ViolationReport()
    _c1(m, report)
    _c2(m, report)
    _c3(m, report, strict_c3)
    _c4(m, report)
    _c5(m, report)
    _c6(m, report)
    return report


def _c1(m: Model, report: ViolationReport) -> None:
    for t1, t2 in itertools.combinations(m.points, 2):
        for w1, w2 in itertools.permutations(m.worlds, 2):
            if m.related(t2, w1, w2) and not m.related(t1, w1, w2):
                report.add(
                    "C1",
                    (t1, t2, w1, w2),
                    f"{w1} and {w2} share a past up to {t2} but not up to earlier {t1}",
                )


def _c2(m: Model, report: ViolationReport) -> None:
    known = set(m.worlds)
    for t in m.points:
        seen: dict[str, int] = {}
        for i, cls in enumerate(m.partitions.get(t, ())):
            if not cls:
                report.add("C2", (t,), f"empty class in the partition at {t}")
            for w in sorted(cls):
                if w not in known:
                    report.add("C2", (t, w), f"unknown world {w} in the partition at {t}")
                elif w in seen:
                    report.add("C2", (t, w), f"{w} lies in two classes at {t}, so R is not transitive")
                seen[w] = i
        for w in m.worlds:
            if w not in seen:
                report.add("C2", (t, w), f"{w} lies in no class at {t}, so R is not reflexive")


def _c3(m: Model, report: ViolationReport, strict: bool) -> None:
    pts = m.points
    for fact in sorted(m.facts):
        ext = m.facts[fact]
        for t1, t4, w in sorted(ext, key=lambda e: (e[2], e[0], e[1])):
            for t2, t3 in itertools.combinations_with_replacement(pts, 2):
                if not (t1 <= t2 <= t3 <= t4):
                    continue
                if not strict and (t1 == t3 or t2 == t4):
                    continue
                if (t2, t3, w) not in ext:
                    report.add(
                        "C3",
                        (fact, w, t1, t4, t2, t3),
                        f"{fact} holds over ({t1}, {t4}) in {w} but not over ({t2}, {t3})",
                    )


def _c4(m: Model, report: ViolationReport) -> None:
    symbols = sorted(m.facts.items()) + sorted(m.events.items())
    by_world: dict[str, set[tuple[str, Fraction, Fraction]]] = {w: set() for w in m.worlds}
    for sym, ext in symbols:
        for a, b, w in ext:
            if w in by_world:
                by_world[w].add((sym, a, b))
    for t in m.points:
        for w1, w2 in itertools.combinations(m.worlds, 2):
            if not m.related(t, w1, w2):
                continue
            diff = {e for e in by_world[w1] ^ by_world[w2] if e[2] <= t}
            for sym, a, b in sorted(diff):
                inside = w1 if (sym, a, b) in by_world[w1] else w2
                report.add(
                    "C4",
                    (t, w1, w2, sym, a, b),
                    f"{w1} and {w2} are R-related at {t} but disagree on {sym} over ({a}, {b})"
                    f" (only {inside} has it)",
                )


def _c5(m: Model, report: ViolationReport) -> None:
    for t in m.points:
        for w in m.worlds:
            dist = m.measures.get((t, w))
            if dist is None:
                continue
            mass = dist.measure(m.accessible(t, w))
            if mass != 1:
                report.add("C5", (t, w, mass), f"mu at ({t}, {w}) gives R_t^w mass {mass}, not 1")


def _c6(m: Model, report: ViolationReport) -> None:
    for t in m.points:
        for w1, w2 in itertools.combinations(m.worlds, 2):
            if m.related(t, w1, w2) and m.measures.get((t, w1)) != m.measures.get((t, w2)):
                report.add(
                    "C6",
                    (t, w1, w2),
                    f"{w1} and {w2} share a past up to {t} but have different chance functions",
                )


def check_coherence(m: Model) -> ViolationReport:
    """Chance at t conditioned on a later class of positive mass is that class's chance."""
    report = ViolationReport(scope="coherence")
    for i, t in enumerate(m.points):
        for w in m.worlds:
            mu = m.measures[(t, w)]
            for t2 in m.points[i + 1 :]:
                for cls in m.partitions[t2]:
                    mass = mu.measure(cls)
                    if mass == 0:
                        continue
                    rep = min(cls, key=m.worlds.index)
                    if mu.conditional(cls) != m.measures[(t2, rep)]:
                        report.add(
                            "coherence",
                            (t, t2, w, rep),
                            f"mu at ({t}, {w}) conditioned on the class of {rep} at {t2}"
                            f" differs from mu at ({t2}, {rep})",
                        )
    return report
