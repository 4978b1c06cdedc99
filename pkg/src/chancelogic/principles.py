"""Schema checkers: the valid-sentence families, Miller's principle and expected value.

Each schema is instantiated as an ordinary formula and checked with
:func:`~chancelogic.semantics.counterexample`, except detachment, which
is a rule (if f entails g then P(g) >= P(f)) rather than a sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .formula import (
    Formula,
    Holds,
    Implies,
    Inev,
    Occ,
    Or,
    P,
    TimeLe,
    prob_cmp,
)
from .model import Model, ModelError
from .semantics import Evaluator, counterexample, entails_in_model

SCHEMAS = (
    "past-determined",
    "inevitable-certain",
    "inevitability-persists",
    "detachment",
    "miller",
)

ALPHA_GRID = tuple(Fraction(i, 9) for i in range(10))


@dataclass(frozen=True)
class SchemaInstance:
    """One instance of a named schema.

    ``times`` and ``formulas`` are positional bindings whose meaning
    depends on the schema:

    past-determined         times (t0, t1, t2), formulas (HOLDS/OCC atom over (t0, t1)),
                            or use :func:`past_determined`
    inevitable-certain      times (t,), formulas (phi,)
    inevitability-persists  times (t1, t2), formulas (phi,)
    detachment              times (t,), formulas (phi, psi)
    miller                  times (t, t'), formulas (phi,), alpha
    """

    schema: str
    times: tuple[str, ...]
    formulas: tuple[Formula, ...]
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        arity = {
            "past-determined": (3, 1),
            "inevitable-certain": (1, 1),
            "inevitability-persists": (2, 1),
            "detachment": (1, 2),
            "miller": (2, 1),
        }
        if self.schema not in arity:
            raise ValueError(f"unknown schema {self.schema!r}; expected one of {', '.join(SCHEMAS)}")
        nt, nf = arity[self.schema]
        if len(self.times) != nt or len(self.formulas) != nf:
            raise ValueError(f"{self.schema} takes {nt} time(s) and {nf} formula(s)")
        if self.schema == "miller":
            if self.alpha is None or not 0 <= Fraction(self.alpha) <= 1:
                raise ValueError("miller needs alpha in [0, 1]")
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.schema == "past-determined":
            atom = self.formulas[0]
            if not isinstance(atom, (Holds, Occ)) or (atom.start, atom.end) != self.times[:2]:
                raise ValueError("past-determined binds a HOLDS/OCC atom over (t0, t1)")

    def formula(self) -> Formula | None:
        """The instantiated sentence; ``None`` for the detachment rule."""
        s = self.schema
        if s == "past-determined":
            _, t1, t2 = self.times
            atom = self.formulas[0]
            return Implies(
                TimeLe(t1, t2),
                Or(prob_cmp(t2, P(atom), "=", 0), prob_cmp(t2, P(atom), "=", 1)),
            )
        if s == "inevitable-certain":
            (t,), (phi,) = self.times, self.formulas
            return Implies(Inev(t, phi), prob_cmp(t, P(phi), "=", 1))
        if s == "inevitability-persists":
            (t1, t2), (phi,) = self.times, self.formulas
            return Implies(TimeLe(t1, t2), Implies(Inev(t1, phi), Inev(t2, phi)))
        if s == "miller":
            return miller_formula(self.times[0], self.times[1], self.formulas[0], self.alpha)
        return None


def miller_formula(t: str, t2: str, phi: Formula, alpha: Fraction) -> Formula:
    """``t <= t2 -> P[t](phi & P[t2](phi) >= a) >= a * P[t](P[t2](phi) >= a)``."""
    future = prob_cmp(t2, P(phi), ">=", alpha)
    return Implies(TimeLe(t, t2), prob_cmp(t, P(phi & future), ">=", alpha * P(future)))


def past_determined(t0: str, t1: str, t2: str, atom: Formula) -> SchemaInstance:
    return SchemaInstance("past-determined", (t0, t1, t2), (atom,))


@dataclass(frozen=True)
class SchemaResult:
    instance: SchemaInstance
    counterexample: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.counterexample is None


def check_schema(m: Model, inst: SchemaInstance, ev: Evaluator | None = None) -> SchemaResult:
    """Check ``inst`` at every world; a failure names the first bad world."""
    ev = ev or Evaluator(m)
    for t in inst.times:
        if t not in m.times:
            raise ModelError(f"unbound time symbol {t!r}")
    if inst.schema == "detachment":
        (t,), (phi, psi) = inst.times, inst.formulas
        if not entails_in_model(m, phi, psi, ev):
            return SchemaResult(inst, None, "premise does not hold in this model")
        value = m.times[t]
        for w in m.worlds:
            lo, hi = ev.probability(value, w, phi), ev.probability(value, w, psi)
            if hi < lo:
                return SchemaResult(inst, w, f"P({psi}) = {hi} < P({phi}) = {lo}")
        return SchemaResult(inst)
    bad = counterexample(m, inst.formula(), ev)
    return SchemaResult(inst, bad)


def expected_future_probability(
    m: Model, t: str | Fraction | int, t2: str | Fraction | int, w: str, f: Formula, ev: Evaluator | None = None
) -> Fraction:
    """Sum over the R-classes at ``t2`` inside R_t^w of mu_t^w(class) times the chance at t2.

    By C6 any member of a class serves as its representative.
    """
    now, later = m.time(t), m.time(t2)
    if now > later:
        raise ValueError(f"future time {later} precedes {now}")
    m.check_world(w)
    ev = ev or Evaluator(m)
    mu = m.measures[(now, w)]
    here = m.accessible(now, w)
    total = Fraction(0)
    for cls in m.partitions[later]:
        inside = cls & here
        if not inside:
            continue
        weight = mu.measure(inside)
        if weight:
            rep = min(inside, key=m.worlds.index)
            total += weight * ev.probability(later, rep, f)
    return total


def sample_instances(
    m: Model,
    formulas: list[Formula],
    schemas: tuple[str, ...] = SCHEMAS,
    alphas: tuple[Fraction, ...] = ALPHA_GRID,
) -> Iterator[SchemaInstance]:
    """Instances over every time pair of ``m`` and each supplied formula.

    Past-determination uses every HOLDS/OCC atom over the model's symbols
    instead of ``formulas``.
    """
    times = sorted(m.times, key=lambda s: (m.times[s], s))
    pairs = [(a, b) for a in times for b in times if m.times[a] <= m.times[b]]
    if "past-determined" in schemas:
        for a in times:
            for b in times:
                if m.times[a] > m.times[b]:
                    continue
                atoms = [Holds(a, b, s) for s in sorted(m.facts)] + [Occ(a, b, s) for s in sorted(m.events)]
                for atom in atoms:
                    for c in times:
                        yield past_determined(a, b, c, atom)
    for phi in formulas:
        if "inevitable-certain" in schemas:
            for t in times:
                yield SchemaInstance("inevitable-certain", (t,), (phi,))
        if "inevitability-persists" in schemas:
            for a, b in pairs:
                yield SchemaInstance("inevitability-persists", (a, b), (phi,))
        if "miller" in schemas:
            for a, b in pairs:
                for alpha in alphas:
                    yield SchemaInstance("miller", (a, b), (phi,), alpha)
    if "detachment" in schemas:
        for phi in formulas:
            for psi in formulas:
                for t in times:
                    yield SchemaInstance("detachment", (t,), (phi, psi))
            for t in times:
                yield SchemaInstance("detachment", (t,), (phi & phi, phi))
