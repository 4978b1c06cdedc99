"""Prima facie and actual causation between interval events.

Positive influence is evaluated in product form,
``P(E & A) > P(E) * P(A)`` at the cause's start time, so no conditional
probability is ever divided out.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .formula import Occ
from .model import Model, ModelError
from .semantics import Evaluator, as_fraction


@dataclass(frozen=True)
class EventOccurrence:
    event: str
    start: str
    end: str

    def atom(self) -> Occ:
        return Occ(self.start, self.end, self.event)

    @classmethod
    def parse(cls, text: str) -> EventOccurrence:
        """Read ``"EVENT@t1,t2"``."""
        event, sep, rest = text.partition("@")
        times = [s.strip() for s in rest.split(",")]
        if not sep or not event.strip() or len(times) != 2 or not all(times):
            raise ValueError(f"expected EVENT@t1,t2, got {text!r}")
        return cls(event.strip(), times[0], times[1])

    def __str__(self) -> str:
        return f"{self.event}@{self.start},{self.end}"


@dataclass(frozen=True)
class CausalReport:
    cond1: bool  # temporal non-succession
    cond2: bool  # possibility of cause
    cond3: bool  # positive influence
    actual: bool
    p_cause: Fraction
    p_effect: Fraction
    p_joint: Fraction

    @property
    def prima_facie(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3

    # the instantaneous form of condition 1 goes by this name
    @property
    def temporal_precedence(self) -> bool:
        return self.cond1

    @property
    def temporal_non_succession(self) -> bool:
        return self.cond1

    def to_json(self) -> dict:
        out = asdict(self)
        out["prima_facie"] = self.prima_facie
        for k in ("p_cause", "p_effect", "p_joint"):
            out[k] = str(out[k])
        return out

    def render(self) -> str:
        mark = {True: "yes", False: "no"}
        return "\n".join(
            [
                f"temporal non-succession  {mark[self.cond1]}",
                f"possibility of cause     {mark[self.cond2]}  (P(cause) = {self.p_cause})",
                f"positive influence       {mark[self.cond3]}  (P(effect & cause) = {self.p_joint}"
                f" vs P(effect)*P(cause) = {self.p_effect * self.p_cause})",
                f"prima facie cause        {mark[self.prima_facie]}",
                f"actual cause             {mark[self.actual]}",
            ]
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _check(m: Model, occ: EventOccurrence, role: str) -> tuple[Fraction, Fraction]:
    if occ.event not in m.events:
        raise ModelError(f"{role}: unknown event symbol {occ.event!r}")
    for t in (occ.start, occ.end):
        if t not in m.times:
            raise ModelError(f"{role}: {t!r} is not a time symbol of the model")
    a, b = m.times[occ.start], m.times[occ.end]
    if a > b:
        raise ModelError(f"{role}: interval ({a}, {b}) starts after it ends")
    return a, b


def analyze_cause(
    m: Model, w: str, cause: EventOccurrence, effect: EventOccurrence, ev: Evaluator | None = None
) -> CausalReport:
    m.check_world(w)
    ta, _ = _check(m, cause, "cause")
    _, te2 = _check(m, effect, "effect")
    ev = ev or Evaluator(m)
    a, e = cause.atom(), effect.atom()
    p_a, p_e, p_ea = ev.exact_probabilities(ta, w, a, e, e & a)
    cond1 = ta < te2
    cond2 = p_a > 0
    cond3 = p_ea > p_e * p_a
    actual = cond1 and cond2 and cond3 and ev.truth(e, w)
    return CausalReport(cond1, cond2, cond3, actual, *map(as_fraction, (p_a, p_e, p_ea)))
