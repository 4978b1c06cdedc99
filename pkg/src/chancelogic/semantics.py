"""Truth and exact probability of formulas in a finite model.

``INEV[t](f)`` quantifies over R_t^w. A P-term at t sums mu_t^w over the
worlds of R_t^w that satisfy its argument, so a model that breaks C5 is
still measured inside R_t^w. Sugar is evaluated directly, not through
:func:`~chancelogic.formula.desugar`, so the two routes can be checked
against each other.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .formula import (
    COMPARATORS,
    And,
    CondProbCmp,
    Formula,
    Holds,
    Implies,
    Inev,
    Not,
    Occ,
    Or,
    Polynomial,
    Poss,
    ProbCmp,
    TimeEq,
    TimeLe,
    TimeLt,
)
from .model import Model, ModelError


class EvaluationError(ModelError):
    pass


class Evaluator:
    """Evaluates formulas against one model, memoising truth values and P-terms.

    Internally time points are indices into ``model.points`` and masses are
    gmpy2 ``mpq`` values; results leave as :class:`~fractions.Fraction`.
    """

    def __init__(self, model: Model):
        self.model = model
        self._index = {t: i for i, t in enumerate(model.points)}
        self._sym = {s: self._index[v] for s, v in model.times.items()}
        self._facts = {s: _indexed(ext, model.points) for s, ext in model.facts.items()}
        self._events = {s: _indexed(ext, model.points) for s, ext in model.events.items()}
        self._access: dict[tuple[int, str], tuple[str, ...]] = {}
        # (i, w) -> id of the chance table over R_t^w; worlds sharing a table share P-values
        self._chance: dict[tuple[int, str], int] = {}
        self._tables_by_id: list[tuple[tuple[str, mpq], ...]] = []
        self._table_ids: dict[tuple, int] = {}
        self._truth: dict[tuple[Formula, str], bool] = {}
        self._prob: dict[tuple[Formula, int], mpq] = {}
        self._coefs: dict[int, tuple] = {}

    def _tables(self, i: int, w: str) -> None:
        m = self.model
        t = m.points[i]
        acc = m._access.get((t, w), frozenset())
        self._access[(i, w)] = tuple(v for v in m.worlds if v in acc)
        mu = m.measures.get((t, w))
        items = () if mu is None else tuple((v, mpq(x)) for v, x in mu.items() if v in acc)
        tid = self._table_ids.get(items)
        if tid is None:
            tid = self._table_ids[items] = len(self._tables_by_id)
            self._tables_by_id.append(items)
        self._chance[(i, w)] = tid

    def _accessible(self, i: int, w: str) -> tuple[str, ...]:
        if (i, w) not in self._access:
            self._tables(i, w)
        return self._access[(i, w)]

    def _t(self, symbol: str) -> int:
        try:
            return self._sym[symbol]
        except KeyError:
            raise EvaluationError(f"unbound time symbol {symbol!r}") from None

    def _extent(self, symbol: str, kind: str):
        table = self._facts if kind == "fact" else self._events
        if symbol in table:
            return table[symbol]
        other = self._events if kind == "fact" else self._facts
        if symbol in other:
            raise EvaluationError(f"{symbol!r} is not a {kind} symbol")
        raise EvaluationError(f"unknown {kind} symbol {symbol!r}")

    def truth(self, f: Formula, world: str) -> bool:
        key = (f, world)
        hit = self._truth.get(key)
        if hit is None:
            rule = _RULES.get(type(f))
            if rule is None:
                raise TypeError(f"not a formula: {f!r}")
            hit = self._truth[key] = rule(self, f, world)
        return hit

    def _holds(self, f: Holds, w: str) -> bool:
        return (self._t(f.start), self._t(f.end), w) in self._extent(f.fact, "fact")

    def _occ(self, f: Occ, w: str) -> bool:
        return (self._t(f.start), self._t(f.end), w) in self._extent(f.event, "event")

    def _inev(self, f: Inev, w: str) -> bool:
        return all(self.truth(f.arg, v) for v in self._accessible(self._t(f.time), w))

    def _poss(self, f: Poss, w: str) -> bool:
        return any(self.truth(f.arg, v) for v in self._accessible(self._t(f.time), w))

    def _margin(self, f: ProbCmp | CondProbCmp, w: str):
        i = self._t(f.time)
        if isinstance(f, ProbCmp):
            return self._poly(f.lhs, i, w) - self._poly(f.rhs, i, w)
        # product form; never divides by P(given)
        return self._p(i, w, And(f.target, f.given)) - mpq(f.bound) * self._p(i, w, f.given)

    def _cmp(self, f: ProbCmp | CondProbCmp, w: str) -> bool:
        return COMPARATORS[f.op](self._margin(f, w), 0)

    def margin(self, f: ProbCmp | CondProbCmp, w: str) -> Fraction:
        """The compared quantity moved to one side: lhs - rhs, or P(a & b) - c*P(b)."""
        return as_fraction(self._margin(f, w))

    def _poly(self, p: Polynomial, i: int, w: str):
        total = _ZERO
        for coef, factors in self._terms(p):
            term = coef
            for x in factors:
                if not term:
                    break
                term *= self._p(i, w, x)
            total += term
        return total

    def _terms(self, p: Polynomial):
        hit = self._coefs.get(id(p))
        if hit is None or hit[0] is not p:
            hit = self._coefs[id(p)] = (p, tuple((mpq(m.coef), m.factors) for m in p.terms))
        return hit[1]

    def _p(self, i: int, w: str, f: Formula):
        tid = self._chance.get((i, w))
        if tid is None:
            self._tables(i, w)
            tid = self._chance[(i, w)]
        key = (f, tid)
        hit = self._prob.get(key)
        if hit is None:
            hit = _ZERO
            for v, mass in self._tables_by_id[tid]:
                if self.truth(f, v):
                    hit += mass
            self._prob[key] = hit
        return hit

    def probability(self, t: Fraction, w: str, f: Formula) -> Fraction:
        """mu_t^w of the worlds in R_t^w satisfying ``f``; ``t`` is a time point."""
        return as_fraction(self._p(self._index[t], w, f))

    def exact_probabilities(self, t: Fraction, w: str, *fs: Formula) -> list:
        """Like :meth:`probability` for several formulas, as gmpy2 ``mpq`` values."""
        i = self._index[t]
        return [self._p(i, w, f) for f in fs]

    def poly(self, p: Polynomial, t: Fraction, w: str) -> Fraction:
        return as_fraction(self._poly(p, self._index[t], w))


_ZERO = mpq(0)


def as_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


_RULES = {
    Holds: Evaluator._holds,
    Occ: Evaluator._occ,
    Not: lambda ev, f, w: not ev.truth(f.arg, w),
    And: lambda ev, f, w: ev.truth(f.left, w) and ev.truth(f.right, w),
    Or: lambda ev, f, w: ev.truth(f.left, w) or ev.truth(f.right, w),
    Implies: lambda ev, f, w: not ev.truth(f.left, w) or ev.truth(f.right, w),
    TimeEq: lambda ev, f, w: ev._t(f.left) == ev._t(f.right),
    TimeLe: lambda ev, f, w: ev._t(f.left) <= ev._t(f.right),
    TimeLt: lambda ev, f, w: ev._t(f.left) < ev._t(f.right),
    Inev: Evaluator._inev,
    Poss: Evaluator._poss,
    ProbCmp: Evaluator._cmp,
    CondProbCmp: Evaluator._cmp,
}


@lru_cache(maxsize=4096)
def _indexed(ext: frozenset, points: tuple[Fraction, ...]) -> frozenset[tuple[int, int, str]]:
    # models produced by local edits share most extent sets, so this pays off
    idx = {t: i for i, t in enumerate(points)}
    return frozenset((idx[a], idx[b], w) for a, b, w in ext if a in idx and b in idx)


def eval_formula(m: Model, world: str, f: Formula) -> bool:
    m.check_world(world)
    return Evaluator(m).truth(f, world)


def probability(m: Model, t: str | Fraction | int, world: str, f: Formula) -> Fraction:
    """Exact mu_t^w-mass of the worlds in R_t^w where ``f`` is true."""
    value = m.time(t)
    m.check_world(world)
    return Evaluator(m).probability(value, world, f)


def counterexample(m: Model, f: Formula, ev: Evaluator | None = None) -> str | None:
    """First world (in model order) where ``f`` is false, if any."""
    ev = ev or Evaluator(m)
    for w in m.worlds:
        if not ev.truth(f, w):
            return w
    return None


def valid_in_model(m: Model, f: Formula) -> bool:
    return counterexample(m, f) is None


def entails_in_model(m: Model, f: Formula, g: Formula, ev: Evaluator | None = None) -> bool:
    """``g`` holds at every world of ``m`` where ``f`` holds."""
    ev = ev or Evaluator(m)
    return all(ev.truth(g, w) for w in m.worlds if ev.truth(f, w))
