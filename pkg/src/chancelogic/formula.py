"""Syntax trees for formulas of the temporal probability language.

Time, fact and event symbols are plain strings. Formulas are frozen
dataclasses, so they hash and compare structurally and can be used as
memo keys by the evaluator.

The core variants are the time comparisons, ``Holds``, ``Occ``, the
boolean connectives, ``Inev`` and ``ProbCmp``. ``Implies``, ``Poss`` and
``CondProbCmp`` are sugar that :func:`desugar` rewrites away.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterator, Union

Rational = Union[int, Fraction]

COMPARATORS: dict[str, Callable[[Fraction, Fraction], bool]] = {
    ">=": operator.ge,
    "<=": operator.le,
    "=": operator.eq,
    ">": operator.gt,
    "<": operator.lt,
}


def _node(cls):
    """Frozen dataclass whose structural hash is computed once per instance."""
    cls = dataclass(frozen=True)(cls)
    plain = cls.__hash__

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = plain(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


class Formula:
    __slots__ = ()

    def __and__(self, other: Formula) -> And:
        return And(self, other)

    def __or__(self, other: Formula) -> Or:
        return Or(self, other)

    def __invert__(self) -> Not:
        return Not(self)

    def __rshift__(self, other: Formula) -> Implies:
        return Implies(self, other)

    def __str__(self) -> str:
        from .syntax import print_formula

        return print_formula(self)


@_node
class TimeEq(Formula):
    left: str
    right: str


@_node
class TimeLe(Formula):
    left: str
    right: str


@_node
class TimeLt(Formula):
    left: str
    right: str


@_node
class Holds(Formula):
    start: str
    end: str
    fact: str


@_node
class Occ(Formula):
    start: str
    end: str
    event: str


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Inev(Formula):
    time: str
    arg: Formula


@_node
class Monomial:
    """``coef * P(factors[0]) * ... * P(factors[-1])``; no factors means a constant."""

    coef: Fraction
    factors: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        if type(self.coef) is not Fraction:
            object.__setattr__(self, "coef", Fraction(self.coef))
        if type(self.factors) is not tuple:
            object.__setattr__(self, "factors", tuple(self.factors))


@_node
class Polynomial:
    """A sum of monomials over P-terms that all share one time index.

    The time index itself lives on the enclosing :class:`ProbCmp`. No
    simplification is ever done, so structure survives printing.
    """

    terms: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a polynomial needs at least one term")

    def __add__(self, other: Polynomial | Rational) -> Polynomial:
        other = _as_poly(other)
        return Polynomial(self.terms + other.terms)

    def __radd__(self, other: Rational) -> Polynomial:
        return _as_poly(other) + self

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(Monomial(-m.coef, m.factors) for m in self.terms))

    def __sub__(self, other: Polynomial | Rational) -> Polynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: Rational) -> Polynomial:
        return _as_poly(other) - self

    def __mul__(self, other: Polynomial | Rational) -> Polynomial:
        other = _as_poly(other)
        return Polynomial(
            tuple(
                Monomial(a.coef * b.coef, a.factors + b.factors)
                for a in self.terms
                for b in other.terms
            )
        )

    def __rmul__(self, other: Rational) -> Polynomial:
        return _as_poly(other) * self

    def factors(self) -> Iterator[Formula]:
        for m in self.terms:
            yield from m.factors

    def is_constant(self) -> bool:
        return all(not m.factors for m in self.terms)


def _as_poly(x: Polynomial | Rational) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return const(x)


@lru_cache(maxsize=65536)
def P(f: Formula) -> Polynomial:
    """The polynomial consisting of the single P-term ``P(f)``."""
    return Polynomial((Monomial(Fraction(1), (f,)),))


@lru_cache(maxsize=4096)
def const(c: Rational | str) -> Polynomial:
    return Polynomial((Monomial(Fraction(c)),))


@_node
class ProbCmp(Formula):
    """``lhs op rhs`` where every P-term in either side is taken at ``time``."""

    time: str
    lhs: Polynomial
    op: str
    rhs: Polynomial

    def __post_init__(self) -> None:
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")
        if self.lhs.is_constant() and self.rhs.is_constant():
            raise ValueError("a probability comparison needs at least one P-term")

    def normalized(self) -> Polynomial:
        """``lhs - rhs``, the form compared against zero."""
        return self.lhs - self.rhs


# sugar


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Poss(Formula):
    time: str
    arg: Formula


@_node
class CondProbCmp(Formula):
    """``P[time](target | given) op bound``."""

    time: str
    target: Formula
    given: Formula
    op: str
    bound: Fraction

    def __post_init__(self) -> None:
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")
        object.__setattr__(self, "bound", Fraction(self.bound))


SUGAR = (Implies, Poss, CondProbCmp)


def prob_cmp(time: str, lhs: Polynomial | Rational, op: str, rhs: Polynomial | Rational) -> ProbCmp:
    return ProbCmp(time, _as_poly(lhs), op, _as_poly(rhs))


def children(f: Formula) -> tuple[Formula, ...]:
    """Immediate subformulas, including P-term arguments."""
    if isinstance(f, (Not, Inev, Poss)):
        return (f.arg,)
    if isinstance(f, (And, Or, Implies)):
        return (f.left, f.right)
    if isinstance(f, ProbCmp):
        return tuple(f.lhs.factors()) + tuple(f.rhs.factors())
    if isinstance(f, CondProbCmp):
        return (f.target, f.given)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from subformulas(c)


def desugar(f: Formula) -> Formula:
    """Rewrite every sugar node into core syntax.

    ``Poss`` becomes ``~INEV(~.)``, ``Implies`` becomes ``~a | b`` and a
    conditional comparison ``P(a | b) op c`` becomes
    ``P(a & b) - c*P(b) op 0``. Core formulas come back structurally equal.
    """
    if isinstance(f, (TimeEq, TimeLe, TimeLt, Holds, Occ)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, Inev):
        return Inev(f.time, desugar(f.arg))
    if isinstance(f, ProbCmp):
        return ProbCmp(f.time, _desugar_poly(f.lhs), f.op, _desugar_poly(f.rhs))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Poss):
        return Not(Inev(f.time, Not(desugar(f.arg))))
    if isinstance(f, CondProbCmp):
        target, given = desugar(f.target), desugar(f.given)
        lhs = Polynomial(
            (Monomial(Fraction(1), (And(target, given),)), Monomial(-f.bound, (given,)))
        )
        return ProbCmp(f.time, lhs, f.op, const(0))
    raise TypeError(f"not a formula: {f!r}")


def _desugar_poly(p: Polynomial) -> Polynomial:
    return Polynomial(
        tuple(Monomial(m.coef, tuple(desugar(x) for x in m.factors)) for m in p.terms)
    )


def is_core(f: Formula) -> bool:
    return not any(isinstance(g, SUGAR) for g in subformulas(f))


def time_symbols(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, (TimeEq, TimeLe, TimeLt)):
            out.update((g.left, g.right))
        elif isinstance(g, (Holds, Occ)):
            out.update((g.start, g.end))
        elif isinstance(g, (Inev, Poss, ProbCmp, CondProbCmp)):
            out.add(g.time)
    return out


def fact_symbols(f: Formula) -> set[str]:
    return {g.fact for g in subformulas(f) if isinstance(g, Holds)}


def event_symbols(f: Formula) -> set[str]:
    return {g.event for g in subformulas(f) if isinstance(g, Occ)}


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out
