"""Hypothesis strategies for formulas and generated models."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from chancelogic import formula as F
from chancelogic.modelgen import GenParams, generate_model, sample_formula

IDENT = st.from_regex(r"[a-z][a-z0-9_]{0,3}(-[a-z0-9]{1,3})?'?", fullmatch=True).filter(
    lambda s: s.upper() not in {"HOLDS", "OCC", "INEV", "POSS", "P"}
)
TIME = st.sampled_from(["t0", "t1", "t2", "now", "ts", "tsp", "t1'"])
RATIONAL = st.fractions(min_value=-3, max_value=3, max_denominator=12)
OPS = st.sampled_from(list(F.COMPARATORS))


def atoms():
    return st.one_of(
        st.builds(F.Holds, TIME, TIME, IDENT),
        st.builds(F.Occ, TIME, TIME, IDENT),
        st.builds(F.TimeEq, TIME, TIME),
        st.builds(F.TimeLe, TIME, TIME),
        st.builds(F.TimeLt, TIME, TIME),
    )


def _safe_probcmp(inner):
    @st.composite
    def build(draw):
        lhs, rhs = draw(_polys(inner)), draw(_polys(inner))
        if lhs.is_constant() and rhs.is_constant():
            lhs = lhs + F.P(draw(inner))
        return F.ProbCmp(draw(TIME), lhs, draw(OPS), rhs)

    return build()


def _polys(inner):
    mono = st.builds(F.Monomial, RATIONAL, st.lists(inner, min_size=0, max_size=2).map(tuple))
    return st.lists(mono, min_size=1, max_size=3).map(lambda ms: F.Polynomial(tuple(ms)))


def formulas(max_leaves=12):
    """Arbitrary well-formed formulas, sugar included."""
    return st.recursive(
        atoms(),
        lambda inner: st.one_of(
            st.builds(F.Not, inner),
            st.builds(F.And, inner, inner),
            st.builds(F.Or, inner, inner),
            st.builds(F.Implies, inner, inner),
            st.builds(F.Inev, TIME, inner),
            st.builds(F.Poss, TIME, inner),
            _safe_probcmp(inner),
            st.builds(F.CondProbCmp, TIME, inner, inner, OPS, st.fractions(0, 1, max_denominator=10)),
        ),
        max_leaves=max_leaves,
    )


def model_params(max_worlds=4):
    return st.builds(
        GenParams,
        max_worlds=st.integers(1, max_worlds),
        max_times=st.integers(1, 4),
        max_facts=st.integers(1, 2),
        max_events=st.integers(1, 2),
        seed=st.integers(0, 2**32),
    )


@st.composite
def model_and_formulas(draw, max_worlds=4, n=3, depth=2):
    p = draw(model_params(max_worlds))
    m = generate_model(p)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return m, [sample_formula(p, m, rng.randint(0, depth), rng) for _ in range(n)]


ALPHAS = st.sampled_from([Fraction(i, 9) for i in range(10)])
