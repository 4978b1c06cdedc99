"""Temporal probability logic over future-branching world-histories: parse, model, audit, evaluate."""

from .causality import CausalReport, EventOccurrence, analyze_cause
from .constraints import ViolationReport, check_coherence, check_constraints
from .examples import Fixture, load_fixture
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
    P,
    Polynomial,
    Poss,
    ProbCmp,
    TimeEq,
    TimeLe,
    TimeLt,
    const,
    desugar,
    prob_cmp,
    time_symbols,
)
from .model import BuildError, Distribution, Model, ModelError, accessible, build_model, derive_canonical_r
from .modelgen import GenParams, bounded_sat, generate_model, sample_formula
from .principles import SchemaInstance, check_schema, expected_future_probability
from .semantics import Evaluator, entails_in_model, eval_formula, probability, valid_in_model
from .syntax import ModelDescription, ParseError, parse_formula, parse_model, print_formula

__all__ = [name for name in dir() if not name.startswith("_")]
