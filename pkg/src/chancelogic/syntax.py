"""Concrete text syntax: formula parser and printer, model-file reader.

Formula grammar, loosest to tightest binding::

    formula := disj ["->" formula]
    disj    := conj {"|" conj}
    conj    := unary {"&" unary}
    unary   := "~" unary | atom
    atom    := "HOLDS(" time "," time "," ident ")"
             | "OCC(" time "," time "," ident ")"
             | time ("=" | "<=" | "<") time
             | "INEV[" time "](" formula ")" | "POSS[" time "](" formula ")"
             | probcmp | "(" formula ")"
    probcmp := poly cmp poly
    poly    := ["-"] term {("+" | "-") term}
    term    := [rational "*"] pterm {"*" pterm} | rational
    pterm   := "P[" time "](" formula ["|" formula] ")"

Inside a P-term a top-level ``|`` is the conditional bar, so a disjunction
there must be parenthesised.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

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
)

KEYWORDS = {"HOLDS", "OCC", "INEV", "POSS", "P"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, expected: list[str] | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = list(expected or [])
        super().__init__(str(self))

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)

    def __str__(self) -> str:
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text


class Token(NamedTuple):
    kind: str  # IDENT, NUM, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<NUM>\d*\.\d+|\d+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*'*)
  | (?P<OP>->|<=|>=|[()\[\],~&|=<>+\-*/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, expected: list[str] | None = None, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", [repr(text)])
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str) -> str:
        tok = self.tok
        if tok.kind != "IDENT" or tok.text in KEYWORDS:
            found = tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", [what])
        self.i += 1
        return tok.text

    # formulas

    def formula(self, bar: bool = False) -> Formula:
        left = self.disj(bar)
        if self.accept("->"):
            return Implies(left, self.formula(bar))
        return left

    def disj(self, bar: bool) -> Formula:
        left = self.conj()
        while not bar and self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if tok.kind == "IDENT" and tok.text in ("HOLDS", "OCC"):
            self.i += 1
            self.expect("(")
            t1 = self.ident("time symbol")
            self.expect(",")
            t2 = self.ident("time symbol")
            self.expect(",")
            sym = self.ident("fact symbol" if tok.text == "HOLDS" else "event symbol")
            self.expect(")")
            return Holds(t1, t2, sym) if tok.text == "HOLDS" else Occ(t1, t2, sym)
        if tok.kind == "IDENT" and tok.text in ("INEV", "POSS"):
            self.i += 1
            self.expect("[")
            t = self.ident("time symbol")
            self.expect("]")
            self.expect("(")
            body = self.formula()
            self.expect(")")
            return Inev(t, body) if tok.text == "INEV" else Poss(t, body)
        if tok.kind == "IDENT" and tok.text == "P" or tok.kind == "NUM" or self.at("-"):
            return self.probcmp()
        if tok.kind == "IDENT":
            left = self.ident("time symbol")
            for op, node in (("=", TimeEq), ("<=", TimeLe), ("<", TimeLt)):
                if self.accept(op):
                    return node(left, self.ident("time symbol"))
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ["'='", "'<='", "'<'"])
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        found = tok.text or "end of input"
        raise self.error(
            f"unexpected {found!r}",
            ["'HOLDS'", "'OCC'", "'INEV'", "'POSS'", "'P'", "'~'", "'('", "time symbol", "number"],
        )

    # probability comparisons

    def probcmp(self) -> Formula:
        start = self.tok
        pterms: list[tuple[Token, str, Formula | None]] = []
        lhs = self.poly(pterms)
        if not (self.tok.kind == "OP" and self.tok.text in (">=", "<=", "=", ">", "<")):
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ["comparator"])
        op = self.tok.text
        self.i += 1
        rhs = self.poly(pterms)
        if not pterms:
            raise ParseError("a probability comparison needs at least one P-term", start.line, start.col)
        time = pterms[0][1]
        for tok, t, _ in pterms:
            if t != time:
                raise ParseError(
                    f"P-terms of one comparison must share a time index ({time!r} vs {t!r})",
                    tok.line,
                    tok.col,
                )
        given = [p for p in pterms if p[2] is not None]
        if not given:
            return ProbCmp(time, lhs, op, rhs)
        tok = given[0][0]
        only = lhs.terms[0] if len(lhs.terms) == 1 else None
        if (
            len(pterms) != 1
            or only is None
            or only.coef != 1
            or len(only.factors) != 1
            or not rhs.is_constant()
            or len(rhs.terms) != 1
        ):
            raise ParseError(
                "a conditional P-term must stand alone on the left of a constant bound",
                tok.line,
                tok.col,
            )
        return CondProbCmp(time, only.factors[0], given[0][2], op, rhs.terms[0].coef)

    def poly(self, pterms: list) -> Polynomial:
        sign = -1 if self.accept("-") else 1
        terms = [self.term(sign, pterms)]
        while self.at("+") or self.at("-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            terms.append(self.term(sign, pterms))
        return Polynomial(tuple(terms))

    def term(self, sign: int, pterms: list) -> Monomial:
        coef = Fraction(1)
        if self.tok.kind == "NUM":
            coef = self.rational()
            if not self.accept("*"):
                return Monomial(sign * coef)
        factors = [self.pterm(pterms)]
        while self.accept("*"):
            factors.append(self.pterm(pterms))
        return Monomial(sign * coef, tuple(factors))

    def rational(self) -> Fraction:
        tok = self.tok
        self.i += 1
        value = Fraction(tok.text)
        if self.at("/"):
            if "." in tok.text:
                raise self.error("decimal numerator in a fraction", tok=tok)
            self.i += 1
            den = self.tok
            if den.kind != "NUM" or "." in den.text:
                raise self.error(f"unexpected {den.text or 'end of input'!r}", ["integer denominator"])
            if int(den.text) == 0:
                raise self.error("zero denominator", tok=den)
            self.i += 1
            value /= int(den.text)
        return value

    def pterm(self, pterms: list) -> Formula:
        tok = self.tok
        if not (tok.kind == "IDENT" and tok.text == "P"):
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", ["'P'"])
        self.i += 1
        self.expect("[")
        t = self.ident("time symbol")
        self.expect("]")
        self.expect("(")
        target = self.formula(bar=True)
        given = None
        if self.accept("|"):
            given = self.formula(bar=True)
            if self.at("|"):
                raise self.error("more than one top-level '|' in a P-term; parenthesise disjunctions")
        self.expect(")")
        pterms.append((tok, t, given))
        return target


def parse_formula(text: str) -> Formula:
    """Parse one formula; raises :class:`ParseError` with a 1-based position."""
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.tok.text!r}", ["end of input"])
    return f


# printing


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def print_formula(f: Formula) -> str:
    """Render ``f`` so that :func:`parse_formula` gives back an equal tree.

    Binary connectives are always parenthesised; sugar is printed as sugar.
    """
    if isinstance(f, TimeEq):
        return f"{f.left} = {f.right}"
    if isinstance(f, TimeLe):
        return f"{f.left} <= {f.right}"
    if isinstance(f, TimeLt):
        return f"{f.left} < {f.right}"
    if isinstance(f, Holds):
        return f"HOLDS({f.start},{f.end},{f.fact})"
    if isinstance(f, Occ):
        return f"OCC({f.start},{f.end},{f.event})"
    if isinstance(f, Not):
        return "~" + print_formula(f.arg)
    if isinstance(f, And):
        return f"({print_formula(f.left)} & {print_formula(f.right)})"
    if isinstance(f, Or):
        return f"({print_formula(f.left)} | {print_formula(f.right)})"
    if isinstance(f, Implies):
        return f"({print_formula(f.left)} -> {print_formula(f.right)})"
    if isinstance(f, Inev):
        return f"INEV[{f.time}]({_inner(f.arg)})"
    if isinstance(f, Poss):
        return f"POSS[{f.time}]({_inner(f.arg)})"
    if isinstance(f, ProbCmp):
        return f"{_print_poly(f.time, f.lhs)} {f.op} {_print_poly(f.time, f.rhs)}"
    if isinstance(f, CondProbCmp):
        return (
            f"P[{f.time}]({_inner(f.target, bar=True)} | {_inner(f.given, bar=True)})"
            f" {f.op} {format_rational(f.bound)}"
        )
    raise TypeError(f"not a formula: {f!r}")


def _inner(f: Formula, bar: bool = False) -> str:
    # drop the outer parentheses of a binary node already sitting inside "(...)"
    text = print_formula(f)
    if isinstance(f, (And, Implies)) or (isinstance(f, Or) and not bar):
        return text[1:-1]
    return text


def _print_poly(time: str, poly: Polynomial) -> str:
    out = []
    for i, m in enumerate(poly.terms):
        neg = m.coef < 0
        mag = -m.coef if neg else m.coef
        if m.factors:
            body = "*".join(f"P[{time}]({_inner(x, bar=True)})" for x in m.factors)
            if mag != 1:
                body = f"{format_rational(mag)}*{body}"
        else:
            body = format_rational(mag)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# model files


@dataclass
class ModelDescription:
    """A model file as read, before references are resolved.

    Time references (extent endpoints, ``R`` and ``prob`` keys) are kept as
    written: a time-symbol name or a rational. Resolution happens in
    :func:`chancelogic.model.build_model`.
    """

    times: dict[str, Fraction]
    worlds: list[str]
    facts: dict[str, list[tuple[str, Any, Any]]] = field(default_factory=dict)
    events: dict[str, list[tuple[str, Any, Any]]] = field(default_factory=dict)
    r_mode: str = "explicit"
    classes: dict[Any, list[list[str]]] = field(default_factory=dict)
    prob: dict[Any, list[tuple[list[str], dict[str, Fraction]]]] = field(default_factory=dict)


def parse_rational(value: Any) -> Fraction:
    """Exact rational from a JSON number or a ``"p/q"`` / decimal string."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValueError(f"not a rational: {value!r}")


def _locate(text: str, key: str) -> tuple[int, int]:
    idx = text.find(f'"{key}"')
    if idx < 0:
        return (1, 1)
    line = text.count("\n", 0, idx) + 1
    return (line, idx - (text.rfind("\n", 0, idx) + 1) + 1)


def parse_model(text: str) -> ModelDescription:
    """Read the JSON model format; see README for the schema."""
    try:
        raw = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    def fail(message: str, key: str | None = None) -> ParseError:
        return ParseError(message, *(_locate(text, key) if key else (1, 1)))

    if not isinstance(raw, dict):
        raise fail("model file must be a JSON object")
    for key in ("times", "worlds", "R", "prob"):
        if key not in raw:
            raise fail(f"missing required key {key!r}")

    def time_ref(value: Any, key: str) -> Any:
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                return value
        try:
            return parse_rational(value)
        except ValueError:
            raise fail(f"bad time reference {value!r}", key) from None

    times_raw = raw["times"]
    if not isinstance(times_raw, dict) or not times_raw:
        raise fail("'times' must be a non-empty object of symbol -> rational", "times")
    times: dict[str, Fraction] = {}
    for name, value in times_raw.items():
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*'*", name) or name in KEYWORDS:
            raise fail(f"bad time symbol {name!r}", "times")
        try:
            times[name] = parse_rational(value)
        except ValueError as exc:
            raise fail(str(exc), name) from None

    worlds = raw["worlds"]
    if not isinstance(worlds, list) or not worlds or not all(isinstance(w, str) and w for w in worlds):
        raise fail("'worlds' must be a non-empty list of names", "worlds")
    seen: set[str] = set()
    for w in worlds:
        if w in seen:
            raise fail(f"duplicate world {w!r}", "worlds")
        seen.add(w)

    extents: dict[str, dict[str, list]] = {}
    for kind in ("facts", "events"):
        table = raw.get(kind, {})
        if not isinstance(table, dict):
            raise fail(f"{kind!r} must be an object of symbol -> list", kind)
        out: dict[str, list] = {}
        for sym, items in table.items():
            if not isinstance(items, list):
                raise fail(f"extent of {sym!r} must be a list", sym)
            rows = []
            for item in items:
                if not (isinstance(item, list) and len(item) == 3 and isinstance(item[0], str)):
                    raise fail(f"extent entries of {sym!r} must be [world, t1, t2]", sym)
                rows.append((item[0], time_ref(item[1], sym), time_ref(item[2], sym)))
            out[sym] = rows
        extents[kind] = out

    r = raw["R"]
    if not isinstance(r, dict) or r.get("mode") not in ("explicit", "derived"):
        raise fail("'R' must be {\"mode\": \"explicit\" | \"derived\", ...}", "R")
    classes: dict[Any, list[list[str]]] = {}
    if r["mode"] == "explicit":
        table = r.get("classes")
        if not isinstance(table, dict):
            raise fail("explicit R needs a 'classes' object of time -> partition", "classes")
        for t, partition in table.items():
            if not (isinstance(partition, list) and all(isinstance(c, list) for c in partition)):
                raise fail(f"partition at {t!r} must be a list of lists of worlds", "classes")
            classes[time_ref(t, "classes")] = [list(c) for c in partition]

    prob_raw = raw["prob"]
    if not isinstance(prob_raw, dict):
        raise fail("'prob' must be an object of time -> list of {class, dist}", "prob")
    prob: dict[Any, list] = {}
    for t, entries in prob_raw.items():
        if not isinstance(entries, list):
            raise fail(f"prob entry at {t!r} must be a list", "prob")
        rows = []
        for entry in entries:
            if not (isinstance(entry, dict) and isinstance(entry.get("class"), list) and isinstance(entry.get("dist"), dict)):
                raise fail(f"prob entries at {t!r} need 'class' and 'dist'", "prob")
            dist = {}
            for w, mass in entry["dist"].items():
                try:
                    dist[w] = parse_rational(mass)
                except ValueError:
                    raise fail(f"mass {mass!r} of {w!r} is not p/q or a decimal", "dist") from None
            rows.append((list(entry["class"]), dist))
        prob[time_ref(t, "prob")] = rows

    return ModelDescription(
        times=times,
        worlds=list(worlds),
        facts=extents["facts"],
        events=extents["events"],
        r_mode=r["mode"],
        classes=classes,
        prob=prob,
    )
