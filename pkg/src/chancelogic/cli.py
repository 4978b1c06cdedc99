"""Command-line front end: ``chancelogic <command> ...``.

Exit codes: 0 success, 1 a violated expectation or constraint, 2 a
usage, parse or model error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .causality import EventOccurrence, analyze_cause
from .constraints import check_coherence, check_constraints
from .examples import NAMES, fixture_text, load_fixture
from .model import BuildError, ModelError, build_model, dump_model
from .modelgen import GenParams, bounded_sat, generate_model, sample_formula
from .principles import ALPHA_GRID, SCHEMAS, SchemaInstance, check_schema, expected_future_probability, sample_instances
from .semantics import Evaluator
from .syntax import ParseError, format_rational, parse_formula, parse_model, parse_rational


class UsageError(Exception):
    pass


def _load(ref: str, strict_c3: bool = False, check: bool = True):
    path = Path(ref)
    if path.is_file():
        text = path.read_text()
    elif ref in NAMES:
        text = fixture_text(ref)
    else:
        raise UsageError(f"no model file or built-in example named {ref!r}")
    return build_model(parse_model(text), check=check, strict_c3=strict_c3)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else text)


def _number(x: Fraction) -> dict:
    return {"exact": format_rational(x), "decimal": float(x)}


def cmd_check(args) -> int:
    m = _load(args.model, check=False)
    report = check_constraints(m, strict_c3=args.strict_c3)
    payload = {"constraints": report.to_json()}
    lines = [report.render()]
    bad = bool(report)
    if args.coherence:
        coh = check_coherence(m)
        payload["coherence"] = coh.to_json()
        lines.append(coh.render())
        bad = bad or bool(coh)
    _emit(args, payload, "\n".join(lines))
    return 1 if bad else 0


def cmd_eval(args) -> int:
    m = _load(args.model)
    f = parse_formula(args.formula)
    value = Evaluator(m).truth(f, m.check_world(args.world))
    _emit(args, {"formula": str(f), "world": args.world, "value": value}, str(value).lower())
    return 0


def cmd_prob(args) -> int:
    m = _load(args.model)
    f = parse_formula(args.formula)
    m.check_world(args.world)
    value = Evaluator(m).probability(m.time(args.time), args.world, f)
    _emit(args, {"formula": str(f), "time": args.time, "world": args.world, **_number(value)},
          f"{format_rational(value)} = {float(value):g}")
    return 0


def cmd_expect(args) -> int:
    m = _load(args.model)
    f = parse_formula(args.formula)
    try:
        value = expected_future_probability(m, args.time, args.future, args.world, f)
    except ValueError as e:
        if isinstance(e, ModelError):
            raise
        raise UsageError(str(e)) from None
    now = Evaluator(m).probability(m.time(args.time), args.world, f)
    payload = {"formula": str(f), "time": args.time, "future": args.future, "world": args.world,
               **_number(value), "probability_now": format_rational(now), "identity": value == now}
    _emit(args, payload, f"{format_rational(value)} = {float(value):g} (P now: {format_rational(now)})")
    return 0


def _instances(args, m, rng: random.Random, p: GenParams):
    if args.formula:
        phis = [parse_formula(args.formula)]
    else:
        phis = [sample_formula(p, m, d, rng) for d in (0, 1, 2)]
    if args.schema == "detachment":
        for t in sorted(m.times) if not args.times else args.times[:1]:
            for a in phis:
                for b in phis:
                    yield SchemaInstance("detachment", (t,), (a, a | b))
                    yield SchemaInstance("detachment", (t,), (a & b, a))
        return
    alphas = (parse_rational(args.alpha),) if args.alpha else ALPHA_GRID
    if args.times:
        if args.schema == "past-determined":
            raise UsageError("past-determined takes its atoms from the model; drop --times")
        for phi in phis:
            yield SchemaInstance(args.schema, tuple(args.times), (phi,), alphas[0] if args.schema == "miller" else None)
        return
    yield from sample_instances(m, phis, (args.schema,), alphas)


def cmd_schema(args) -> int:
    if args.schema not in SCHEMAS:
        raise UsageError(f"unknown schema {args.schema!r}; expected one of {', '.join(SCHEMAS)}")
    if bool(args.model) == bool(args.random):
        raise UsageError("give exactly one of --model or --random")
    rng = random.Random(args.seed)
    runs = []
    if args.model:
        runs.append((args.model, _load(args.model), GenParams(seed=args.seed)))
    else:
        for i in range(args.trials):
            p = GenParams(max_worlds=args.max_worlds, max_times=args.max_times, seed=args.seed + i)
            runs.append((f"seed {p.seed}", generate_model(p), p))
    checked, failures = 0, []
    for label, m, p in runs:
        ev = Evaluator(m)
        for inst in _instances(args, m, rng, p):
            checked += 1
            res = check_schema(m, inst, ev)
            if not res:
                failures.append({"model": label, "times": list(inst.times),
                                 "formulas": [str(f) for f in inst.formulas],
                                 "alpha": None if inst.alpha is None else format_rational(inst.alpha),
                                 "world": res.counterexample, "detail": res.detail})
    payload = {"schema": args.schema, "models": len(runs), "instances": checked, "counterexamples": failures}
    lines = [f"{args.schema}: {checked} instances over {len(runs)} model(s), {len(failures)} counterexample(s)"]
    lines += [f"  {f['model']}: world {f['world']} times {f['times']} {f['formulas']}" for f in failures[:20]]
    _emit(args, payload, "\n".join(lines))
    return 1 if failures else 0


def cmd_cause(args) -> int:
    m = _load(args.model)
    try:
        cause, effect = EventOccurrence.parse(args.cause), EventOccurrence.parse(args.effect)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = analyze_cause(m, args.world, cause, effect)
    _emit(args, rep.to_json(), rep.render())
    return 0


def cmd_sat(args) -> int:
    f = parse_formula(args.formula)
    p = GenParams(args.max_worlds, args.max_times, args.max_facts, args.max_events, args.seed, args.granularity)
    res = bounded_sat(f, p, budget=args.budget, timeout=args.timeout)
    if res is None:
        _emit(args, {"formula": str(f), "result": "unknown"}, "unknown: no model found within the budget")
        return 1
    model = dump_model(res.model)
    if args.out:
        Path(args.out).write_text(json.dumps(model, indent=1) + "\n")
    payload = {"formula": str(f), "result": "sat", "world": res.world, "trials": res.trials, "model": model}
    text = f"sat at world {res.world} after {res.trials} trial(s)"
    text += f"; model written to {args.out}" if args.out else "\n" + json.dumps(model, indent=1)
    _emit(args, payload, text)
    return 0


def cmd_example(args) -> int:
    fx = load_fixture(args.name)
    premises, conclusions = fx.run()
    ok = all(r.ok for r in premises + conclusions)
    payload = {"name": fx.name, "narrative": fx.narrative, "notes": list(fx.notes),
               "premises": [r.to_json() for r in premises],
               "conclusions": [r.to_json() for r in conclusions], "ok": ok}
    lines = [fx.name, fx.narrative, "", "premises:"]
    lines += [f"  {r.render()}\n      {r.statement}" for r in premises]
    lines += ["conclusions:"]
    lines += [f"  {r.render()}\n      {r.statement}" for r in conclusions]
    lines += [f"note: {n}" for n in fx.notes]
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def _gen_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--max-worlds", type=int, default=6)
    sp.add_argument("--max-times", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chancelogic", description=__doc__.splitlines()[0])
    top.add_argument("--json", action="store_true", help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="audit a model against C1-C6")
    sp.add_argument("model")
    sp.add_argument("--strict-c3", action="store_true", help="C3 without its side conditions")
    sp.add_argument("--coherence", action="store_true", help="also audit chance coherence")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("eval", help="truth of a formula at a world")
    sp.add_argument("model")
    sp.add_argument("--world", required=True)
    sp.add_argument("--formula", required=True)
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("prob", help="exact P_t(formula) at a world")
    sp.add_argument("model")
    sp.add_argument("--time", required=True)
    sp.add_argument("--world", required=True)
    sp.add_argument("--formula", required=True)
    sp.set_defaults(run=cmd_prob)

    sp = sub.add_parser("expect", help="expected chance at a future time")
    sp.add_argument("model")
    sp.add_argument("--time", required=True)
    sp.add_argument("--future", required=True)
    sp.add_argument("--world", required=True)
    sp.add_argument("--formula", required=True)
    sp.set_defaults(run=cmd_expect)

    sp = sub.add_parser("schema", help="check a schema on a model or on random models")
    sp.add_argument("schema", help=", ".join(SCHEMAS))
    sp.add_argument("--model")
    sp.add_argument("--random", action="store_true")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--formula")
    sp.add_argument("--times", nargs="+")
    sp.add_argument("--alpha")
    _gen_flags(sp)
    sp.set_defaults(run=cmd_schema)

    sp = sub.add_parser("cause", help="Suppes conditions for two event occurrences")
    sp.add_argument("model")
    sp.add_argument("--world", required=True)
    sp.add_argument("--cause", required=True, help="EVENT@t1,t2")
    sp.add_argument("--effect", required=True, help="EVENT@t1,t2")
    sp.set_defaults(run=cmd_cause)

    sp = sub.add_parser("sat", help="random search for a model of a formula")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--budget", type=int, default=20000)
    sp.add_argument("--timeout", type=float, default=10.0)
    sp.add_argument("--max-facts", type=int, default=2)
    sp.add_argument("--max-events", type=int, default=2)
    sp.add_argument("--granularity", type=int, default=10)
    sp.add_argument("--out", help="write the model file here")
    _gen_flags(sp)
    sp.set_defaults(run=cmd_sat)

    sp = sub.add_parser("example", help="run a built-in worked example")
    sp.add_argument("name", choices=NAMES)
    sp.set_defaults(run=cmd_example)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args)
    except BuildError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.report is not None:
            print(e.report.render(), file=sys.stderr)
        return 2
    except (ParseError, ModelError, UsageError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
