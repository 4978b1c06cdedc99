"""Check every schema family and the expected-value identity on a range of generated models.

    python scripts/sweep_principles.py --seeds 200 --max-worlds 6
"""

import argparse
import random
import time

from chancelogic.modelgen import GenParams, generate_model, sample_formula
from chancelogic.principles import SCHEMAS, SchemaInstance, check_schema, expected_future_probability, sample_instances
from chancelogic.semantics import Evaluator


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--max-worlds", type=int, default=6)
    ap.add_argument("--max-times", type=int, default=4)
    ap.add_argument("--depth", type=int, default=2)
    args = ap.parse_args()

    counts = dict.fromkeys(SCHEMAS + ("expected-value",), 0)
    failures = []
    began = time.monotonic()
    for seed in range(args.start, args.start + args.seeds):
        p = GenParams(max_worlds=args.max_worlds, max_times=args.max_times, seed=seed)
        m = generate_model(p)
        rng = random.Random(seed)
        fs = [sample_formula(p, m, d, rng) for d in range(args.depth + 1)]
        ev = Evaluator(m)
        insts = list(sample_instances(m, fs, tuple(s for s in SCHEMAS if s != "detachment")))
        insts += [SchemaInstance("detachment", (t,), (a & b, a)) for t in m.times for a in fs for b in fs]
        for inst in insts:
            counts[inst.schema] += 1
            if not check_schema(m, inst, ev):
                failures.append((seed, inst))
        for a in m.times:
            for b in m.times:
                if m.times[a] > m.times[b]:
                    continue
                for w in m.worlds:
                    for f in fs:
                        counts["expected-value"] += 1
                        if expected_future_probability(m, a, b, w, f, ev) != ev.probability(m.times[a], w, f):
                            failures.append((seed, ("expected-value", a, b, w, f)))

    for name, n in counts.items():
        print(f"{name:24s} {n:9d} instances")
    print(f"{len(failures)} failure(s) in {time.monotonic() - began:.1f}s")
    for seed, what in failures[:10]:
        print(f"  seed {seed}: {what}")


if __name__ == "__main__":
    main()
