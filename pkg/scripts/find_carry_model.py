"""Search for a model of the carry premises and print it in the model file format.

    python scripts/find_carry_model.py --seed 3 --out carry-found.json
"""

import argparse
import json
import time

from chancelogic.constraints import check_constraints
from chancelogic.model import dump_model
from chancelogic.modelgen import GenParams, bounded_sat
from chancelogic.syntax import parse_formula

PREMISES = (
    "P[now](~POSS[t1](OCC(t1,t2,carry-b1) & OCC(t1,t2,carry-b2)) | HOLDS(t1,t2,plane-full)) = 4/5"
    " & P[now](HOLDS(t1,t2,plane-full)) = 1/2 & now < t1 & t1 < t2"
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timeout", type=float, default=30.0)
    ap.add_argument("--max-worlds", type=int, default=6)
    ap.add_argument("--out")
    args = ap.parse_args()

    f = parse_formula(PREMISES)
    began = time.monotonic()
    res = bounded_sat(f, GenParams(max_worlds=args.max_worlds, seed=args.seed), timeout=args.timeout)
    if res is None:
        raise SystemExit(f"no model within {args.timeout:g}s")
    assert not check_constraints(res.model)
    text = json.dumps(dump_model(res.model), indent=1)
    print(f"found after {res.trials} trials, {time.monotonic() - began:.2f}s; premises hold at {res.world}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    main()
