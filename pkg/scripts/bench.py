"""Random bench: main, reference and heuristic on seeded random curves.

    python scripts/bench.py --count 30 --seed 1
"""

import argparse
import csv
import sys
from pathlib import Path

from rigquad.cli import main as rig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--e-tol", default="2^-60")
    ap.add_argument("--timing", choices=["model", "wall"], default="model")
    ap.add_argument("--out", default="results/bench.csv")
    args = ap.parse_args()
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    code = rig(["experiment", "bench", "--count", str(args.count), "--seed", str(args.seed),
                "--e-tol", args.e_tol, "--timing", args.timing, "--out", args.out])
    if code:
        return code
    with open(args.out) as fh:
        rows = list(csv.DictReader(fh))
    agree = sum(r["values_agree"] == "true" for r in rows)
    ratio = sorted(float(r["t_ref"]) / float(r["t_main"]) for r in rows)
    print(f"{agree}/{len(rows)} instances agree; t_ref/t_main median {ratio[len(ratio) // 2]:.2f}"
          f" (min {ratio[0]:.2f}, max {ratio[-1]:.2f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
