"""N1 and N2 over the z0 = x + iy grid for g = (z - z0)^(-1/2), plus a summary.

    python scripts/heatmap.py --grid 8 --out results/heatmap.csv
"""

import argparse
import csv
import sys
from pathlib import Path

from rigquad.cli import main as rig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=8)
    ap.add_argument("--e-tol", default="2^-100")
    ap.add_argument("--bound", choices=["lemma", "proxy"], default="lemma")
    ap.add_argument("--out", default="results/heatmap.csv")
    args = ap.parse_args()
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    code = rig(["experiment", "heatmap", "--grid", str(args.grid), "--e-tol", args.e_tol,
                "--bound", args.bound, "--out", args.out])
    if code:
        return code
    with open(args.out) as fh:
        rows = [(float(r["x"]), float(r["y"]), int(r["N1"]), int(r["N2"]))
                for r in csv.DictReader(fh)]
    x, y, n1, n2 = max(rows, key=lambda r: r[3] / r[2])
    print(f"{len(rows)} points written to {args.out}")
    print(f"max N2/N1 = {n2 / n1:.2f} at ({x:g}, {y:g}); N1 = {n1}, N2 = {n2}")
    print(f"min N2/N1 = {min(r[3] / r[2] for r in rows):.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
