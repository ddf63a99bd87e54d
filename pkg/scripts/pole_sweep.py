"""N1, N2 for z0 = iq as q shrinks, for v = 1/2 and v = 1.

    python scripts/pole_sweep.py --kmax 10
"""

import argparse
import csv
import sys
from pathlib import Path

from rigquad.cli import main as rig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmin", type=int, default=4, help="smallest k in q = 2^-k")
    ap.add_argument("--kmax", type=int, default=10)
    ap.add_argument("--e-tol", default="2^-100")
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    qs = ",".join(f"1/{2 ** k}" for k in range(args.kmin, args.kmax + 1))
    Path(args.outdir).mkdir(parents=True, exist_ok=True)
    for v, tag in (("1/2", "half"), ("1", "one")):
        out = f"{args.outdir}/pole_{tag}.csv"
        code = rig(["experiment", "pole", "--v", v, "--q", qs, "--e-tol", args.e_tol,
                    "--out", out])
        if code:
            return code
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        print(f"v = {v}  ({out})")
        prev = None
        for r in rows:
            n1, n2 = int(r["N1"]), int(r["N2"])
            growth = "" if prev is None else f"  N1 x{n1 / prev[0]:.3f}  N2 x{n2 / prev[1]:.3f}"
            print(f"  q = {r['q']:>8}  N1 = {n1:6d}  N2 = {n2:8d}{growth}")
            prev = (n1, n2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
