"""Certified and proxy node counts for the I_q family, with main-plan values.

    python scripts/iq_sweep.py --q 0.5,0.1,0.02,1/1024
"""

import argparse
import sys
from pathlib import Path

from rigquad.cli import main as rig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", default="0.5,0.1,0.02,0.01,0.005")
    ap.add_argument("--e-tol", default="2^-100")
    ap.add_argument("--no-values", action="store_true")
    ap.add_argument("--out", default="results/iq.csv")
    args = ap.parse_args()
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    extra = ["--no-values"] if args.no_values else []
    code = rig(["experiment", "iq", "--q", args.q, "--e-tol", args.e_tol, *extra,
                "--out", args.out])
    if not code:
        print(Path(args.out).read_text(), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
