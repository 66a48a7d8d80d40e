"""Log-negativity, EoF and the C_I upper bound along the Werner family.

Usage: python scripts/werner_sweep.py [--points 6] [--restarts 4] [--out werner.csv]
"""

import argparse
import csv

import numpy as np

from condent.conditioning import c_I
from condent.entropy import mutual_information
from condent.exact_measures import entanglement_of_formation, log_negativity
from condent.optimize import OptimizerOptions
from condent.states import make_named_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=6)
    ap.add_argument("--restarts", type=int, default=4)
    ap.add_argument("--out", default="werner.csv")
    args = ap.parse_args()
    opts = OptimizerOptions(restarts=args.restarts, iterations=1000)
    rows = []
    for p in np.linspace(0.0, 1.0, args.points):
        s = make_named_state("werner", {"p": float(p)})
        row = {
            "p": round(float(p), 12),
            "half_I": 0.5 * mutual_information(s, "A", "B"),
            "log_neg": log_negativity(s, "A"),
            "eof": entanglement_of_formation(s, "A", opts).value,
            "c_I": c_I(s, "A:B", opts).value,
        }
        rows.append(row)
        print("  ".join(f"{k}={round(v, 9) + 0.0:.6f}" for k, v in row.items()))
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
