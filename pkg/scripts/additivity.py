"""C_I on tensor products of random two-qubit states, with certificate exchange.

Usage: python scripts/additivity.py [--pairs 2] [--seed 0] [--restarts 8]
"""

import argparse

from condent.conditioning import C_I
from condent.optimize import OptimizerOptions
from condent.propositions import additivity_pair
from condent.states import random_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=8)
    args = ap.parse_args()
    opts = OptimizerOptions(restarts=args.restarts)
    for i in range(args.pairs):
        r = random_state((2, 2), None, args.seed + 2 * i, ("A", "B"))
        s = random_state((2, 2), None, args.seed + 2 * i + 1, ("C", "D"))
        out = additivity_pair(r, s, (("A",), ("B",)), (("C",), ("D",)), C_I, opts)
        print(f"pair {i}: C_I(r) {out['v1']:.6f}  C_I(s) {out['v2']:.6f}  "
              f"C_I(r x s) {out['product']:.6f}  gap {out['gap']:+.2e}")


if __name__ == "__main__":
    main()
