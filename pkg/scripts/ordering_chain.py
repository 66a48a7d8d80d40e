"""Certified E_sq^q <= C_I <= E_sq^c on random two-qubit states.

Usage: python scripts/ordering_chain.py [--states 3] [--seed 0] [--restarts 8]
"""

import argparse

from condent.optimize import OptimizerOptions
from condent.propositions import ordering_chain
from condent.states import random_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=8)
    args = ap.parse_args()
    opts = OptimizerOptions(restarts=args.restarts)
    print(f"{'state':>6} {'E_sq^q':>10} {'C_I':>10} {'E_sq^c':>10} {'converged':>10}")
    for i in range(args.states):
        s = random_state((2, 2), None, args.seed + i, ("A", "B"))
        out = ordering_chain(s, opts)
        print(f"{i:>6} {out['e_sq_q']:10.6f} {out['c_I']:10.6f} {out['e_sq_c']:10.6f} {str(out['converged']):>10}")


if __name__ == "__main__":
    main()
