"""Flower-state locking: the trivial-extension value, then C_I after one qubit is lost.

Usage: python scripts/locking_demo.py [--d 2] [--restarts 16]
"""

import argparse

import numpy as np

from condent.conditioning import c_I
from condent.exact_measures import log_negativity, ppt_check
from condent.optimize import OptimizerOptions
from condent.propositions import flower_trivial_value
from condent.states import make_named_state, partial_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--restarts", type=int, default=16)
    args = ap.parse_args()
    d = args.d
    print(f"flower({d}) trivial value  {flower_trivial_value(d):.6f}  (1 + log2(d)/2 = {1 + 0.5 * np.log2(d):.6f})")
    rho = partial_trace(make_named_state("flower", {"d": d}).projector(), ("A1", "B1", "B2"))
    print(f"after losing A2: PPT {ppt_check(rho, 'A1')}, log-negativity {log_negativity(rho, 'A1'):.2e}")
    res = c_I(rho, (("A1",), ("B1", "B2")), OptimizerOptions(restarts=args.restarts))
    print(f"C_I upper bound after loss  {res.value:.6f}  converged={res.converged}  "
          f"certificate={res.certificate['kind']}")


if __name__ == "__main__":
    main()
