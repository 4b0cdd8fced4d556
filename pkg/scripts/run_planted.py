#!/usr/bin/env python3
"""Learn planted k-sparse parity models on n=25 bits; no data needed."""
import argparse

import numpy as np

from sparsewalsh.experiment import run_planted


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--learn-k", type=int, default=None)
    p.add_argument("--ell", type=int, default=4000)
    args = p.parse_args()

    errors = []
    for s in range(args.seeds):
        o = run_planted(25, args.k, 3, args.ell, 4000, learn_k=args.learn_k, seed=s)
        errors.append(o.test_error)
        print(f"seed={s} test={o.test_error:.4f} recovered={o.recovered}/{o.planted} "
              f"({o.wall_seconds:.2f}s)")
    print(f"median test error {np.median(errors):.4f}")


if __name__ == "__main__":
    main()
