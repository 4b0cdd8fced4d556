#!/usr/bin/env python3
"""Test error versus sparsity k on MNIST 0-vs-1.

Writes sweep.csv and summary.csv to --out-dir. Reads MNIST from $MNIST_DIR.
"""
import argparse
import os
from pathlib import Path

from sparsewalsh import experiment, mnist


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="results/sweep")
    p.add_argument("--k-values", default="10,50,100,150,180")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = p.parse_args()

    pool = mnist.load_pool(*mnist.find_mnist_files())
    cfg = experiment.SweepConfig(
        k_values=tuple(int(k) for k in args.k_values.split(",")),
        trials_per_k=args.trials, root_seed=args.seed,
    )
    result = experiment.run_sweep(pool.sample, cfg, jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    experiment.write_sweep_csv(out / "sweep.csv", result.records)
    experiment.write_summary_csv(out / "summary.csv", result.summary)
    for r in result.summary:
        print(f"k={r.k:4d} test={r.mean_test:.4f} gap={r.mean_gap:.4f} bound={r.bound_term:.3f}")


if __name__ == "__main__":
    main()
