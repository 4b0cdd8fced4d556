#!/usr/bin/env python3
"""Single MNIST 0-vs-1 run at k=150, d=3 with 4000/1900 items per class."""
import argparse
from pathlib import Path

from sparsewalsh import experiment, mnist


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="results/final")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    pool = mnist.load_pool(*mnist.find_mnist_files())
    cfg = experiment.FinalConfig(seed=args.seed)
    report = experiment.run_final(pool.sample, cfg, pool.source_index)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    experiment.write_final_report(out / "final_report.txt", report, cfg)
    print(f"test error {report.test_error:.4%} "
          f"({report.misclassified_indices.size}/{report.n_test}), {report.wall_seconds:.1f}s")


if __name__ == "__main__":
    main()
