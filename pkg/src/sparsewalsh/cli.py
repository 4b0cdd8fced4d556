"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import experiment, mnist, theory
from .svm import TrainConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_data_flags(p):
    g = p.add_argument_group("data")
    g.add_argument("--images", action="append", default=[],
                   help="IDX image file (repeat for train and test files)")
    g.add_argument("--labels", action="append", default=[],
                   help="IDX label file, one per --images")
    g.add_argument("--cache", help="preprocessed dataset written by `ingest`")
    g.add_argument("--mnist-dir",
                   help="directory holding the standard MNIST IDX files "
                        "(default: $MNIST_DIR or data/mnist)")
    g.add_argument("--include-t10k", action="store_true",
                   help="with --mnist-dir, also pool the t10k files")
    g.add_argument("--threshold", type=float, default=mnist.DEFAULT_THRESHOLD,
                   help="binarization threshold on 5x5 block means (default 0.5)")


def _add_model_flags(p, k_default=150):
    p.add_argument("--k", type=int, default=k_default, help="number of parity features")
    p.add_argument("--d", type=int, default=3, help="maximum parity degree (default 3)")
    p.add_argument("--tau", type=float, default=1000.0, help="l1 budget (default 1000)")
    p.add_argument("--max-epochs", type=int, default=2000)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsewalsh", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse IDX files into a +/-1 cache")
    _add_data_flags(p)
    p.add_argument("--out", default="mnist01.bin")

    p = sub.add_parser("train", help="fit one classifier on a class-balanced draw")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--train-per-class", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="classifier.txt")

    p = sub.add_parser("sweep", help="k-sweep with repeated random splits")
    _add_data_flags(p)
    p.add_argument("--k-values", type=_int_list, default=experiment.SweepConfig.k_values)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--train-per-class", type=int, default=1500)
    p.add_argument("--test-per-class", type=int, default=2500)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tau", type=float, default=1000.0)
    p.add_argument("--max-epochs", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--no-timing", action="store_true",
                   help="write 0 for wall_seconds so sweep.csv is byte-reproducible")
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("final", help="single large-split run")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--train-per-class", type=int, default=4000)
    p.add_argument("--test-per-class", type=int, default=1900)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("planted", help="learn synthetic planted sparse polynomials")
    p.add_argument("--n", type=int, default=25)
    p.add_argument("--k", type=int, default=10, help="planted terms")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--ell", type=int, default=4000, help="training points")
    p.add_argument("--test", type=int, default=4000, help="fresh test points")
    p.add_argument("--learn-k", type=int, default=None,
                   help="features selected by the learner (default: --k)")
    p.add_argument("--tau", type=float, default=1000.0)
    p.add_argument("--seeds", type=_int_list, default=(0,))

    p = sub.add_parser("theory", help="desk-scale theory checks")
    p.add_argument("--shatter-n", type=int, action="append", default=[])
    p.add_argument("--bound", nargs=3, metavar=("H", "ELL", "ETA"), type=float)
    p.add_argument("--class-size", nargs=3, metavar=("N", "K", "TRIALS"), type=int)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load_pool(args) -> mnist.DigitPool:
    if args.cache:
        if args.images or args.labels:
            raise UsageError("--cache cannot be combined with --images/--labels")
        return mnist.read_cache(args.cache)
    if args.images or args.labels:
        if len(args.images) != len(args.labels):
            raise UsageError("each --images needs a matching --labels")
        return mnist.load_pool(args.images, args.labels, args.threshold)
    images, labels = mnist.find_mnist_files(args.mnist_dir, args.include_t10k)
    return mnist.load_pool(images, labels, args.threshold)


def cmd_ingest(args) -> int:
    pool = _load_pool(args)
    mnist.write_cache(args.out, pool)
    zeros = int(np.count_nonzero(pool.sample.labels == -1))
    print(f"wrote {args.out}: {len(pool)} items ({zeros} zeros, {len(pool) - zeros} ones)")
    return EXIT_OK


def cmd_train(args) -> int:
    pool = _load_pool(args)
    rng = np.random.default_rng(experiment.derive_seed(args.seed, args.k, 0))
    tr, _ = experiment.split_per_class(pool.sample.labels, args.train_per_class, 0, rng)
    train_set = pool.sample.subset(tr)
    cfg = TrainConfig(tau=args.tau, max_epochs=args.max_epochs, seed=args.seed)
    fit = experiment.fit_and_score(train_set, train_set, args.k, args.d, cfg)
    Path(args.out).write_text(fit.classifier.to_text())
    print(f"train_error: {fit.train_error:.6f}")
    print(f"objective: {fit.result.objective:.6f} epochs: {fit.result.epochs_used}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    pool = _load_pool(args)
    cfg = experiment.SweepConfig(
        k_values=tuple(args.k_values), trials_per_k=args.trials,
        train_per_class=args.train_per_class, test_per_class=args.test_per_class,
        d=args.d, tau=args.tau, max_epochs=args.max_epochs, root_seed=args.seed,
    )
    result = experiment.run_sweep(pool.sample, cfg, jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    experiment.write_sweep_csv(out / "sweep.csv", result.records, timing=not args.no_timing)
    experiment.write_summary_csv(out / "summary.csv", result.summary)
    for r in result.summary:
        print(f"k={r.k:4d}  test={r.mean_test:.4f}±{r.std_test:.4f}  "
              f"train={r.mean_train:.4f}  gap={r.mean_gap:.4f}  bound={r.bound_term:.4f}")
    return EXIT_OK


def cmd_final(args) -> int:
    pool = _load_pool(args)
    cfg = experiment.FinalConfig(
        train_per_class=args.train_per_class, test_per_class=args.test_per_class,
        k=args.k, d=args.d, tau=args.tau, max_epochs=args.max_epochs, seed=args.seed,
    )
    report = experiment.run_final(pool.sample, cfg, pool.source_index)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    experiment.write_final_report(out / "final_report.txt", report, cfg)
    (out / "classifier.txt").write_text(report.classifier.to_text())
    print(f"test_error: {report.test_error:.6f} "
          f"({report.misclassified_indices.size}/{report.n_test} misclassified) "
          f"in {report.wall_seconds:.1f}s")
    return EXIT_OK


def cmd_planted(args) -> int:
    cfg = TrainConfig(tau=args.tau)
    for seed in args.seeds:
        o = experiment.run_planted(args.n, args.k, args.d, args.ell, args.test,
                                   args.learn_k, seed, cfg)
        print(f"seed={seed} test_error={o.test_error:.6f} train_error={o.train_error:.6f} "
              f"recovered={o.recovered}/{o.planted} seconds={o.wall_seconds:.2f}")
    return EXIT_OK


def cmd_theory(args) -> int:
    if not (args.shatter_n or args.bound or args.class_size):
        raise UsageError("theory: give at least one of --shatter-n, --bound, --class-size")
    ok = True
    for n in args.shatter_n:
        hit, total = theory.shattering_labelings(n)
        ok &= hit == total
        print(f"shattering: {'OK' if hit == total else 'FAIL'} {hit}/{total}")
    if args.bound:
        h, ell, eta = args.bound
        value = theory.vc_bound_term(theory.BoundParams(h, int(ell), eta))
        print(f"bound_term: {value:.6f}")
    if args.class_size:
        n, k, trials = args.class_size
        count = theory.sample_class_size(n, k, trials, args.seed)
        cap = theory.class_size_upper_bound(n, k)
        print(f"class_size: >= {count} (upper bound {cap})")
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {
    "ingest": cmd_ingest, "train": cmd_train, "sweep": cmd_sweep,
    "final": cmd_final, "planted": cmd_planted, "theory": cmd_theory,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except FloatingPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
