"""k-sweep, final large-split run, and planted-model validation."""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ParityMask, SampleSet, SparseClassifier, empirical_risk, sign
from .features import SelectedFeatures, select_features
from .svm import TrainConfig, TrainResult, train
from .theory import BoundParams, vc_bound_term
from .wht import low_degree_bits

BOUND_ETA = 0.05


@dataclass(frozen=True)
class SweepConfig:
    k_values: tuple[int, ...] = tuple(range(10, 281, 10))
    trials_per_k: int = 10
    train_per_class: int = 1500
    test_per_class: int = 2500
    d: int = 3
    tau: float = 1000.0
    max_epochs: int = 2000
    root_seed: int = 0

    def __post_init__(self):
        if not self.k_values or min(self.k_values) < 1:
            raise ValueError("k_values must be a nonempty list of positive integers")
        if self.trials_per_k < 1:
            raise ValueError("trials_per_k must be at least 1")
        if self.train_per_class < 1 or self.test_per_class < 1:
            raise ValueError("train and test sets must be nonempty")

    def train_config(self, seed: int) -> TrainConfig:
        return TrainConfig(tau=self.tau, max_epochs=self.max_epochs, seed=seed)


@dataclass(frozen=True)
class FinalConfig:
    train_per_class: int = 4000
    test_per_class: int = 1900
    k: int = 150
    d: int = 3
    tau: float = 1000.0
    max_epochs: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.train_per_class < 1:
            raise ValueError("training set must be nonempty")
        if self.test_per_class < 1:
            raise ValueError("test set must be nonempty")


@dataclass(frozen=True)
class SweepRecord:
    k: int
    trial: int
    train_error: float
    test_error: float
    wall_seconds: float

    @property
    def gap(self) -> float:
        return self.test_error - self.train_error


@dataclass(frozen=True)
class SummaryRow:
    k: int
    mean_test: float
    std_test: float
    mean_train: float
    mean_gap: float
    bound_term: float


@dataclass
class SweepResult:
    records: list[SweepRecord]
    summary: list[SummaryRow]

    def row(self, k: int) -> SummaryRow:
        return next(r for r in self.summary if r.k == k)


@dataclass
class Fit:
    classifier: SparseClassifier
    features: SelectedFeatures
    result: TrainResult
    train_error: float
    test_error: float
    test_predictions: np.ndarray = field(repr=False)


def derive_seed(root_seed: int, *keys: int) -> int:
    """Independent 64-bit seed for a (root, keys...) tuple."""
    ss = np.random.SeedSequence(root_seed, spawn_key=tuple(keys))
    return int(ss.generate_state(1, np.uint64)[0])


def split_per_class(labels: np.ndarray, train_per_class: int, test_per_class: int,
                    rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint train/test index sets, drawn per class without replacement."""
    train_idx, test_idx = [], []
    for label in (-1, 1):
        members = np.flatnonzero(labels == label)
        need = train_per_class + test_per_class
        if members.size < need:
            raise ValueError(
                f"class {label:+d} has {members.size} items, need {need}"
            )
        perm = rng.permutation(members)
        train_idx.append(perm[:train_per_class])
        test_idx.append(perm[train_per_class:need])
    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.sort(np.concatenate(test_idx))
    if np.intersect1d(train_idx, test_idx).size:
        raise AssertionError("train and test indices overlap")
    return train_idx, test_idx


def fit_and_score(train_set: SampleSet, test_set: SampleSet, k: int, d: int,
                  config: TrainConfig) -> Fit:
    features = select_features(train_set, d, k)
    result = train(features, train_set.labels, config)
    clf = SparseClassifier.from_arrays(features.masks, result.weights, train_set.n)
    train_pred = sign(features.design_columns @ result.weights)
    test_pred = sign(features.design_for(test_set.points) @ result.weights)
    return Fit(
        classifier=clf,
        features=features,
        result=result,
        train_error=empirical_risk(train_pred, train_set.labels),
        test_error=empirical_risk(test_pred, test_set.labels),
        test_predictions=test_pred,
    )


def run_trial(pool: SampleSet, k: int, cfg: SweepConfig, trial: int = 0) -> SweepRecord:
    seed = derive_seed(cfg.root_seed, k, trial)
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    tr, te = split_per_class(pool.labels, cfg.train_per_class, cfg.test_per_class, rng)
    fit = fit_and_score(pool.subset(tr), pool.subset(te), k, cfg.d, cfg.train_config(seed))
    return SweepRecord(k, trial, fit.train_error, fit.test_error,
                       time.perf_counter() - start)


def _trial_job(args):
    pool, k, cfg, trial = args
    return run_trial(pool, k, cfg, trial)


def summarize(records: Sequence[SweepRecord], n: int, train_size: int) -> list[SummaryRow]:
    rows = []
    for k in sorted({r.k for r in records}):
        rs = [r for r in records if r.k == k]
        test = np.array([r.test_error for r in rs])
        train_err = np.array([r.train_error for r in rs])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bound = vc_bound_term(BoundParams(h=2 * n * k, ell=train_size, eta=BOUND_ETA))
        rows.append(SummaryRow(
            k=k,
            mean_test=float(test.mean()),
            std_test=float(test.std(ddof=1)) if len(rs) > 1 else 0.0,
            mean_train=float(train_err.mean()),
            mean_gap=float((test - train_err).mean()),
            bound_term=bound,
        ))
    return rows


def run_sweep(pool: SampleSet, cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    tasks = [(pool, k, cfg, t) for k in cfg.k_values for t in range(cfg.trials_per_k)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_trial_job, tasks))
    else:
        records = [_trial_job(t) for t in tasks]
    records.sort(key=lambda r: (r.k, r.trial))
    return SweepResult(records, summarize(records, pool.n, 2 * cfg.train_per_class))


@dataclass
class FinalReport:
    test_error: float
    train_error: float
    misclassified_indices: np.ndarray
    wall_seconds: float
    n_train: int
    n_test: int
    classifier: SparseClassifier


def run_final(pool: SampleSet, cfg: FinalConfig = FinalConfig(),
              source_index: np.ndarray | None = None) -> FinalReport:
    """Train once on a large split; test items are the disjoint remainder draw.

    ``misclassified_indices`` refer to ``source_index`` when given, else to
    positions in ``pool``.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(derive_seed(cfg.seed, cfg.k, 0))
    tr, te = split_per_class(pool.labels, cfg.train_per_class, cfg.test_per_class, rng)
    tcfg = TrainConfig(tau=cfg.tau, max_epochs=cfg.max_epochs, seed=cfg.seed)
    fit = fit_and_score(pool.subset(tr), pool.subset(te), cfg.k, cfg.d, tcfg)
    wrong = te[fit.test_predictions != pool.labels[te]]
    if source_index is not None:
        wrong = np.asarray(source_index)[wrong]
    return FinalReport(
        test_error=fit.test_error,
        train_error=fit.train_error,
        misclassified_indices=np.sort(wrong),
        wall_seconds=time.perf_counter() - start,
        n_train=tr.size,
        n_test=te.size,
        classifier=fit.classifier,
    )


def generate_planted(n: int, k: int, d: int, ell: int, seed: int):
    """Uniform points labeled by a random k-term, degree <= d sparse polynomial.

    Coefficients are uniform in +/-[0.5, 1.5]. A coefficient draw that yields
    an exactly-zero sum on any sampled point is discarded and redrawn.
    Returns (SampleSet, ground-truth SparseClassifier).
    """
    available = low_degree_bits(n, d)
    if k > available.size:
        raise ValueError(f"only {available.size} masks of degree <= {d} exist for n={n}")
    rng = np.random.default_rng(seed)
    bits = rng.choice(available, size=k, replace=False)
    masks = [ParityMask(int(b), n) for b in bits]
    points = rng.choice(np.array([-1, 1], dtype=np.int8), size=(ell, n))
    while True:
        coeffs = rng.uniform(0.5, 1.5, size=k) * rng.choice([-1.0, 1.0], size=k)
        truth = SparseClassifier.from_arrays(masks, coeffs, n)
        sums = truth.decision_function(points)
        if not np.any(sums == 0.0):
            break
    return SampleSet(points, sign(sums)), truth


@dataclass
class PlantedOutcome:
    seed: int
    test_error: float
    train_error: float
    recovered: int
    planted: int
    wall_seconds: float


def run_planted(n: int = 25, k: int = 10, d: int = 3, ell_train: int = 4000,
                ell_test: int = 4000, learn_k: int | None = None, seed: int = 0,
                config: TrainConfig = TrainConfig()) -> PlantedOutcome:
    """Learn a planted model from ``ell_train`` points, score on fresh points.

    ``recovered`` counts planted masks that appear among the selected features.
    """
    start = time.perf_counter()
    data, truth = generate_planted(n, k, d, ell_train + ell_test, seed)
    train_set = data.subset(slice(0, ell_train))
    test_set = data.subset(slice(ell_train, None))
    fit = fit_and_score(train_set, test_set, learn_k or k, d, config)
    planted = {m.bits for m, _ in truth.terms}
    recovered = len(planted & {m.bits for m in fit.features.masks})
    return PlantedOutcome(seed, fit.test_error, fit.train_error, recovered, k,
                          time.perf_counter() - start)


def write_sweep_csv(path: str | Path, records: Sequence[SweepRecord],
                    timing: bool = True) -> None:
    lines = ["k,trial,train_error,test_error,wall_seconds"]
    for r in records:
        secs = r.wall_seconds if timing else 0.0
        lines.append(f"{r.k},{r.trial},{r.train_error:.6f},{r.test_error:.6f},{secs:.6f}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary_csv(path: str | Path, rows: Sequence[SummaryRow]) -> None:
    lines = ["k,mean_test,std_test,mean_train,mean_gap,bound_term"]
    for r in rows:
        lines.append(
            f"{r.k},{r.mean_test:.6f},{r.std_test:.6f},{r.mean_train:.6f},"
            f"{r.mean_gap:.6f},{r.bound_term:.6f}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    rows = Path(path).read_text().strip().splitlines()[1:]
    out = []
    for line in rows:
        k, trial, tr, te, secs = line.split(",")
        out.append(SweepRecord(int(k), int(trial), float(tr), float(te), float(secs)))
    return out


def write_final_report(path: str | Path, report: FinalReport, cfg: FinalConfig) -> None:
    idx = " ".join(str(int(i)) for i in report.misclassified_indices)
    lines = [
        f"k: {cfg.k}",
        f"d: {cfg.d}",
        f"tau: {cfg.tau:.6f}",
        f"seed: {cfg.seed}",
        f"n_train: {report.n_train}",
        f"n_test: {report.n_test}",
        f"train_error: {report.train_error:.6f}",
        f"test_error: {report.test_error:.6f}",
        f"misclassified_count: {report.misclassified_indices.size}",
        f"misclassified_indices: {idx}",
        f"wall_seconds: {report.wall_seconds:.6f}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")
