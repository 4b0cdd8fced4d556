"""Domain types and risk computations for sparse-spectrum Boolean classifiers.

Points live in {+1, -1}^n and are stored as int8 arrays. A parity mask is an
n-bit integer whose bit j selects coordinate j; the matching point encoding
(``points_to_bits``) sets bit j whenever coordinate j equals -1, so that
``parity(mask, x) = (-1) ** popcount(mask & bits(x))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 64


@dataclass(frozen=True, order=True)
class ParityMask:
    """Subset S of {0, ..., n-1} packed into an integer (bit j <=> j in S)."""

    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension n={self.n} outside [0, {MAX_DIM}]")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"mask {self.bits:#x} does not fit in n={self.n} bits")

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "ParityMask":
        bits = 0
        for j in indices:
            if not 0 <= j < n:
                raise ValueError(f"index {j} outside [0, {n})")
            bits |= 1 << j
        return cls(bits, n)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.bits >> j & 1)

    def __repr__(self):
        return f"ParityMask({set(self.indices()) or '{}'}, n={self.n})"


def as_point(x, n: int | None = None) -> np.ndarray:
    """Validate ``x`` as a +/-1 vector and return it as an int8 array."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError("a point must be one-dimensional")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("point coordinates must be exactly +1 or -1")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"point has dimension {arr.shape[0]}, expected {n}")
    return arr.astype(np.int8)


def points_to_bits(points: np.ndarray) -> np.ndarray:
    """Pack each +/-1 row into a uint64 with bit j set iff coordinate j is -1."""
    points = np.atleast_2d(points)
    n = points.shape[1]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    neg = (points < 0).astype(np.uint64)
    return (neg * weights).sum(axis=1, dtype=np.uint64)


def bits_to_points(bits: np.ndarray, n: int) -> np.ndarray:
    """Inverse of ``points_to_bits``."""
    bits = np.asarray(bits, dtype=np.uint64).reshape(-1, 1)
    shifts = np.arange(n, dtype=np.uint64)
    neg = (bits >> shifts) & np.uint64(1)
    return (1 - 2 * neg.astype(np.int8)).astype(np.int8)


@dataclass(frozen=True)
class SampleSet:
    """Labeled sample: ``points`` is (l, n) int8 in {+1,-1}, ``labels`` is (l,) int8."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points))
        labels = np.asarray(self.labels).reshape(-1)
        if points.shape[0] == 0:
            raise ValueError("a sample needs at least one point")
        if points.shape[0] != labels.shape[0]:
            raise ValueError(
                f"{points.shape[0]} points but {labels.shape[0]} labels"
            )
        if not np.all((points == 1) | (points == -1)):
            raise ValueError("point coordinates must be exactly +1 or -1")
        if not np.all((labels == 1) | (labels == -1)):
            raise ValueError("labels must be exactly +1 or -1")
        if points.shape[1] > MAX_DIM:
            raise ValueError(f"dimension {points.shape[1]} exceeds {MAX_DIM}")
        points = points.astype(np.int8)
        labels = labels.astype(np.int8)
        points.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def subset(self, idx) -> "SampleSet":
        return SampleSet(self.points[idx], self.labels[idx])


@dataclass(frozen=True)
class SparseClassifier:
    """sign(sum_i a_i * prod_{j in S_i} x_j) with k distinct masks S_i."""

    terms: tuple[tuple[ParityMask, float], ...]
    n: int
    _bits: np.ndarray = field(init=False, repr=False, compare=False)
    _coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple((mask, float(c)) for mask, c in self.terms)
        if not terms:
            raise ValueError("a classifier needs at least one term")
        masks = [m for m, _ in terms]
        if any(m.n != self.n for m in masks):
            raise ValueError("mask dimension disagrees with classifier dimension")
        if len(set(m.bits for m in masks)) != len(masks):
            raise ValueError("masks must be pairwise distinct")
        if not all(math.isfinite(c) for _, c in terms):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(
            self, "_bits", np.array([m.bits for m in masks], dtype=np.uint64)
        )
        object.__setattr__(
            self, "_coeffs", np.array([c for _, c in terms], dtype=np.float64)
        )

    @classmethod
    def from_arrays(cls, masks: Sequence[ParityMask], coeffs, n: int):
        return cls(tuple(zip(masks, np.asarray(coeffs, dtype=float).tolist())), n)

    @property
    def k(self) -> int:
        return len(self.terms)

    def scaled(self, c: float) -> "SparseClassifier":
        return SparseClassifier(tuple((m, c * a) for m, a in self.terms), self.n)

    def decision_function(self, points: np.ndarray) -> np.ndarray:
        """Real-valued polynomial sum for each row of ``points``."""
        points = np.atleast_2d(points)
        if points.shape[1] != self.n:
            raise ValueError(
                f"points have dimension {points.shape[1]}, classifier expects {self.n}"
            )
        pbits = points_to_bits(points)
        odd = np.bitwise_count(pbits[:, None] & self._bits[None, :]) & 1
        chars = 1.0 - 2.0 * odd
        return chars @ self._coeffs

    def predict(self, points: np.ndarray) -> np.ndarray:
        return sign(self.decision_function(points))

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines += [f"{m.bits:x} {c!r}" for m, c in self.terms]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseClassifier":
        rows = [ln.split() for ln in text.strip().splitlines()]
        if not rows or len(rows[0]) != 2:
            raise ValueError("missing 'n k' header line")
        n, k = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != k:
            raise ValueError(f"header declares {k} terms, found {len(body)}")
        terms = []
        for row in body:
            if len(row) != 2:
                raise ValueError(f"malformed term line: {' '.join(row)!r}")
            terms.append((ParityMask(int(row[0], 16), n), float(row[1])))
        return cls(tuple(terms), n)


def sign(values) -> np.ndarray:
    """Elementwise sign with sign(0) = +1, returned as int8."""
    values = np.asarray(values)
    return np.where(values >= 0, 1, -1).astype(np.int8)


def evaluate(classifier: SparseClassifier, x) -> int:
    x = as_point(x)
    if x.shape[0] != classifier.n:
        raise ValueError(
            f"point has dimension {x.shape[0]}, classifier expects {classifier.n}"
        )
    return int(classifier.predict(x[None, :])[0])


def empirical_risk(predicted, actual) -> float:
    """Fraction of positions where ``predicted`` and ``actual`` disagree."""
    predicted = np.asarray(predicted).reshape(-1)
    actual = np.asarray(actual).reshape(-1)
    if predicted.shape != actual.shape:
        raise ValueError(
            f"length mismatch: {predicted.shape[0]} vs {actual.shape[0]}"
        )
    if predicted.size == 0:
        raise ValueError("empirical risk of an empty sample is undefined")
    return float(np.count_nonzero(predicted != actual)) / predicted.size
