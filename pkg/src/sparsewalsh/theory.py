"""Desk-scale checks of the learning-theory side: the VC generalization term,
the explicit shattering construction for the n lower bound, and Monte Carlo
lower bounds on the number of sign patterns sign(W z) with ||z||_0 <= k.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import sign
from .wht import fwht


@dataclass(frozen=True)
class BoundParams:
    h: float
    ell: int
    eta: float

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.ell < 1:
            raise ValueError("ell must be at least 1")
        # eta = 1 is admitted so that the trivial-confidence case can be evaluated
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if self.ell < self.h:
            warnings.warn(
                f"ell={self.ell} < h={self.h}: the bound is vacuous in this regime",
                stacklevel=2,
            )


def vc_bound_term(p: BoundParams) -> float:
    """sqrt((h (ln(2 ell / h) + 1) - ln(eta / 4)) / ell), natural logs."""
    radicand = (p.h * (math.log(2 * p.ell / p.h) + 1) - math.log(p.eta / 4)) / p.ell
    if radicand <= 0:
        raise ValueError(f"nonpositive radicand {radicand:.6g} for {p}")
    return math.sqrt(radicand)


def hadamard_matrix(n: int) -> np.ndarray:
    """Dense 2^n x 2^n Walsh-Hadamard matrix; only for tiny n."""
    size = 1 << n
    return np.stack([fwht(np.eye(size, dtype=np.int64)[u]) for u in range(size)], axis=1)


def shattering_labelings(n: int) -> tuple[int, int]:
    """(realized, total) labelings of the n construction points by 1-sparse classifiers.

    The construction picks rows w_i of W with a single (1, -1) tensor factor
    in slot i; row index 1 << i under the bit convention used here, i.e.
    the point that is -1 in coordinate i and +1 elsewhere. Column u of W
    restricted to those rows reads out (-1)^{u_i}.
    """
    if not 1 <= n <= 12:
        raise ValueError("n must be small enough to enumerate all 2^n parities")
    W = hadamard_matrix(n)
    rows = [1 << i for i in range(n)]
    patterns = {tuple(sign(W[rows, u])) for u in range(1 << n)}
    return len(patterns), 1 << n


def verify_shattering_construction(n: int) -> bool:
    realized, total = shattering_labelings(n)
    return realized == total


def sample_class_size(n: int, k: int, trials: int, seed: int = 0) -> int:
    """Distinct sign(W z) patterns over ``trials`` random k-sparse z.

    Supports are uniform k-subsets of {0..2^n-1}; nonzero entries are
    standard normal. Trial t draws from a generator seeded by (seed, t).
    """
    size = 1 << n
    if not 1 <= k <= size:
        raise ValueError(f"k must lie in [1, 2^n = {size}]")
    patterns = set()
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        z = np.zeros(size)
        support = rng.choice(size, size=k, replace=False)
        z[support] = rng.standard_normal(k)
        patterns.add(sign(fwht(z)).tobytes())
    return len(patterns)


def class_size_upper_bound(n: int, k: int) -> int:
    """C(2^{n+1}, k)^2, the counting bound on |C_{n,k}|."""
    return comb(1 << (n + 1), k) ** 2
