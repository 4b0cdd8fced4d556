"""Walsh-Hadamard kernels.

The transform is unnormalized, ``W = [[1, 1], [1, -1]]^{(x) n}``, so
``fwht(fwht(z)) == 2**n * z``. Entry (v, u) of W is ``(-1)**popcount(u & v)``;
row v corresponds to the point with bits ``v`` under ``core.points_to_bits``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .core import ParityMask, SampleSet, as_point, points_to_bits

MAX_TRANSFORM_DIM = 26
_CHUNK_ENTRIES = 1 << 22


def fwht(values) -> np.ndarray:
    """Fast Walsh-Hadamard transform of a length-2^n vector.

    Integer inputs stay in int64 (exact); everything else runs in float64.
    """
    v = np.asarray(values)
    if v.ndim != 1:
        raise ValueError("fwht expects a one-dimensional vector")
    size = v.shape[0]
    if size == 0 or size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    n = size.bit_length() - 1
    if n > MAX_TRANSFORM_DIM:
        raise ValueError(f"n={n} exceeds the memory guard of {MAX_TRANSFORM_DIM}")
    dtype = np.int64 if np.issubdtype(v.dtype, np.integer) else np.float64
    out = v.astype(dtype, copy=True)
    h = 1
    while h < size:
        blocks = out.reshape(-1, 2, h)
        lo = blocks[:, 0, :].copy()
        hi = blocks[:, 1, :]
        blocks[:, 0, :] += hi
        np.subtract(lo, hi, out=blocks[:, 1, :])
        h *= 2
    return out


def parity_eval(mask: ParityMask, x) -> int:
    """prod_{j in mask} x_j, with the empty product equal to +1."""
    x = as_point(x, mask.n)
    return int(np.prod(x[list(mask.indices())], dtype=np.int64)) if mask.bits else 1


def low_degree_bits(n: int, d: int) -> np.ndarray:
    """All masks of weight <= d as uint64, ordered by weight then numeric value."""
    if not 0 <= d <= n:
        raise ValueError(f"degree d={d} must lie in [0, n={n}]")
    out = []
    for w in range(d + 1):
        out.extend(sorted(sum(1 << j for j in c) for c in combinations(range(n), w)))
    return np.array(out, dtype=np.uint64)


def enumerate_low_degree(n: int, d: int) -> list[ParityMask]:
    return [ParityMask(int(b), n) for b in low_degree_bits(n, d)]


def mask_bits(masks) -> np.ndarray:
    if isinstance(masks, np.ndarray):
        return masks.astype(np.uint64, copy=False)
    return np.array([m.bits for m in masks], dtype=np.uint64)


def parity_columns(point_bits: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """(l, M) int8 matrix whose column t is the parity ``masks[t]`` over the points."""
    odd = np.bitwise_count(point_bits[:, None] & masks[None, :]) & np.uint8(1)
    return (1 - 2 * odd.astype(np.int8)).astype(np.int8)


def correlate(sample: SampleSet, masks: Sequence[ParityMask] | np.ndarray) -> np.ndarray:
    """Entry t is sum_i label_i * parity(mask_t, x_i), i.e. column t of W_{x,d}^T f_x.

    Computed from parities of the sample points directly; the 2^n x 2^n
    matrix is never formed.
    """
    if len(sample) == 0:
        raise ValueError("cannot correlate against an empty sample")
    mbits = mask_bits(masks)
    if isinstance(masks, np.ndarray):
        if mbits.size and int(mbits.max()) >> sample.n:
            raise ValueError("mask does not fit the sample dimension")
    elif any(m.n != sample.n for m in masks):
        raise ValueError("mask dimension disagrees with the sample")
    pbits = points_to_bits(sample.points)
    labels = sample.labels.astype(np.int64)
    out = np.empty(mbits.shape[0], dtype=np.int64)
    step = max(1, _CHUNK_ENTRIES // max(1, len(sample)))
    for start in range(0, mbits.shape[0], step):
        cols = parity_columns(pbits, mbits[start:start + step])
        out[start:start + step] = labels @ cols.astype(np.int64)
    return out
