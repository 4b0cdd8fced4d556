"""Correlation screening of low-degree parity features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ParityMask, SampleSet, points_to_bits
from .wht import correlate, low_degree_bits, parity_columns

_SCAN_CHUNK = 256


class SelectionExhaustedError(ValueError):
    """Fewer distinct-up-to-sign columns exist over the sample than requested."""


@dataclass(frozen=True)
class SelectedFeatures:
    masks: tuple[ParityMask, ...]
    design_columns: np.ndarray  # (l, k) int8
    correlations: np.ndarray  # (k,) int64, in admission order

    @property
    def k(self) -> int:
        return len(self.masks)

    def design_for(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the selected parities on new points, (m, k) int8."""
        mbits = np.array([m.bits for m in self.masks], dtype=np.uint64)
        return parity_columns(points_to_bits(points), mbits)


def _canonical_key(col: np.ndarray) -> bytes:
    # column and its negation map to the same key
    return (col if col[0] > 0 else -col).tobytes()


def rank_masks(sample: SampleSet, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Weight-<=d masks sorted by |correlation| descending, ties in enumeration order."""
    masks = low_degree_bits(sample.n, d)
    corr = correlate(sample, masks)
    order = np.argsort(-np.abs(corr), kind="stable")
    return masks[order], corr[order]


def select_features(sample: SampleSet, d: int, k: int) -> SelectedFeatures:
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 <= d <= sample.n:
        raise ValueError(f"degree d={d} must lie in [0, n={sample.n}]")
    ranked, corr = rank_masks(sample, d)
    pbits = points_to_bits(sample.points)

    seen: set[bytes] = set()
    chosen: list[int] = []
    columns: list[np.ndarray] = []
    for start in range(0, ranked.shape[0], _SCAN_CHUNK):
        block = parity_columns(pbits, ranked[start:start + _SCAN_CHUNK])
        for j in range(block.shape[1]):
            col = block[:, j]
            key = _canonical_key(col)
            if key in seen:
                continue
            seen.add(key)
            chosen.append(start + j)
            columns.append(col)
            if len(chosen) == k:
                break
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise SelectionExhaustedError(
            f"only {len(chosen)} distinct-up-to-sign columns of degree <= {d} "
            f"exist over {len(sample)} points; requested k={k}"
        )
    masks = tuple(ParityMask(int(ranked[i]), sample.n) for i in chosen)
    design = np.ascontiguousarray(np.stack(columns, axis=1))
    return SelectedFeatures(masks, design, corr[chosen].copy())
