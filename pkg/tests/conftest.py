import itertools
import struct

import numpy as np
import pytest

from sparsewalsh.core import SampleSet
from sparsewalsh.features import SelectionExhaustedError
from sparsewalsh.wht import enumerate_low_degree


def dense_hadamard(n):
    """W built entry by entry from its definition, independent of fwht."""
    size = 1 << n
    W = np.empty((size, size), dtype=np.int64)
    for v in range(size):
        for u in range(size):
            W[v, u] = (-1) ** bin(u & v).count("1")
    return W


def point_row_index(x):
    """Row of W for a +/-1 point: bit j set iff x_j == -1."""
    return sum(1 << j for j, xj in enumerate(x) if xj < 0)


def random_sample(rng, n, ell, labels=None):
    points = rng.choice(np.array([-1, 1], dtype=np.int8), size=(ell, n))
    if labels is None:
        labels = rng.choice(np.array([-1, 1], dtype=np.int8), size=ell)
    return SampleSet(points, labels)


def all_points(n):
    return np.array(list(itertools.product([1, -1], repeat=n)), dtype=np.int8)[:, ::-1]


def idx_images(pixels: np.ndarray) -> bytes:
    count, rows, cols = pixels.shape
    return struct.pack(">IIII", 2051, count, rows, cols) + pixels.astype(np.uint8).tobytes()


def idx_labels(labels) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">II", 2049, labels.size) + labels.tobytes()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def synthetic_digits(per_class, seed=0, extra_digit=None):
    """Crude 28x28 zeros (rings) and ones (vertical bars) with jitter and noise."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:28, 0:28]
    images, labels = [], []
    for i in range(2 * per_class):
        digit = i % 2
        cy, cx = 14 + rng.integers(-2, 3), 14 + rng.integers(-2, 3)
        if digit == 0:
            r = np.hypot(yy - cy, xx - cx)
            img = (np.abs(r - rng.uniform(7, 10)) < 2.5).astype(float)
        else:
            img = ((np.abs(xx - cx) < rng.uniform(1.5, 3.5)) & (np.abs(yy - cy) < 11)).astype(float)
        img = np.clip(img + 0.3 * rng.random((28, 28)), 0, 1)
        images.append(np.round(img * 255))
        labels.append(digit)
    if extra_digit is not None:
        images.append(np.zeros((28, 28)))
        labels.append(extra_digit)
    return np.array(images, dtype=np.uint8), np.array(labels)


@pytest.fixture
def digit_files(tmp_path):
    images, labels = synthetic_digits(150)
    ip, lp = tmp_path / "train-images-idx3-ubyte", tmp_path / "train-labels-idx1-ubyte"
    ip.write_bytes(idx_images(images))
    lp.write_bytes(idx_labels(labels))
    return ip, lp


def brute_force_select(sample, d, k):
    """Materialize every column, sort, and dedup by literal vector comparison."""
    masks = enumerate_low_degree(sample.n, d)
    W = dense_hadamard(sample.n)
    rows = [point_row_index(x) for x in sample.points]
    cols = [W[rows, m.bits] for m in masks]
    scores = [abs(int(c @ sample.labels.astype(np.int64))) for c in cols]
    order = sorted(range(len(masks)), key=lambda t: (-scores[t], t))
    kept, kept_cols = [], []
    for t in order:
        c = cols[t]
        if any(np.array_equal(c, q) or np.array_equal(c, -q) for q in kept_cols):
            continue
        kept.append(masks[t])
        kept_cols.append(c)
        if len(kept) == k:
            return kept
    raise SelectionExhaustedError("oracle ran out of columns")


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
