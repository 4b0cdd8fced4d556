"""MNIST ingestion: IDX parsing, 28x28 -> 5x5 block averaging, +/-1 binarization.

Only digits 0 and 1 are kept downstream (0 -> -1, 1 -> +1). Pixels are
scaled to [0, 1] before averaging. The five block offsets per axis are
``round(i * 23 / 4)`` = 0, 6, 12, 17, 23 so that five 5x5 blocks span the
full 28-pixel width.
"""

from __future__ import annotations

import gzip
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import SampleSet

IMAGE_MAGIC = 2051
LABEL_MAGIC = 2049
SIDE = 28
BLOCK = 5
GRID_OFFSETS = tuple(int(round(i * (SIDE - BLOCK) / (BLOCK - 1))) for i in range(BLOCK))
DEFAULT_THRESHOLD = 0.5


class IdxFormatError(ValueError):
    pass


@dataclass(frozen=True)
class RawImage:
    pixels: np.ndarray  # (28, 28) float in [0, 1]
    label: int


def _maybe_gunzip(data: bytes) -> bytes:
    if data[:2] == b"\x1f\x8b":
        return gzip.decompress(data)
    return data


def read_idx_images(data: bytes) -> np.ndarray:
    """Raw uint8 image tensor of shape (count, rows, cols)."""
    data = _maybe_gunzip(data)
    if len(data) < 16:
        raise IdxFormatError("truncated image header")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGE_MAGIC:
        raise IdxFormatError(f"bad image magic {magic}, expected {IMAGE_MAGIC}")
    need = count * rows * cols
    if len(data) - 16 < need:
        raise IdxFormatError(
            f"truncated image stream: {len(data) - 16} pixel bytes, header declares {need}"
        )
    return np.frombuffer(data, dtype=np.uint8, count=need, offset=16).reshape(count, rows, cols)


def read_idx_labels(data: bytes) -> np.ndarray:
    data = _maybe_gunzip(data)
    if len(data) < 8:
        raise IdxFormatError("truncated label header")
    magic, count = struct.unpack(">II", data[:8])
    if magic != LABEL_MAGIC:
        raise IdxFormatError(f"bad label magic {magic}, expected {LABEL_MAGIC}")
    if len(data) - 8 < count:
        raise IdxFormatError(
            f"truncated label stream: {len(data) - 8} label bytes, header declares {count}"
        )
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=8)


def _read_pair(image_bytes: bytes, label_bytes: bytes):
    images = read_idx_images(image_bytes)
    labels = read_idx_labels(label_bytes)
    if images.shape[0] != labels.shape[0]:
        raise IdxFormatError(
            f"{images.shape[0]} images but {labels.shape[0]} labels"
        )
    return images, labels


def parse_idx(image_bytes: bytes, label_bytes: bytes) -> list[RawImage]:
    images, labels = _read_pair(image_bytes, label_bytes)
    scaled = images.astype(np.float64) / 255.0
    return [RawImage(scaled[i], int(labels[i])) for i in range(images.shape[0])]


def downsample(pixels) -> np.ndarray:
    """Mean of each 5x5 block on the offset grid; accepts (28, 28) or (N, 28, 28)."""
    px = np.asarray(pixels, dtype=np.float64)
    if px.shape[-2:] != (SIDE, SIDE):
        raise ValueError(f"expected {SIDE}x{SIDE} images, got {px.shape[-2:]}")
    out = np.empty(px.shape[:-2] + (BLOCK, BLOCK))
    for r, orow in enumerate(GRID_OFFSETS):
        for c, ocol in enumerate(GRID_OFFSETS):
            block = px[..., orow:orow + BLOCK, ocol:ocol + BLOCK]
            out[..., r, c] = block.mean(axis=(-2, -1))
    return out


def binarize(block_means, threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    """+1 where strictly above ``threshold``, else -1; rows flattened to length 25."""
    bm = np.asarray(block_means)
    flat = bm.reshape(bm.shape[:-2] + (-1,))
    return np.where(flat > threshold, 1, -1).astype(np.int8)


def label_map(digit: int) -> int:
    if digit == 0:
        return -1
    if digit == 1:
        return 1
    raise ValueError(f"only digits 0 and 1 are mapped, got {digit}")


@dataclass(frozen=True)
class DigitPool:
    """Preprocessed zeros and ones pooled across all supplied IDX files.

    ``source_index`` is each item's position in the concatenation of the
    input files, so misclassified items can be traced back to raw images.
    """

    sample: SampleSet
    source_index: np.ndarray
    threshold: float

    def __len__(self):
        return len(self.sample)

    def indices_of(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.sample.labels == label)


def preprocess(images: np.ndarray, threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    """uint8 (N, 28, 28) -> int8 (N, 25) +/-1 points."""
    return binarize(downsample(images.astype(np.float64) / 255.0), threshold)


def load_pool(
    image_paths: Sequence[str | Path],
    label_paths: Sequence[str | Path],
    threshold: float = DEFAULT_THRESHOLD,
) -> DigitPool:
    if len(image_paths) != len(label_paths):
        raise ValueError("need one label file per image file")
    if not image_paths:
        raise ValueError("no input files")
    points, labels, sources = [], [], []
    offset = 0
    for ip, lp in zip(image_paths, label_paths):
        images, digits = _read_pair(Path(ip).read_bytes(), Path(lp).read_bytes())
        keep = np.flatnonzero(digits <= 1)
        points.append(preprocess(images[keep], threshold))
        labels.append(np.where(digits[keep] == 0, -1, 1).astype(np.int8))
        sources.append(keep + offset)
        offset += images.shape[0]
    sample = SampleSet(np.concatenate(points), np.concatenate(labels))
    return DigitPool(sample, np.concatenate(sources).astype(np.int64), threshold)


# Cache layout, little-endian:
#   magic b"SPWH" | u16 version | u16 n | u32 count | f64 threshold
#   i8[count] labels | u32[count] source_index | i8[count * n] points (row-major)
CACHE_MAGIC = b"SPWH"
CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<4sHHId")


def write_cache(path: str | Path, pool: DigitPool) -> None:
    s = pool.sample
    header = _CACHE_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, s.n, len(s), pool.threshold)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(s.labels.astype("<i1").tobytes())
        fh.write(pool.source_index.astype("<u4").tobytes())
        fh.write(s.points.astype("<i1").tobytes())


def read_cache(path: str | Path) -> DigitPool:
    data = Path(path).read_bytes()
    if len(data) < _CACHE_HEADER.size:
        raise IdxFormatError("truncated cache header")
    magic, version, n, count, threshold = _CACHE_HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise IdxFormatError(f"not a sparsewalsh cache (magic {magic!r})")
    if version != CACHE_VERSION:
        raise IdxFormatError(f"unsupported cache version {version}")
    pos = _CACHE_HEADER.size
    if len(data) != pos + count * (1 + 4 + n):
        raise IdxFormatError("cache size disagrees with its header")
    labels = np.frombuffer(data, "<i1", count, pos)
    pos += count
    source = np.frombuffer(data, "<u4", count, pos).astype(np.int64)
    pos += 4 * count
    points = np.frombuffer(data, "<i1", count * n, pos).reshape(count, n)
    return DigitPool(SampleSet(points, labels), source, threshold)


MNIST_TRAIN_FILES = ("train-images-idx3-ubyte", "train-labels-idx1-ubyte")
MNIST_TEST_FILES = ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte")


def default_mnist_dir() -> Path:
    return Path(os.environ.get("MNIST_DIR", "data/mnist"))


def find_mnist_files(directory: str | Path | None = None,
                     include_test: bool = False) -> tuple[list[Path], list[Path]]:
    """Standard MNIST IDX files (plain or .gz) inside ``directory``.

    The training file alone holds the 5923 zeros and 6742 ones used as the
    default pool; ``include_test`` appends the t10k files.
    """
    directory = Path(directory) if directory is not None else default_mnist_dir()
    groups = [MNIST_TRAIN_FILES] + ([MNIST_TEST_FILES] if include_test else [])
    images, labels = [], []
    for names in groups:
        found = []
        for name in names:
            for candidate in (directory / name, directory / f"{name}.gz"):
                if candidate.exists():
                    found.append(candidate)
                    break
            else:
                raise FileNotFoundError(f"{name}[.gz] not found in {directory}")
        images.append(found[0])
        labels.append(found[1])
    return images, labels
