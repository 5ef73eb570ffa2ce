"""MNIST IDX ingestion, normalization, and deterministic subsetting.

Files are supplied by the caller; nothing is ever downloaded.  Plain and
gzip-compressed IDX files are both accepted (gzip detected by the 1f 8b
prefix).  Parsing is byte-exact with no locale or platform dependence.
"""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Dataset",
    "IdxFormatError",
    "BadMagicError",
    "TruncatedFileError",
    "DimensionMismatchError",
    "InvalidLabelError",
    "CountMismatchError",
    "load_idx_images",
    "load_idx_labels",
    "to_dataset",
    "load_dataset",
    "subset",
]

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
IMAGE_SIDE = 28
NUM_CLASSES = 10


class IdxFormatError(ValueError):
    """Malformed IDX container."""


class BadMagicError(IdxFormatError):
    """Magic number does not match the expected IDX record type."""


class TruncatedFileError(IdxFormatError):
    """File ends before the declared payload."""


class DimensionMismatchError(IdxFormatError):
    """Image rows/cols are not 28x28."""


class InvalidLabelError(IdxFormatError):
    """Label byte outside 0..9."""


class CountMismatchError(ValueError):
    """Image count differs from label count."""


@dataclass(frozen=True)
class Dataset:
    """Feature rows in [0, 1] with integer class labels."""

    features: np.ndarray
    labels: np.ndarray
    name: str = ""

    def __len__(self) -> int:
        return self.features.shape[0]


def _read_file(path) -> bytes:
    with open(path, "rb") as handle:
        raw = handle.read()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    return raw


def _header(raw: bytes, count: int, path) -> tuple[int, ...]:
    need = 4 * count
    if len(raw) < need:
        raise TruncatedFileError(f"{path}: header needs {need} bytes, file has {len(raw)}")
    return struct.unpack(f">{count}I", raw[:need])


def load_idx_images(path) -> np.ndarray:
    """Parse an IDX image file into a [N, 28, 28] uint8 array."""
    raw = _read_file(path)
    magic, count, rows, cols = _header(raw, 4, path)
    if magic != IMAGE_MAGIC:
        raise BadMagicError(
            f"{path}: magic 0x{magic:08x}, expected 0x{IMAGE_MAGIC:08x} for images"
        )
    if rows != IMAGE_SIDE or cols != IMAGE_SIDE:
        raise DimensionMismatchError(
            f"{path}: images are {rows}x{cols}, expected {IMAGE_SIDE}x{IMAGE_SIDE}"
        )
    payload = raw[16:]
    expected = count * rows * cols
    if len(payload) < expected:
        raise TruncatedFileError(
            f"{path}: payload has {len(payload)} bytes, needs {expected}"
        )
    if len(payload) > expected:
        raise IdxFormatError(f"{path}: {len(payload) - expected} trailing bytes")
    return np.frombuffer(payload, dtype=np.uint8).reshape(count, rows, cols).copy()


def load_idx_labels(path) -> np.ndarray:
    """Parse an IDX label file into a [N] uint8 array with entries < 10."""
    raw = _read_file(path)
    magic, count = _header(raw, 2, path)
    if magic != LABEL_MAGIC:
        raise BadMagicError(
            f"{path}: magic 0x{magic:08x}, expected 0x{LABEL_MAGIC:08x} for labels"
        )
    payload = raw[8:]
    if len(payload) < count:
        raise TruncatedFileError(f"{path}: payload has {len(payload)} bytes, needs {count}")
    if len(payload) > count:
        raise IdxFormatError(f"{path}: {len(payload) - count} trailing bytes")
    labels = np.frombuffer(payload, dtype=np.uint8).copy()
    if labels.size and labels.max() >= NUM_CLASSES:
        raise InvalidLabelError(f"{path}: label byte {labels.max()} >= {NUM_CLASSES}")
    return labels


def to_dataset(images: np.ndarray, labels: np.ndarray, name: str = "") -> Dataset:
    """Flatten 28x28 images to 784 features scaled by 1/255."""
    if images.shape[0] != labels.shape[0]:
        raise CountMismatchError(
            f"{images.shape[0]} images vs {labels.shape[0]} labels"
        )
    features = images.reshape(images.shape[0], -1).astype(float) / 255.0
    return Dataset(features=features, labels=labels.astype(np.int64), name=name)


def load_dataset(images_path, labels_path, name: str = "") -> Dataset:
    return to_dataset(load_idx_images(images_path), load_idx_labels(labels_path), name=name)


def subset(ds: Dataset, n: int, seed: int) -> Dataset:
    """n rows sampled without replacement by a PCG64 generator from seed."""
    if not 0 < n <= len(ds):
        raise ValueError(f"subset size must be in (0, {len(ds)}], got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.choice(len(ds), size=n, replace=False)
    return Dataset(
        features=ds.features[idx],
        labels=ds.labels[idx],
        name=f"{ds.name}[n={n},seed={seed}]" if ds.name else f"[n={n},seed={seed}]",
    )
