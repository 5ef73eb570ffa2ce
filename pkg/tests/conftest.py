"""Shared fixtures: synthetic IDX files and optional real-MNIST discovery."""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np
import pytest

from polykan.data import Dataset

REPO_ROOT = Path(__file__).resolve().parent.parent

MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


def write_idx_images(path, images: np.ndarray) -> None:
    images = np.asarray(images, dtype=np.uint8)
    blob = struct.pack(">IIII", 0x803, images.shape[0], 28, 28) + images.tobytes()
    Path(path).write_bytes(blob)


def write_idx_labels(path, labels) -> None:
    blob = struct.pack(">II", 0x801, len(labels)) + bytes(int(v) for v in labels)
    Path(path).write_bytes(blob)


def synthetic_digits(n: int, seed: int, noise: float = 30.0):
    """Prototype-per-class images: an easily separable MNIST-shaped task."""
    proto_rng = np.random.default_rng(123456)
    protos = proto_rng.integers(0, 256, size=(10, 28, 28)).astype(float)
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 10, size=n)
    images = np.clip(protos[labels] + rng.normal(0.0, noise, size=(n, 28, 28)), 0, 255)
    return images.astype(np.uint8), labels.astype(np.uint8)


def synthetic_dataset(n: int, seed: int, noise: float = 30.0) -> Dataset:
    images, labels = synthetic_digits(n, seed, noise)
    return Dataset(
        features=images.reshape(n, -1).astype(float) / 255.0,
        labels=labels.astype(np.int64),
        name=f"synthetic[{n}]",
    )


def find_mnist() -> dict | None:
    """Locate the four canonical MNIST IDX files ($MNIST_DIR, ./data, ./mnist)."""
    candidates = []
    if os.environ.get("MNIST_DIR"):
        candidates.append(Path(os.environ["MNIST_DIR"]))
    candidates += [REPO_ROOT / "data", REPO_ROOT / "mnist"]
    for root in candidates:
        if not root.is_dir():
            continue
        found = {}
        for key, stem in MNIST_FILES.items():
            for name in (stem, stem + ".gz"):
                if (root / name).is_file():
                    found[key] = root / name
                    break
        if len(found) == len(MNIST_FILES):
            return found
    return None


@pytest.fixture(scope="session")
def mnist_paths():
    paths = find_mnist()
    if paths is None:
        pytest.skip(
            "canonical MNIST IDX files not found (set MNIST_DIR or place them in "
            "./data); this sandbox has no network access to fetch them"
        )
    return paths


@pytest.fixture(scope="session")
def idx_split(tmp_path_factory):
    """Small synthetic train/test IDX files shared across CLI tests."""
    root = tmp_path_factory.mktemp("idx")
    train_images, train_labels = synthetic_digits(600, seed=1)
    test_images, test_labels = synthetic_digits(200, seed=2)
    paths = {
        "train_images": root / "train-images-idx3-ubyte",
        "train_labels": root / "train-labels-idx1-ubyte",
        "test_images": root / "t10k-images-idx3-ubyte",
        "test_labels": root / "t10k-labels-idx1-ubyte",
    }
    write_idx_images(paths["train_images"], train_images)
    write_idx_labels(paths["train_labels"], train_labels)
    write_idx_images(paths["test_images"], test_images)
    write_idx_labels(paths["test_labels"], test_labels)
    return paths
