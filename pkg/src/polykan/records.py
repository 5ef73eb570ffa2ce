"""Checkpoint, metrics, and CSV file formats.

Checkpoints and metrics are single JSON text documents with every float
rendered at 17 significant digits (lossless for 64-bit values), fixed key
order, and a trailing newline, so reruns produce byte-identical files.
Wall-clock timing is deliberately kept out of these documents (it would
break byte-for-byte reproducibility); the bench CSV carries it instead.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .families import FamilySpec, family_spec_from_params
from .kan import KanLayer, KanNetwork, pade_orders
from .metrics import RunMetrics
from .train import TrainConfig

__all__ = [
    "CheckpointError",
    "fmt_float",
    "document_text",
    "write_document",
    "save_checkpoint",
    "load_checkpoint",
    "run_record",
    "write_bench_csv",
    "write_basis_csv",
]

FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Checkpoint file is unreadable or inconsistent."""


def fmt_float(x: float) -> str:
    """17-significant-digit decimal; exact round-trip for 64-bit floats."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x}")
    text = format(x, ".17g")
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = list(obj)
        if not items:
            return "[]"
        if all(isinstance(v, (bool, int, float, np.integer, np.floating)) for v in items):
            return "[" + ", ".join(_render(v, 0) for v in items) + "]"
        inner = ",\n".join(f"{pad}  {_render(v, indent + 1)}" for v in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def document_text(doc: dict) -> str:
    """Render a document as JSON text (parsable by json.loads)."""
    return _render(doc, 0) + "\n"


def write_document(path, doc: dict) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(document_text(doc))


def _params_doc(params: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}


def _params_from_doc(params: dict) -> dict:
    return {k: tuple(v) if isinstance(v, list) else v for k, v in params.items()}


def save_checkpoint(path, net: KanNetwork) -> None:
    """Flat coefficient dump: layer-major, then input-, output-, degree-major.

    Rational layers store the numerator block before the denominator block.
    """
    flat: list[float] = []
    for layer in net.layers:
        for p in layer.parameters():
            flat.extend(p.ravel().tolist())
    doc = {
        "format_version": FORMAT_VERSION,
        "family": net.spec.family,
        "params": _params_doc(net.spec.params),
        "dims": list(net.dims),
        "degree": net.degree,
        "seed": net.seed,
        "coeffs": flat,
    }
    write_document(path, doc)


def _zero_network(spec: FamilySpec, dims, degree: int, seed: int) -> KanNetwork:
    layers = []
    for p in range(len(dims) - 1):
        k_in, k_out = dims[p], dims[p + 1]
        if spec.family == "pade":
            m, n = pade_orders(spec, degree)
            layers.append(
                KanLayer(
                    in_dim=k_in, out_dim=k_out, degree=degree,
                    num_coeffs=np.zeros((k_in, k_out, m + 1)),
                    den_coeffs=np.zeros((k_in, k_out, n)),
                )
            )
        else:
            layers.append(
                KanLayer(
                    in_dim=k_in, out_dim=k_out, degree=degree,
                    coeffs=np.zeros((k_in, k_out, degree + 1)),
                )
            )
    return KanNetwork(spec=spec, dims=tuple(dims), degree=degree, seed=seed, layers=layers)


def load_checkpoint(path) -> KanNetwork:
    try:
        with open(path, "r", encoding="ascii") as handle:
            doc = json.load(handle)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint format")
    try:
        spec = family_spec_from_params(doc["family"], _params_from_doc(doc["params"]))
        dims = tuple(int(d) for d in doc["dims"])
        degree = int(doc["degree"])
        seed = int(doc["seed"])
        flat = np.asarray(doc["coeffs"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"{path}: malformed checkpoint: {exc}") from exc
    net = _zero_network(spec, dims, degree, seed)
    expected = net.parameter_count
    if flat.size != expected:
        raise CheckpointError(
            f"{path}: checkpoint has {flat.size} coefficients, network needs {expected}"
        )
    offset = 0
    for layer in net.layers:
        for p in layer.parameters():
            p[...] = flat[offset : offset + p.size].reshape(p.shape)
            offset += p.size
    return net


def _metrics_doc(metrics: RunMetrics) -> dict:
    return {
        "overall_accuracy": metrics.overall_accuracy,
        "kappa": metrics.kappa,
        "f1_micro": metrics.f1_micro,
        "f1_macro": metrics.f1_macro,
        "kappa_degenerate": metrics.kappa_degenerate,
    }


def run_record(
    net: KanNetwork,
    metrics: RunMetrics,
    *,
    kind: str,
    cfg: TrainConfig | None = None,
    train_samples: int | None = None,
    test_samples: int | None = None,
    epoch_mean_loss=(),
) -> dict:
    """Metrics document for one run; deterministic for identical runs."""
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "family": net.spec.family,
        "params": _params_doc(net.spec.params),
        "dims": list(net.dims),
        "degree": net.degree,
        "seed": net.seed,
        "parameter_count": net.parameter_count,
        "normalization": "divide-by-255",
    }
    if cfg is not None:
        doc["config"] = {
            "epochs": cfg.epochs,
            "batch_size": cfg.batch_size,
            "learning_rate": cfg.learning_rate,
            "adam_beta1": cfg.adam_beta1,
            "adam_beta2": cfg.adam_beta2,
            "adam_epsilon": cfg.adam_epsilon,
            "shuffle": cfg.shuffle,
        }
    if train_samples is not None:
        doc["train_samples"] = train_samples
    if test_samples is not None:
        doc["test_samples"] = test_samples
    if epoch_mean_loss:
        doc["epoch_mean_loss"] = [float(x) for x in epoch_mean_loss]
    doc["metrics"] = _metrics_doc(metrics)
    return doc


def params_summary(params: dict) -> str:
    """Comma-free one-field rendering for CSV: 'a=1.0 q=0.5', lists with ';'."""
    parts = []
    for key, value in params.items():
        if isinstance(value, tuple):
            parts.append(f"{key}=" + ";".join(fmt_float(v) for v in value))
        elif isinstance(value, bool):
            parts.append(f"{key}={'true' if value else 'false'}")
        elif isinstance(value, float):
            parts.append(f"{key}={fmt_float(value)}")
        elif value is None:
            continue
        else:
            parts.append(f"{key}={value}")
    return " ".join(parts)


BENCH_COLUMNS = (
    "family",
    "params",
    "status",
    "accuracy",
    "kappa",
    "f1_micro",
    "f1_macro",
    "parameter_count",
    "train_seconds",
)


def write_bench_csv(path, rows: list[dict]) -> None:
    with open(path, "w", encoding="ascii", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        for row in rows:
            writer.writerow([row[col] for col in BENCH_COLUMNS])


def write_basis_csv(path, grid, values) -> None:
    """x,n0,...,nD rows for one family over a sample grid."""
    degree_max = values.shape[1] - 1
    with open(path, "w", encoding="ascii", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x"] + [f"n{d}" for d in range(degree_max + 1)])
        for x, row in zip(grid, values):
            writer.writerow([fmt_float(x)] + [fmt_float(v) for v in row])
