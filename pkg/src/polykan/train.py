"""Loss, Adam optimizer, and the training loop for KAN classifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kan import KanNetwork, ShapeMismatchError, backward, forward
from .metrics import RunMetrics, compute_metrics, confusion

__all__ = [
    "TrainConfig",
    "OptimizerState",
    "EpochStats",
    "InvalidLabelError",
    "NonFiniteLossError",
    "softmax_cross_entropy",
    "init_optimizer",
    "adam_step",
    "fit",
    "predict",
    "evaluate",
]


class InvalidLabelError(ValueError):
    """A label falls outside [0, C)."""


class NonFiniteLossError(ArithmeticError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    batch_size: int = 64
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate > 0.0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        for name in ("adam_beta1", "adam_beta2"):
            beta = getattr(self, name)
            if not 0.0 < beta < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {beta}")
        if self.adam_epsilon <= 0.0:
            raise ValueError(f"adam_epsilon must be > 0, got {self.adam_epsilon}")


@dataclass
class OptimizerState:
    """Adam moment tensors congruent to the network coefficients."""

    first_moment: list[np.ndarray]
    second_moment: list[np.ndarray]
    step: int = 0


def softmax_cross_entropy(logits, labels) -> tuple[float, np.ndarray]:
    """Mean cross-entropy and its logit gradient (softmax - onehot) / batch."""
    logits = np.asarray(logits, dtype=float)
    labels = np.asarray(labels, dtype=np.int64).ravel()
    if logits.ndim != 2 or logits.shape[0] != labels.size:
        raise ShapeMismatchError(
            f"logits {logits.shape} do not match {labels.size} labels"
        )
    num_classes = logits.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise InvalidLabelError(f"labels must lie in [0, {num_classes})")
    rows = np.arange(labels.size)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exps = np.exp(shifted)
    normalizer = exps.sum(axis=1, keepdims=True)
    log_probs = shifted - np.log(normalizer)
    loss = float(-log_probs[rows, labels].mean())
    grad = exps / normalizer
    grad[rows, labels] -= 1.0
    grad /= labels.size
    return loss, grad


def init_optimizer(net: KanNetwork) -> OptimizerState:
    params = net.parameters()
    return OptimizerState(
        first_moment=[np.zeros_like(p) for p in params],
        second_moment=[np.zeros_like(p) for p in params],
    )


def adam_step(net: KanNetwork, grads, state: OptimizerState, cfg: TrainConfig) -> None:
    """One bias-corrected Adam update, applied to the network in place."""
    params = net.parameters()
    if len(grads) != len(params):
        raise ShapeMismatchError(
            f"got {len(grads)} gradient tensors for {len(params)} parameter tensors"
        )
    state.step += 1
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    correction1 = 1.0 - b1**state.step
    correction2 = 1.0 - b2**state.step
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        if g.shape != p.shape:
            raise ShapeMismatchError(f"gradient shape {g.shape} != parameter {p.shape}")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        m_hat = m / correction1
        v_hat = v / correction2
        p -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_epsilon)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    eval_metrics: RunMetrics | None = None


def fit(net: KanNetwork, train_set, cfg: TrainConfig, eval_set=None):
    """Train for cfg.epochs of shuffled mini-batches; returns (net, history).

    Shuffle order comes from a PCG64 generator owned by the loop and seeded
    with cfg.seed, so identical (seed, config, data) give identical runs.
    """
    features = np.asarray(train_set.features, dtype=float)
    labels = np.asarray(train_set.labels, dtype=np.int64)
    if features.shape[1] != net.dims[0]:
        raise ShapeMismatchError(
            f"dataset width {features.shape[1]} != network input width {net.dims[0]}"
        )
    count = features.shape[0]
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    state = init_optimizer(net)
    history: list[EpochStats] = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(count) if cfg.shuffle else np.arange(count)
        loss_sum = 0.0
        for start in range(0, count, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            logits, trace = forward(net, features[batch])
            loss, grad_logits = softmax_cross_entropy(logits, labels[batch])
            if not math.isfinite(loss):
                raise NonFiniteLossError(f"non-finite loss at epoch {epoch}")
            grads, _ = backward(net, trace, grad_logits, need_input_grad=False)
            adam_step(net, grads, state, cfg)
            loss_sum += loss * batch.size
        stats = EpochStats(
            epoch=epoch,
            mean_loss=loss_sum / count,
            eval_metrics=evaluate(net, eval_set) if eval_set is not None else None,
        )
        history.append(stats)
    return net, history


def predict(net: KanNetwork, features, batch_size: int = 256) -> np.ndarray:
    """Argmax class predictions, computed in fixed-size chunks."""
    features = np.asarray(features, dtype=float)
    out = np.empty(features.shape[0], dtype=np.int64)
    for start in range(0, features.shape[0], batch_size):
        logits, _ = forward(net, features[start : start + batch_size])
        out[start : start + batch_size] = np.argmax(logits, axis=1)
    return out


def evaluate(net: KanNetwork, dataset, batch_size: int = 256) -> RunMetrics:
    """Run metrics of the network's predictions on a labeled dataset."""
    predictions = predict(net, dataset.features, batch_size=batch_size)
    cm = confusion(predictions, dataset.labels, num_classes=net.dims[-1])
    return compute_metrics(cm)
