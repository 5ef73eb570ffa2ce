"""KAN layers and networks: forward pass and reverse-mode gradients.

Each edge (i, j) of a layer carries a learned univariate function of the
tanh-squashed input, rho(y) = sum_d c_d P_d(tanh y) in the chosen polynomial
basis.  The rational family instead learns N(t)/Q(t) per edge with the
denominator magnitude clamped away from zero.

All contractions use non-optimized einsum: reductions run in a fixed index
order, so results are bitwise reproducible and a batch equals the stacked
single-sample calls bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import eval_basis_many
from .families import FamilySpec

__all__ = [
    "RATIONAL_EDGE_EPS",
    "InvalidDimsError",
    "ShapeMismatchError",
    "TraceMismatchError",
    "KanLayer",
    "KanNetwork",
    "LayerTrace",
    "ForwardTrace",
    "init_network",
    "layer_forward",
    "forward",
    "backward",
    "pade_orders",
]

#: Denominator magnitude floor for the learnable rational edge.
RATIONAL_EDGE_EPS = 1e-4


class InvalidDimsError(ValueError):
    """Network dims must list at least an input and an output width."""


class ShapeMismatchError(ValueError):
    """Input width does not match the layer or network."""


class TraceMismatchError(ValueError):
    """Forward trace does not belong to this network/batch."""


@dataclass
class KanLayer:
    """One KAN layer mapping in_dim inputs to out_dim sums of edge functions.

    Polynomial families use ``coeffs`` with shape [in_dim, out_dim, D+1];
    the rational family uses ``num_coeffs`` [in_dim, out_dim, m+1] and
    ``den_coeffs`` [in_dim, out_dim, n] (denominator constant fixed at 1).
    """

    in_dim: int
    out_dim: int
    degree: int
    coeffs: np.ndarray | None = None
    num_coeffs: np.ndarray | None = None
    den_coeffs: np.ndarray | None = None

    @property
    def is_rational(self) -> bool:
        return self.coeffs is None

    def parameters(self) -> list[np.ndarray]:
        if self.is_rational:
            return [self.num_coeffs, self.den_coeffs]
        return [self.coeffs]

    @property
    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())


@dataclass
class KanNetwork:
    """Stack of KAN layers chaining dims k_0 -> k_1 -> ... -> k_P."""

    spec: FamilySpec
    dims: tuple[int, ...]
    degree: int
    seed: int
    layers: list[KanLayer]

    def parameters(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.parameters()]

    @property
    def parameter_count(self) -> int:
        return sum(layer.parameter_count for layer in self.layers)


@dataclass
class LayerTrace:
    """Per-layer intermediates retained for the backward pass."""

    y: np.ndarray                      # layer input [B, in_dim]
    squash: np.ndarray                 # t = tanh(y)
    basis_values: np.ndarray           # P_d(t) or t^d  [B, in_dim, *]
    basis_derivs: np.ndarray
    num: np.ndarray | None = None      # rational edge: N(t)       [B, in, out]
    den_clamped: np.ndarray | None = None
    unclamped: np.ndarray | None = None  # |Q(t)| > eps mask


@dataclass
class ForwardTrace:
    """Everything backward needs: per-layer traces plus the final logits."""

    layers: list[LayerTrace] = field(default_factory=list)
    logits: np.ndarray | None = None

    @property
    def batch_size(self) -> int:
        return self.layers[0].y.shape[0]


def pade_orders(spec: FamilySpec, degree: int) -> tuple[int, int]:
    """Numerator/denominator degrees for the rational edge; default m = n = D."""
    m = spec.params.get("m")
    n = spec.params.get("n")
    return (degree if m is None else m), (degree if n is None else n)


def init_network(spec: FamilySpec, dims, degree: int, seed: int) -> KanNetwork:
    """Random network with coefficients ~ N(0, 1/sqrt(k_p (D+1))), PCG64-seeded."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise InvalidDimsError(f"dims must chain >= 2 widths >= 1, got {dims}")
    if degree < 0:
        raise InvalidDimsError(f"degree must be >= 0, got {degree}")
    rng = np.random.Generator(np.random.PCG64(seed))
    rational = spec.family == "pade"
    layers = []
    for p in range(len(dims) - 1):
        k_in, k_out = dims[p], dims[p + 1]
        sigma = 1.0 / math.sqrt(k_in * (degree + 1))
        if rational:
            m, n = pade_orders(spec, degree)
            layers.append(
                KanLayer(
                    in_dim=k_in,
                    out_dim=k_out,
                    degree=degree,
                    num_coeffs=rng.normal(0.0, sigma, size=(k_in, k_out, m + 1)),
                    den_coeffs=rng.normal(0.0, sigma, size=(k_in, k_out, n)),
                )
            )
        else:
            layers.append(
                KanLayer(
                    in_dim=k_in,
                    out_dim=k_out,
                    degree=degree,
                    coeffs=rng.normal(0.0, sigma, size=(k_in, k_out, degree + 1)),
                )
            )
    return KanNetwork(spec=spec, dims=dims, degree=degree, seed=int(seed), layers=layers)


def _squash(y: np.ndarray) -> np.ndarray:
    t = np.tanh(y)
    # Mathematically t is in (-1, 1); float64 saturates to +-1.0 for |y| > ~19.
    assert np.all(np.abs(t) <= 1.0)
    return t


def layer_forward(layer: KanLayer, spec: FamilySpec, y) -> tuple[np.ndarray, LayerTrace]:
    """Apply one layer to a batch [B, in_dim]; returns output and trace slice."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or y.shape[1] != layer.in_dim:
        raise ShapeMismatchError(
            f"layer expects [batch, {layer.in_dim}], got {y.shape}"
        )
    t = _squash(y)
    if layer.is_rational:
        m = layer.num_coeffs.shape[2] - 1
        n = layer.den_coeffs.shape[2]
        V, dV = eval_basis_many(spec, max(m, n), t)  # V[..., d] = t^d
        num = np.einsum("bid,ijd->bij", V[..., : m + 1], layer.num_coeffs, optimize=False)
        den = 1.0 + np.einsum(
            "bid,ijd->bij", V[..., 1 : n + 1], layer.den_coeffs, optimize=False
        )
        unclamped = np.abs(den) > RATIONAL_EDGE_EPS
        sign = np.where(den >= 0.0, 1.0, -1.0)
        den_clamped = sign * np.maximum(np.abs(den), RATIONAL_EDGE_EPS)
        out = (num / den_clamped).sum(axis=1)
        trace = LayerTrace(
            y=y, squash=t, basis_values=V, basis_derivs=dV,
            num=num, den_clamped=den_clamped, unclamped=unclamped,
        )
        return out, trace
    V, dV = eval_basis_many(spec, layer.degree, t)
    out = np.einsum("bid,ijd->bj", V, layer.coeffs, optimize=False)
    return out, LayerTrace(y=y, squash=t, basis_values=V, basis_derivs=dV)


def forward(net: KanNetwork, x) -> tuple[np.ndarray, ForwardTrace]:
    """Full forward pass; the trace retains everything backward needs."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != net.dims[0]:
        raise ShapeMismatchError(f"network expects [batch, {net.dims[0]}], got {x.shape}")
    trace = ForwardTrace()
    y = x
    for layer in net.layers:
        y, layer_trace = layer_forward(layer, net.spec, y)
        trace.layers.append(layer_trace)
    trace.logits = y
    return y, trace


def _check_trace(net: KanNetwork, trace: ForwardTrace, grad_logits: np.ndarray) -> None:
    if trace.logits is None or len(trace.layers) != len(net.layers):
        raise TraceMismatchError("trace layer count does not match the network")
    if grad_logits.shape != trace.logits.shape:
        raise TraceMismatchError(
            f"grad_logits shape {grad_logits.shape} != logits shape {trace.logits.shape}"
        )
    batch = trace.batch_size
    for layer, lt in zip(net.layers, trace.layers):
        if lt.y.shape != (batch, layer.in_dim):
            raise TraceMismatchError("trace shapes do not match the network layers")


def _poly_layer_backward(layer, lt, g, need_input_grad):
    grad_c = np.einsum("bj,bid->ijd", g, lt.basis_values, optimize=False)
    if not need_input_grad:
        return [grad_c], None
    edge = np.einsum("bj,ijd->bid", g, layer.coeffs, optimize=False)
    grad_t = (edge * lt.basis_derivs).sum(axis=2)
    grad_y = grad_t * (1.0 - lt.squash * lt.squash)
    return [grad_c], grad_y


def _rational_layer_backward(layer, lt, g, need_input_grad):
    m = layer.num_coeffs.shape[2] - 1
    n = layer.den_coeffs.shape[2]
    V, dV = lt.basis_values, lt.basis_derivs
    den, num, mask = lt.den_clamped, lt.num, lt.unclamped
    gb = g[:, None, :]  # [B, 1, out]
    grad_num = np.einsum("bij,bid->ijd", gb / den, V[..., : m + 1], optimize=False)
    # Where the clamp is active the denominator is locally constant.
    gden = np.where(mask, -gb * num / (den * den), 0.0)
    grad_den = np.einsum("bij,bid->ijd", gden, V[..., 1 : n + 1], optimize=False)
    if not need_input_grad:
        return [grad_num, grad_den], None
    dnum = np.einsum("bid,ijd->bij", dV[..., : m + 1], layer.num_coeffs, optimize=False)
    dden = np.einsum("bid,ijd->bij", dV[..., 1 : n + 1], layer.den_coeffs, optimize=False)
    dden = np.where(mask, dden, 0.0)
    grad_t = (gb * (dnum / den - num * dden / (den * den))).sum(axis=2)
    grad_y = grad_t * (1.0 - lt.squash * lt.squash)
    return [grad_num, grad_den], grad_y


def backward(
    net: KanNetwork,
    trace: ForwardTrace,
    grad_logits,
    *,
    need_input_grad: bool = True,
) -> tuple[list[np.ndarray], np.ndarray | None]:
    """Exact reverse-mode gradients for every coefficient tensor and the input.

    Returns gradients in the order of ``net.parameters()`` plus the gradient
    with respect to the network input (``None`` when ``need_input_grad`` is
    off).  Batch accumulation runs in fixed sample-major order.
    """
    grad_logits = np.asarray(grad_logits, dtype=float)
    _check_trace(net, trace, grad_logits)
    g = grad_logits
    per_layer = []
    for index in range(len(net.layers) - 1, -1, -1):
        layer, lt = net.layers[index], trace.layers[index]
        want_input = need_input_grad or index > 0
        if layer.is_rational:
            grads, g_next = _rational_layer_backward(layer, lt, g, want_input)
        else:
            grads, g_next = _poly_layer_backward(layer, lt, g, want_input)
        per_layer.append(grads)
        g = g_next
    per_layer.reverse()
    flat = [grad for grads in per_layer for grad in grads]
    return flat, g
