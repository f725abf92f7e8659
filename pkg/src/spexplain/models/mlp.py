"""Multilayer perceptron regressor trained by backpropagation.

Plain numpy implementation: forward pass stores per-layer activations, the
backward pass propagates output errors layer by layer and accumulates weight
gradients, and one of three first-order optimizers applies the update. The
loss is mean squared error plus an optional L2 weight penalty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._util import readonly_array as _readonly

HIDDEN_ACTIVATIONS = ("relu", "sigmoid")
OUTPUT_ACTIVATIONS = ("linear", "sigmoid")
OPTIMIZERS = ("adam", "sgd", "rmsprop")
WEIGHT_INITS = ("normal", "uniform-fan-scaled")

MAX_HIDDEN_WIDTH = 8000
MIN_RANDOM_WIDTH = 32
ARCH_PATTERNS = ("up", "down", "up-down", "down-up", "random")


class TrainingDivergedError(RuntimeError):
    """Raised when the training loss becomes non-finite."""


@dataclass(frozen=True)
class MlpArchitecture:
    """Layer widths from input to the single output, plus activation choices."""

    layer_sizes: tuple
    hidden_activation: str = "relu"
    output_activation: str = "linear"

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise ValueError("layer_sizes needs at least (input, output) positive widths")
        if sizes[-1] != 1:
            raise ValueError("the output layer must have exactly one node")
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ValueError(f"hidden_activation must be one of {HIDDEN_ACTIVATIONS}")
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ValueError(f"output_activation must be one of {OUTPUT_ACTIVATIONS}")
        object.__setattr__(self, "layer_sizes", sizes)


@dataclass(frozen=True)
class MlpHyperparams:
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 200
    l2_penalty: float = 0.0
    weight_init: str = "uniform-fan-scaled"
    init_seed: int = 0
    shuffle_seed: int | None = None  # defaults to init_seed + 1

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.weight_init not in WEIGHT_INITS:
            raise ValueError(f"weight_init must be one of {WEIGHT_INITS}")
        if self.l2_penalty < 0:
            raise ValueError("l2_penalty must be non-negative")


def _activate(kind: str, z: np.ndarray) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    return z


def _activation_grad(kind: str, activated: np.ndarray) -> np.ndarray:
    """Derivative expressed through the activated value."""
    if kind == "relu":
        return (activated > 0).astype(float)
    if kind == "sigmoid":
        return activated * (1.0 - activated)
    return np.ones_like(activated)


def init_parameters(arch: MlpArchitecture, weight_init: str, seed: int):
    """Seeded weight matrices and zero biases, one pair per layer transition."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(arch.layer_sizes, arch.layer_sizes[1:]):
        if weight_init == "normal":
            w = rng.normal(0.0, 0.05, size=(fan_in, fan_out))
        else:
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward_pass(arch: MlpArchitecture, weights, biases, X: np.ndarray) -> list:
    """Activations per layer, input first, prediction last (N x width each)."""
    acts = [X]
    last = len(weights) - 1
    for layer, (w, b) in enumerate(zip(weights, biases)):
        z = acts[-1] @ w + b
        kind = arch.output_activation if layer == last else arch.hidden_activation
        acts.append(_activate(kind, z))
    return acts


def loss_and_gradients(arch: MlpArchitecture, weights, biases, X, y, l2_penalty: float = 0.0):
    """MSE (+ L2 on weights) with its analytic gradients.

    Returns (loss, weight_grads, bias_grads). The backward pass mirrors the
    forward one: the output error is scaled by the output activation slope,
    then each hidden error is the next layer's error pulled back through its
    weights and gated by the local activation slope.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1, 1)
    n = X.shape[0]
    acts = forward_pass(arch, weights, biases, X)
    pred = acts[-1]
    residual = pred - y
    loss = float(np.mean(residual**2))
    if l2_penalty:
        loss += l2_penalty * sum(float(np.sum(w**2)) for w in weights)

    delta = (2.0 / n) * residual * _activation_grad(arch.output_activation, pred)
    w_grads = [None] * len(weights)
    b_grads = [None] * len(biases)
    for layer in range(len(weights) - 1, -1, -1):
        w_grads[layer] = acts[layer].T @ delta
        if l2_penalty:
            w_grads[layer] = w_grads[layer] + 2.0 * l2_penalty * weights[layer]
        b_grads[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weights[layer].T) * _activation_grad(
                arch.hidden_activation, acts[layer]
            )
    return loss, w_grads, b_grads


class _Optimizer:
    def __init__(self, kind: str, learning_rate: float, shapes):
        self.kind = kind
        self.lr = learning_rate
        self.t = 0
        if kind in ("adam", "rmsprop"):
            self.v = [np.zeros(s) for s in shapes]
        if kind == "adam":
            self.m = [np.zeros(s) for s in shapes]

    def step(self, params, grads):
        self.t += 1
        if self.kind == "sgd":
            for p, g in zip(params, grads):
                p -= self.lr * g
            return
        if self.kind == "rmsprop":
            rho, eps = 0.9, 1e-8
            for p, g, v in zip(params, grads, self.v):
                v *= rho
                v += (1 - rho) * g * g
                p -= self.lr * g / (np.sqrt(v) + eps)
            return
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        correction = np.sqrt(1 - beta2**self.t) / (1 - beta1**self.t)
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= beta1
            m += (1 - beta1) * g
            v *= beta2
            v += (1 - beta2) * g * g
            p -= self.lr * correction * m / (np.sqrt(v) + eps)


@dataclass(frozen=True)
class MlpModel:
    """Immutable fitted network; the forward pass is deterministic and reentrant."""

    arch: MlpArchitecture
    weights: tuple
    biases: tuple
    loss_curve: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(_readonly(w) for w in self.weights))
        object.__setattr__(self, "biases", tuple(_readonly(b) for b in self.biases))
        object.__setattr__(self, "loss_curve", _readonly(self.loss_curve, dtype=float))

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.arch.layer_sizes[0]:
            raise ValueError(
                f"expected {self.arch.layer_sizes[0]} features, got {X.shape[1]}"
            )
        return forward_pass(self.arch, self.weights, self.biases, X)[-1].ravel()

    @property
    def complexity(self) -> int:
        """Trainable parameter count."""
        return int(sum(w.size for w in self.weights) + sum(b.size for b in self.biases))


def mlp_fit(X, y, arch: MlpArchitecture, h: MlpHyperparams) -> MlpModel:
    """Train with seeded mini-batch passes; records the full-data loss per epoch.

    Deterministic given (h.init_seed, h.shuffle_seed). Raises
    TrainingDivergedError if the loss leaves the finite range.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.size:
        raise ValueError("X and y row counts differ")
    if X.shape[1] != arch.layer_sizes[0]:
        raise ValueError(
            f"architecture expects {arch.layer_sizes[0]} input features, data has {X.shape[1]}"
        )

    weights, biases = init_parameters(arch, h.weight_init, h.init_seed)
    shapes = [w.shape for w in weights] + [b.shape for b in biases]
    opt = _Optimizer(h.optimizer, h.learning_rate, shapes)
    order_rng = np.random.default_rng(
        h.init_seed + 1 if h.shuffle_seed is None else h.shuffle_seed
    )

    n = X.shape[0]
    losses = np.empty(h.epochs)
    # divergence is detected by the explicit finiteness check, not by numpy noise
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(h.epochs):
            order = order_rng.permutation(n)
            for start in range(0, n, h.batch_size):
                batch = order[start : start + h.batch_size]
                _, w_grads, b_grads = loss_and_gradients(
                    arch, weights, biases, X[batch], y[batch], h.l2_penalty
                )
                opt.step(weights + biases, w_grads + b_grads)
            loss, _, _ = loss_and_gradients(arch, weights, biases, X, y, h.l2_penalty)
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"loss became non-finite at epoch {epoch + 1}; lower the learning rate"
                )
            losses[epoch] = loss
    return MlpModel(arch=arch, weights=tuple(weights), biases=tuple(biases), loss_curve=losses)


def gen_architecture(
    pattern: str,
    depth: int,
    base_width: int,
    max_width: int = MAX_HIDDEN_WIDTH,
    seed: int = 0,
) -> tuple:
    """Hidden-layer widths following a doubling/halving pattern.

    ``up`` doubles the width per layer and ``down`` halves it, both capped at
    ``max_width`` (floored at 1). ``up-down``/``down-up`` pick the turning
    point from the seed, so asymmetric shapes occur. ``random`` draws each
    width uniformly from [32, max_width].
    """
    if pattern not in ARCH_PATTERNS:
        raise ValueError(f"pattern must be one of {ARCH_PATTERNS}")
    if depth < 1 or base_width < 1:
        raise ValueError("depth and base_width must be >= 1")
    rng = np.random.default_rng(seed)

    def clamp(w: float) -> int:
        return int(min(max(w, 1), max_width))

    if pattern == "random":
        lo = min(MIN_RANDOM_WIDTH, max_width)
        return tuple(int(v) for v in rng.integers(lo, max_width + 1, size=depth))
    if pattern == "up":
        return tuple(clamp(base_width * 2**i) for i in range(depth))
    if pattern == "down":
        return tuple(clamp(base_width / 2**i) for i in range(depth))

    turn = int(rng.integers(0, depth))
    if pattern == "up-down":
        widths = [base_width * 2**i for i in range(turn + 1)]
        widths += [widths[turn] / 2 ** (i - turn) for i in range(turn + 1, depth)]
    else:
        widths = [base_width / 2**i for i in range(turn + 1)]
        widths += [widths[turn] * 2 ** (i - turn) for i in range(turn + 1, depth)]
    return tuple(clamp(w) for w in widths)
