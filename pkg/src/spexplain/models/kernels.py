"""Kernel functions shared by the support vector machinery."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KERNEL_KINDS = ("linear", "poly", "rbf", "sigmoid")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its shape parameters.

    linear:  <x, z>
    poly:    (gamma <x, z> + coef0) ** degree
    rbf:     exp(-gamma ||x - z||^2)
    sigmoid: tanh(gamma <x, z> + coef0)
    """

    kind: str = "linear"
    gamma: float = 1.0
    coef0: float = 0.0
    degree: int = 3

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.kind != "linear" and not self.gamma > 0:
            raise ValueError(f"gamma must be positive for the {self.kind} kernel")


def kernel_matrix(spec: KernelSpec, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Pairwise kernel values between the rows of X and the rows of Z."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if X.shape[1] != Z.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Z.shape[1]}")
    if spec.kind == "rbf":
        sq = (
            np.sum(X * X, axis=1)[:, None]
            + np.sum(Z * Z, axis=1)[None, :]
            - 2.0 * X @ Z.T
        )
        return np.exp(-spec.gamma * np.clip(sq, 0.0, None))
    inner = X @ Z.T
    if spec.kind == "linear":
        return inner
    if spec.kind == "poly":
        return (spec.gamma * inner + spec.coef0) ** spec.degree
    return np.tanh(spec.gamma * inner + spec.coef0)


def kernel_eval(spec: KernelSpec, x, z) -> float:
    """Kernel value for a single pair of equal-length vectors."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape or x.ndim != 1:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    return float(kernel_matrix(spec, x[None, :], z[None, :])[0, 0])
