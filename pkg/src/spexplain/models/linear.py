"""Ordinary and ridge-penalized linear regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._util import readonly_array as _readonly


@dataclass(frozen=True)
class LinearModel:
    """Linear predictor: y = X @ weights + intercept."""

    weights: np.ndarray
    intercept: float

    def __post_init__(self):
        object.__setattr__(self, "weights", _readonly(np.asarray(self.weights, dtype=float)))

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.weights + self.intercept

    @property
    def complexity(self) -> int:
        return self.weights.size + 1


def ridge_fit(X, y, alpha: float, fit_intercept: bool = True) -> LinearModel:
    """Minimize ||y - Xw - b||^2 + alpha ||w||^2 (the intercept is unpenalized).

    alpha = 0 falls back to a rank-tolerant least-squares solve, which yields
    the minimum-norm solution when there are more features than rows. With
    alpha > 0 the solve uses whichever of the primal (M x M) or dual (N x N)
    normal equations is smaller.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise ValueError("X must be N x M and y length N")
    if X.shape[0] < 1:
        raise ValueError("need at least one row")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("inputs contain non-finite values")

    if fit_intercept:
        x_mean = X.mean(axis=0)
        y_mean = float(y.mean())
        Xc = X - x_mean
        yc = y - y_mean
    else:
        x_mean = np.zeros(X.shape[1])
        y_mean = 0.0
        Xc, yc = X, y

    n, m = Xc.shape
    if alpha == 0:
        w, *_ = np.linalg.lstsq(Xc, yc, rcond=None)
    elif m <= n:
        w = np.linalg.solve(Xc.T @ Xc + alpha * np.eye(m), Xc.T @ yc)
    else:
        dual = np.linalg.solve(Xc @ Xc.T + alpha * np.eye(n), yc)
        w = Xc.T @ dual
    intercept = y_mean - float(x_mean @ w) if fit_intercept else 0.0
    return LinearModel(weights=w, intercept=intercept)


def ols_fit(X, y, fit_intercept: bool = True) -> LinearModel:
    """Unpenalized least squares (minimum-norm when underdetermined)."""
    return ridge_fit(X, y, alpha=0.0, fit_intercept=fit_intercept)
