"""Epsilon-insensitive support vector regression solved in the dual.

The tube formulation penalizes only residuals larger than epsilon; the dual
over the paired box-constrained coefficients is solved by sequential minimal
optimization (SMO): repeatedly pick the maximal-violating pair of dual
variables and solve the two-variable subproblem in closed form. Rows whose
dual coefficient survives with magnitude above SUPPORT_EPS are the support
vectors; their count is the model's complexity measure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .._util import readonly_array as _readonly
from ..spectra.dataset import StandardizationParams, standardize_apply, standardize_fit
from .kernels import KernelSpec, kernel_matrix

SUPPORT_EPS = 1e-9
# Guard for non-positive curvature of a two-variable subproblem (indefinite
# kernels such as sigmoid); mirrors the usual SMO practice.
TAU = 1e-12


@dataclass(frozen=True)
class SvrHyperparams:
    kernel: KernelSpec
    c: float = 1.0
    epsilon: float = 0.1
    max_iter: int = 100_000
    tol: float = 1e-3
    standardize_inputs: bool = False

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SmoSolution:
    """Raw dual solution over a precomputed kernel matrix."""

    beta: np.ndarray
    bias: float
    dual_objective: float
    kkt_violation: float
    n_iter: int
    converged: bool
    objective_curve: np.ndarray | None = None


def solve_epsilon_svr(
    K: np.ndarray,
    y: np.ndarray,
    c: float,
    epsilon: float,
    tol: float = 1e-3,
    max_iter: int = 100_000,
    record_objective: bool = False,
) -> SmoSolution:
    """SMO on the epsilon-SVR dual for a precomputed kernel matrix.

    Internally the 2N paired variables (one pair per training row, one side
    per residual sign) carry signs (+1, -1). The first working index is the
    maximal violator; its partner is chosen second-order, maximizing the
    guaranteed objective decrease of the pair update. Every update preserves
    the equality constraint (signed sum zero) exactly. Returns the signed
    dual coefficients beta = (positive side - negative side) per row.

    ``dual_objective`` is the minimization-form value; ``objective_curve``
    (when recorded) holds the negated value per iteration, which is
    non-decreasing for positive semidefinite kernels.
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.size
    if K.shape != (n, n):
        raise ValueError("kernel matrix must be N x N for N targets")

    signs = np.concatenate([np.ones(n), -np.ones(n)])
    lin = np.concatenate([epsilon - y, epsilon + y])
    # doubled kernel blocks: plain values for curvatures, signed for gradients
    k_big = np.tile(K, (2, 2))
    q_big = np.outer(signs, signs) * k_big
    k_diag = np.diag(k_big)
    a = np.zeros(2 * n)
    grad = lin.copy()
    curve: list[float] | None = [] if record_objective else None

    def objective() -> float:
        return 0.5 * float(a @ (grad + lin))

    n_iter = 0
    converged = False
    violation = np.inf
    for n_iter in range(1, max_iter + 1):
        val = -signs * grad
        up = ((signs > 0) & (a < c)) | ((signs < 0) & (a > 0))
        down = ((signs > 0) & (a > 0)) | ((signs < 0) & (a < c))
        val_up = np.where(up, val, -np.inf)
        val_down = np.where(down, val, np.inf)
        i = int(np.argmax(val_up))
        violation = float(val_up[i] - val_down.min())
        if not np.isfinite(violation) or violation < tol:
            converged = True
            n_iter -= 1
            break

        # second-order partner choice: maximize the guaranteed objective
        # decrease b^2 / a among down-candidates the pair can improve
        gap = val_up[i] - val_down
        eligible = down & (gap > 0)
        curvature = np.maximum(k_diag[i] + k_diag - 2.0 * k_big[:, i], TAU)
        score = np.where(eligible, gap * gap / curvature, -np.inf)
        j = int(np.argmax(score))

        qi, qj = q_big[:, i], q_big[:, j]
        ai_old, aj_old = a[i], a[j]
        if signs[i] != signs[j]:
            quad = qi[i] + qj[j] + 2.0 * qi[j]
            quad = quad if quad > TAU else TAU
            delta = (-grad[i] - grad[j]) / quad
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0 and aj < 0:
                aj, ai = 0.0, diff
            elif diff <= 0 and ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > c:
                    ai, aj = c, c - diff
            else:
                if aj > c:
                    aj, ai = c, c + diff
        else:
            quad = qi[i] + qj[j] - 2.0 * qi[j]
            quad = quad if quad > TAU else TAU
            delta = (grad[i] - grad[j]) / quad
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > c:
                if ai > c:
                    ai, aj = c, total - c
                if aj > c:
                    aj, ai = c, total - c
            else:
                if aj < 0:
                    aj, ai = 0.0, total
                if ai < 0:
                    ai, aj = 0.0, total

        a[i], a[j] = ai, aj
        grad += (ai - ai_old) * qi + (aj - aj_old) * qj
        if curve is not None:
            curve.append(-objective())
    else:
        warnings.warn(
            f"SMO stopped at the iteration cap ({max_iter}) with KKT violation {violation:.3g}"
        )

    free = (a > SUPPORT_EPS) & (a < c - SUPPORT_EPS)
    val = -signs * grad
    if np.any(free):
        bias = float(val[free].mean())
    else:
        up = ((signs > 0) & (a < c)) | ((signs < 0) & (a > 0))
        down = ((signs > 0) & (a > 0)) | ((signs < 0) & (a < c))
        hi = val[up].max() if np.any(up) else 0.0
        lo = val[down].min() if np.any(down) else 0.0
        bias = float((hi + lo) / 2.0)

    return SmoSolution(
        beta=a[:n] - a[n:],
        bias=bias,
        dual_objective=objective(),
        kkt_violation=violation,
        n_iter=n_iter,
        converged=converged,
        objective_curve=None if curve is None else np.asarray(curve),
    )


@dataclass(frozen=True)
class SvrModel:
    """Fitted predictor: f(x) = sum_i dual_coefs[i] K(sv_i, x) + bias."""

    kernel: KernelSpec
    support_indices: np.ndarray
    dual_coefs: np.ndarray
    bias: float
    training_rows: np.ndarray
    dual_objective: float
    kkt_violation: float
    n_iter: int
    converged: bool
    input_params: StandardizationParams | None = None
    objective_curve: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "support_indices", _readonly(self.support_indices, dtype=int))
        object.__setattr__(self, "dual_coefs", _readonly(self.dual_coefs, dtype=float))
        object.__setattr__(self, "training_rows", _readonly(self.training_rows, dtype=float))

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.input_params is not None:
            X = standardize_apply(self.input_params, X)
        if self.dual_coefs.size == 0:
            return np.full(X.shape[0], self.bias)
        return kernel_matrix(self.kernel, X, self.training_rows) @ self.dual_coefs + self.bias

    @property
    def complexity(self) -> int:
        return int(self.support_indices.size)


def svr_fit(X, y, h: SvrHyperparams, record_objective: bool = False) -> SvrModel:
    """Fit an epsilon-SVR on raw inputs (optionally standardized per ``h``).

    Hitting the iteration cap is reported through ``converged=False`` plus a
    warning, not an error; the partial solution is still usable.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise ValueError("X must be N x M and y length N")
    if X.shape[0] < 2:
        raise ValueError("need at least two training rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("inputs contain non-finite values")

    params = None
    X_fit = X
    if h.standardize_inputs:
        params = standardize_fit(X)
        X_fit = standardize_apply(params, X)

    K = kernel_matrix(h.kernel, X_fit, X_fit)
    sol = solve_epsilon_svr(
        K,
        y,
        c=h.c,
        epsilon=h.epsilon,
        tol=h.tol,
        max_iter=h.max_iter,
        record_objective=record_objective,
    )
    support = np.nonzero(np.abs(sol.beta) > SUPPORT_EPS)[0]
    return SvrModel(
        kernel=h.kernel,
        support_indices=support,
        dual_coefs=sol.beta[support],
        bias=sol.bias,
        training_rows=X_fit[support],
        dual_objective=sol.dual_objective,
        kkt_violation=sol.kkt_violation,
        n_iter=sol.n_iter,
        converged=sol.converged,
        input_params=params,
        objective_curve=sol.objective_curve,
    )


def model_complexity(model: SvrModel) -> int:
    """Support-vector count: dual coefficients with magnitude above SUPPORT_EPS."""
    return int(np.count_nonzero(np.abs(model.dual_coefs) > SUPPORT_EPS))
