"""Model-based feature ranking and subset extraction.

All selectors standardize their inputs internally (predictors elsewhere
consume raw intensities); a ranking is a non-negative score per feature plus
the induced descending order, and a subset is cut from a ranking either by
count or by cumulative score mass.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import readonly_array as _readonly
from .metrics import mse
from .spectra.dataset import (
    StandardizationParams,
    standardize_apply,
    standardize_fit,
)

ORTHOGONALITY_TOL = 1e-8


# --- rankings ---------------------------------------------------------------

@dataclass(frozen=True)
class FeatureRanking:
    """Non-negative importance per feature and the induced descending order."""

    scores: np.ndarray
    order: np.ndarray
    method: str = ""

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        order = np.asarray(self.order, dtype=int)
        if scores.ndim != 1 or np.any(scores < 0):
            raise ValueError("scores must be a 1-D vector of non-negative values")
        if sorted(order.tolist()) != list(range(scores.size)):
            raise ValueError("order must be a permutation of the feature indices")
        ranked = scores[order]
        if np.any(ranked[:-1] < ranked[1:]):
            raise ValueError("order must sort scores in descending order")
        object.__setattr__(self, "scores", _readonly(scores))
        object.__setattr__(self, "order", _readonly(order))

    @classmethod
    def from_scores(cls, scores, method: str = "", tiebreak=None) -> "FeatureRanking":
        """Rank by descending score; ties fall back to ``tiebreak`` (descending)
        and finally to ascending feature index."""
        scores = np.asarray(scores, dtype=float)
        keys = [np.arange(scores.size)]
        if tiebreak is not None:
            keys.append(-np.asarray(tiebreak, dtype=float))
        keys.append(-scores)
        order = np.lexsort(tuple(keys))
        return cls(scores=scores, order=order, method=method)

    def __len__(self) -> int:
        return self.scores.size


@dataclass(frozen=True)
class FeatureSubset:
    """Selected feature positions with their wavenumbers, best-first."""

    indices: np.ndarray
    wavenumbers: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        w = np.asarray(self.wavenumbers, dtype=float)
        if idx.shape != w.shape or idx.ndim != 1:
            raise ValueError("indices and wavenumbers must be matching 1-D vectors")
        if len(set(idx.tolist())) != idx.size:
            raise ValueError("indices must be unique")
        object.__setattr__(self, "indices", _readonly(idx))
        object.__setattr__(self, "wavenumbers", _readonly(w))

    def __len__(self) -> int:
        return self.indices.size


def select_top(ranking: FeatureRanking, axis, k: int | None = None, fraction: float | None = None) -> FeatureSubset:
    """Cut a subset from a ranking by count (first k) or by cumulative score.

    The fraction rule returns the shortest prefix of the order whose score
    sum reaches ``fraction`` of the total.
    """
    if (k is None) == (fraction is None):
        raise ValueError("pass exactly one of k= or fraction=")
    if k is not None:
        if not 1 <= k <= len(ranking):
            raise ValueError(f"k must be in [1, {len(ranking)}]")
        take = ranking.order[:k]
    else:
        if not 0 < fraction <= 1:
            raise ValueError("fraction must be in (0, 1]")
        ranked = ranking.scores[ranking.order]
        target = fraction * ranked.sum()
        take = ranking.order[: int(np.searchsorted(np.cumsum(ranked), target) + 1)]
    values = np.asarray(axis.values) if hasattr(axis, "values") else np.asarray(axis)
    return FeatureSubset(indices=take, wavenumbers=values[take])


# --- principal components ----------------------------------------------------

@dataclass(frozen=True)
class PcaModel:
    """Top eigenpairs of the covariance of internally standardized data.

    Loadings rows are orthonormal eigenvectors; component variances are their
    eigenvalues in non-increasing order.
    """

    loadings: np.ndarray
    component_variances: np.ndarray
    total_variance: float
    params: StandardizationParams

    def __post_init__(self):
        object.__setattr__(self, "loadings", _readonly(self.loadings, dtype=float))
        object.__setattr__(self, "component_variances", _readonly(self.component_variances, dtype=float))

    @property
    def n_components(self) -> int:
        return self.loadings.shape[0]

    @property
    def explained_variance_ratio(self) -> np.ndarray:
        if self.total_variance == 0:
            return np.zeros(self.n_components)
        return self.component_variances / self.total_variance

    def transform(self, X) -> np.ndarray:
        return standardize_apply(self.params, X) @ self.loadings.T


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orientation: the largest-magnitude entry is positive."""
    out = vectors.copy()
    for row in out:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return out


def pca_fit(X, n_components: int) -> PcaModel:
    """Eigendecomposition of the standardized covariance (divisor N).

    Uses the N x N Gram matrix when features outnumber rows, which is the
    normal regime for spectra.
    """
    X = np.asarray(X, dtype=float)
    n, m = X.shape
    limit = min(n - 1, m)
    if not 1 <= n_components <= limit:
        raise ValueError(f"n_components must be in [1, {limit}] for this data")
    params = standardize_fit(X)
    Xs = standardize_apply(params, X)
    total = float(np.sum(Xs * Xs) / n)

    if m <= n:
        cov = Xs.T @ Xs / n
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:n_components]
        variances = eigvals[order]
        loadings = eigvecs[:, order].T
    else:
        gram = Xs @ Xs.T / n
        eigvals, eigvecs = np.linalg.eigh(gram)
        order = np.argsort(eigvals)[::-1][:n_components]
        variances = eigvals[order]
        scale = np.sqrt(np.clip(variances, 1e-300, None) * n)
        loadings = (Xs.T @ eigvecs[:, order] / scale).T

    variances = np.clip(variances, 0.0, None)
    return PcaModel(
        loadings=_fix_signs(loadings),
        component_variances=variances,
        total_variance=total,
        params=params,
    )


# --- partial least squares ----------------------------------------------------

@dataclass(frozen=True)
class PlsModel:
    """Sequentially deflated latent components coupling the data to the response.

    Weight vectors maximize squared covariance between scores and the
    (deflated) response; scores are mutually uncorrelated by construction.
    ``per_component_ev`` holds each component's increment of training R^2.
    """

    weights: np.ndarray
    x_loadings: np.ndarray
    y_loadings: np.ndarray
    scores: np.ndarray
    per_component_ev: np.ndarray
    rotation: np.ndarray
    params: StandardizationParams
    y_mean: float
    requested_components: int

    def __post_init__(self):
        for name in ("weights", "x_loadings", "y_loadings", "scores", "per_component_ev", "rotation"):
            object.__setattr__(self, name, _readonly(getattr(self, name), dtype=float))

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    @property
    def stopped_early(self) -> bool:
        return self.n_components < self.requested_components

    def transform(self, X) -> np.ndarray:
        return standardize_apply(self.params, X) @ self.rotation

    def predict(self, X) -> np.ndarray:
        return self.transform(X) @ self.y_loadings + self.y_mean


def pls_fit(X, y, n_components: int) -> PlsModel:
    """Deflation-based fit for a single response.

    Each round takes the unit-norm weight vector proportional to the
    covariance between the deflated data and response, scores the data,
    regresses both out, and repeats. Stops early (with a warning) if the
    remaining covariance vanishes.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, m = X.shape
    limit = min(n - 1, m)
    if not 1 <= n_components <= limit:
        raise ValueError(f"n_components must be in [1, {limit}] for this data")

    params = standardize_fit(X)
    y_mean = float(y.mean())
    Xd = standardize_apply(params, X)
    yd = y - y_mean
    tss = float(np.sum(yd * yd))

    weights, x_loadings, y_loadings, score_cols, ev = [], [], [], [], []
    residual = tss
    for _ in range(n_components):
        cov = Xd.T @ yd
        norm = float(np.linalg.norm(cov))
        if norm <= 1e-12 * max(1.0, np.sqrt(tss)):
            warnings.warn(
                f"covariance vanished after {len(weights)} components; stopping early"
            )
            break
        w = cov / norm
        z = Xd @ w
        zz = float(z @ z)
        p = Xd.T @ z / zz
        q = float(yd @ z / zz)
        Xd = Xd - np.outer(z, p)
        yd = yd - q * z
        new_residual = float(np.sum(yd * yd))
        weights.append(w)
        x_loadings.append(p)
        y_loadings.append(q)
        score_cols.append(z)
        ev.append((residual - new_residual) / tss if tss > 0 else 0.0)
        residual = new_residual

    if not weights:
        raise ValueError("no usable components: the response is uncorrelated or constant")

    W = np.asarray(weights)
    P = np.asarray(x_loadings)
    rotation = W.T @ np.linalg.inv(P @ W.T)
    return PlsModel(
        weights=W,
        x_loadings=P,
        y_loadings=np.asarray(y_loadings),
        scores=np.asarray(score_cols).T,
        per_component_ev=np.asarray(ev),
        rotation=rotation,
        params=params,
        y_mean=y_mean,
        requested_components=n_components,
    )


# --- component-count selection -------------------------------------------------

def elbow_index(curve) -> int:
    """Point of maximum discrete curvature of a cumulative curve (1-indexed).

    Curvature at interior point p is the negated second difference
    2*c[p] - c[p-1] - c[p+1]; ties resolve to the smaller count. Curves with
    fewer than three points have no interior elbow and yield 1.
    """
    curve = np.asarray(curve, dtype=float)
    if curve.size < 3:
        return 1
    curvature = 2.0 * curve[1:-1] - curve[:-2] - curve[2:]
    return int(np.argmax(curvature) + 2)


def choose_components(kind: str, X, y, max_p: int, val=None) -> int:
    """Pick the component count.

    PCA: the elbow of the cumulative explained-variance curve. PLS: the count
    whose score regression yields the lowest holdout MSE.
    """
    if max_p < 2:
        raise ValueError("max_p must be >= 2")
    if kind == "pca":
        model = pca_fit(X, max_p)
        return elbow_index(np.cumsum(model.explained_variance_ratio))
    if kind == "pls":
        if val is None:
            raise ValueError("pls selection needs a (X_val, y_val) holdout")
        X_val, y_val = val
        best_p, best_err = 1, np.inf
        for p in range(1, max_p + 1):
            try:
                model = pls_fit(X, y, p)
            except ValueError:
                break
            err = mse(y_val, model.predict(X_val))
            if err < best_err - 1e-12:
                best_p, best_err = p, err
        return best_p
    raise ValueError("kind must be 'pca' or 'pls'")


def component_feature_scores(model) -> FeatureRanking:
    """Collapse per-component vectors into one per-feature score.

    Each component contributes its explained-variance share times the
    absolute entries of its feature-direction vector.
    """
    if isinstance(model, PcaModel):
        ev = model.explained_variance_ratio
        vectors = model.loadings
        method = "pca"
    elif isinstance(model, PlsModel):
        ev = model.per_component_ev
        vectors = model.weights
        method = "pls"
    else:
        raise TypeError("expected a PcaModel or PlsModel")
    scores = ev @ np.abs(vectors)
    return FeatureRanking.from_scores(scores, method=method)


# --- model-derived rankings -----------------------------------------------------

def rf_rank(model) -> FeatureRanking:
    """Per-feature sum of weighted variance reductions, normalized to sum 1."""
    gains = model.feature_gains()
    total = gains.sum()
    if total > 0:
        gains = gains / total
    return FeatureRanking.from_scores(gains, method="rf")


def ridge_rank(model) -> FeatureRanking:
    """Importance by coefficient magnitude (fit the model on standardized data)."""
    return FeatureRanking.from_scores(np.abs(model.weights), method="ridge")


def ridge_rank_fit(X, y, alpha: float = 0.001) -> FeatureRanking:
    """Convenience: standardize, fit a ridge model, and rank its weights."""
    from .models.linear import ridge_fit

    params = standardize_fit(X)
    model = ridge_fit(standardize_apply(params, X), np.asarray(y, dtype=float), alpha=alpha)
    return ridge_rank(model)


# --- file formats -----------------------------------------------------------------

def write_ranking(ranking: FeatureRanking, axis, path) -> None:
    """Two-column text (wavenumber, score), best-ranked first."""
    values = np.asarray(axis.values) if hasattr(axis, "values") else np.asarray(axis)
    lines = [f"# feature ranking: {ranking.method}"]
    for idx in ranking.order:
        lines.append(f"{float(values[idx])!r},{float(ranking.scores[idx])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_subset(subset: FeatureSubset, path, note: str = "") -> None:
    """Sidecar subset format: one wavenumber per line, '#' comments."""
    lines = [f"# selected wavenumbers{': ' + note if note else ''}"]
    lines += [repr(float(w)) for w in subset.wavenumbers]
    Path(path).write_text("\n".join(lines) + "\n")
