"""Model-agnostic attribution: Shapley values, local linear surrogates (LIME),
and a global linear surrogate.

All explainers treat the model as an opaque prediction function f(X) -> y.
"Feature absent" means replaced by a background row's value (interventional
masking); exact Shapley enumerates every coalition against the full
background, while sampled Shapley walks seeded random permutations, pairing
each with one background draw.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._util import readonly_array as _readonly
from .selectors import FeatureRanking
from .spectra.dataset import StandardizationParams, standardize_apply, standardize_fit

EXACT_ADDITIVITY_TOL = 1e-6
_EVAL_CHUNK = 512


@dataclass(frozen=True)
class Attribution:
    """Per-feature contribution values for one explained instance.

    ``base_value`` is the expected model output over the background set for
    Shapley, and the local intercept for LIME. For exact Shapley the values
    sum to model_output - base_value.
    """

    instance_id: object
    values: np.ndarray
    base_value: float
    model_output: float
    local_fit_r2: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values, dtype=float))


@dataclass(frozen=True)
class ShapConfig:
    background: np.ndarray
    mode: str = "sampled"
    n_permutations: int = 200
    exact_limit: int = 12
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError("mode must be 'exact' or 'sampled'")
        if self.n_permutations < 1:
            raise ValueError("n_permutations must be >= 1")
        bg = np.atleast_2d(np.asarray(self.background, dtype=float))
        if bg.shape[0] == 0:
            raise ValueError("background must be nonempty")
        object.__setattr__(self, "background", _readonly(bg))


def stratified_background(X, f, n: int, seed: int, n_strata: int = 10) -> np.ndarray:
    """Pick n row indices spread across quantile strata of the model output.

    Rows are allocated to strata proportionally (largest remainder) and
    sampled without replacement within each stratum. A constant prediction
    collapses to one stratum, i.e. a plain random sample.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n_rows = X.shape[0]
    if not 1 <= n <= n_rows:
        raise ValueError(f"n must be in [1, {n_rows}]")
    preds = np.asarray(f(X), dtype=float).ravel()
    edges = np.unique(np.quantile(preds, np.linspace(0, 1, n_strata + 1)[1:-1]))
    strata = np.searchsorted(edges, preds, side="right")

    labels, counts = np.unique(strata, return_counts=True)
    quotas = n * counts / n_rows
    alloc = np.floor(quotas).astype(int)
    remainder = n - alloc.sum()
    if remainder > 0:
        # largest fractional parts first; ties to the lower stratum
        frac_order = np.lexsort((np.arange(labels.size), -(quotas - alloc)))
        for pos in frac_order[:remainder]:
            alloc[pos] += 1

    rng = np.random.default_rng(seed)
    picked = []
    for label, take in zip(labels, alloc):
        members = np.nonzero(strata == label)[0]
        if take > 0:
            picked.append(rng.choice(members, size=min(take, members.size), replace=False))
    idx = np.sort(np.concatenate(picked))
    return idx


def _masked_values(f, x, background, masks) -> np.ndarray:
    """Mean prediction over the background for each inclusion mask."""
    n_bg = background.shape[0]
    out = np.empty(masks.shape[0])
    for start in range(0, masks.shape[0], _EVAL_CHUNK):
        chunk = masks[start : start + _EVAL_CHUNK]
        # (n_masks, n_bg, M): features inside the mask come from x
        composite = np.where(chunk[:, None, :], x[None, None, :], background[None, :, :])
        preds = np.asarray(f(composite.reshape(-1, x.size)), dtype=float)
        out[start : start + _EVAL_CHUNK] = preds.reshape(len(chunk), n_bg).mean(axis=1)
    return out


def _exact_shapley(f, x, cfg: ShapConfig) -> np.ndarray:
    m = x.size
    all_masks = np.arange(2**m, dtype=np.int64)
    bits = ((all_masks[:, None] >> np.arange(m)) & 1).astype(bool)
    g = _masked_values(f, x, cfg.background, bits)
    popcount = bits.sum(axis=1)
    size_weight = np.asarray(
        [math.factorial(s) * math.factorial(m - s - 1) / math.factorial(m) for s in range(m)]
    )
    values = np.empty(m)
    for j in range(m):
        without = np.nonzero(~bits[:, j])[0]
        values[j] = np.sum(size_weight[popcount[without]] * (g[without | (1 << j)] - g[without]))
    return values


def _sampled_shapley(f, x, cfg: ShapConfig) -> np.ndarray:
    m = x.size
    rng = np.random.default_rng(cfg.seed)
    bg = cfg.background
    steps = np.arange(m + 1)[:, None]
    values = np.zeros(m)
    for _ in range(cfg.n_permutations):
        b = bg[rng.integers(bg.shape[0])]
        perm = rng.permutation(m)
        position = np.empty(m, dtype=int)
        position[perm] = np.arange(m)
        # row t has the first t features of the permutation taken from x
        composites = np.where(position[None, :] < steps, x[None, :], b[None, :])
        preds = np.asarray(f(composites), dtype=float).ravel()
        values[perm] += np.diff(preds)
    return values / cfg.n_permutations


def shapley_local(f, x, cfg: ShapConfig, instance_id=None) -> Attribution:
    """Shapley attribution of f(x) against the background expectation.

    Exact mode enumerates all coalitions (feature count capped by
    ``exact_limit``); sampled mode averages marginal contributions along
    seeded random permutations, drawing one background row per permutation.
    """
    x = np.asarray(x, dtype=float).ravel()
    if cfg.background.shape[1] != x.size:
        raise ValueError("background and instance dimensions differ")
    if cfg.mode == "exact":
        if x.size > cfg.exact_limit:
            raise ValueError(
                f"exact mode enumerates 2^M coalitions; M={x.size} exceeds exact_limit={cfg.exact_limit}"
            )
        values = _exact_shapley(f, x, cfg)
    else:
        values = _sampled_shapley(f, x, cfg)
    base = float(np.mean(np.asarray(f(cfg.background), dtype=float)))
    output = float(np.asarray(f(x[None, :]), dtype=float).ravel()[0])
    return Attribution(instance_id=instance_id, values=values, base_value=base, model_output=output)


def shap_rank(f, X_explain, cfg: ShapConfig) -> FeatureRanking:
    """Global importance: mean absolute Shapley value across explained rows.

    Each row gets an independent seed derived from (cfg.seed, row index), so
    per-instance work can run in any order or in parallel.
    """
    X_explain = np.atleast_2d(np.asarray(X_explain, dtype=float))
    if X_explain.shape[0] == 0:
        raise ValueError("X_explain must be nonempty")
    totals = np.zeros(X_explain.shape[1])
    for i, row in enumerate(X_explain):
        row_cfg = ShapConfig(
            background=cfg.background,
            mode=cfg.mode,
            n_permutations=cfg.n_permutations,
            exact_limit=cfg.exact_limit,
            seed=_derive_seed(cfg.seed, i),
        )
        totals += np.abs(shapley_local(f, row, row_cfg, instance_id=i).values)
    return FeatureRanking.from_scores(totals / X_explain.shape[0], method="shap")


def _derive_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


# --- LIME --------------------------------------------------------------------

@dataclass(frozen=True)
class LimeConfig:
    train_stats: StandardizationParams
    n_perturbations: int = 1000
    kernel_width: float | None = None  # default 0.75 * sqrt(M)
    ridge_penalty: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.n_perturbations < 1:
            raise ValueError("n_perturbations must be >= 1")
        if self.ridge_penalty < 0:
            raise ValueError("ridge_penalty must be non-negative")
        if self.kernel_width is not None and not self.kernel_width > 0:
            raise ValueError("kernel_width must be positive")

    def width_for(self, m: int) -> float:
        return self.kernel_width if self.kernel_width is not None else 0.75 * math.sqrt(m)


def _weighted_ridge(Z, y, weights, penalty):
    """Weighted ridge with an unpenalized intercept; picks the cheaper of the
    primal and dual normal equations."""
    w_sum = weights.sum()
    z_mean = weights @ Z / w_sum
    y_mean = float(weights @ y / w_sum)
    Zc = (Z - z_mean) * np.sqrt(weights)[:, None]
    yc = (y - y_mean) * np.sqrt(weights)
    n, m = Zc.shape
    if m <= n:
        coef = np.linalg.solve(Zc.T @ Zc + penalty * np.eye(m), Zc.T @ yc)
    else:
        coef = Zc.T @ np.linalg.solve(Zc @ Zc.T + penalty * np.eye(n), yc)
    intercept = y_mean - float(z_mean @ coef)
    fitted = Z @ coef + intercept
    ss_res = float(weights @ (y - fitted) ** 2)
    ss_tot = float(weights @ (y - y_mean) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return coef, intercept, r2


def lime_local(f, x, cfg: LimeConfig, instance_id=None) -> Attribution:
    """Local linear surrogate around one instance.

    Perturbations are drawn in standardized coordinates (unit normal around
    the standardized instance), mapped back to raw scale for the black-box
    call, and weighted by an RBF proximity kernel on standardized distance.
    The attribution values are the local model's standardized-space
    coefficients; base_value is its intercept and local_fit_r2 its weighted
    fit quality.
    """
    x = np.asarray(x, dtype=float).ravel()
    m = x.size
    if cfg.train_stats.means.size != m:
        raise ValueError("train_stats dimension does not match the instance")
    if cfg.n_perturbations < m:
        warnings.warn(
            f"n_perturbations={cfg.n_perturbations} is below the feature count {m}; "
            "local coefficients will be strongly regularized"
        )
    rng = np.random.default_rng(cfg.seed)
    x_std = (x - cfg.train_stats.means) / cfg.train_stats.stds
    offsets = rng.standard_normal((cfg.n_perturbations, m))
    z_std = x_std + offsets
    preds = np.asarray(f(standardize_invert_rows(cfg.train_stats, z_std)), dtype=float).ravel()

    width = cfg.width_for(m)
    sq_dist = np.sum(offsets**2, axis=1)
    weights = np.exp(-sq_dist / width**2)
    while weights.max() < 1e-12:
        width *= 2.0
        warnings.warn(f"proximity weights degenerate; widening the kernel to {width:.3g}")
        weights = np.exp(-sq_dist / width**2)

    coef, intercept, r2 = _weighted_ridge(z_std, preds, weights, cfg.ridge_penalty)
    output = float(np.asarray(f(x[None, :]), dtype=float).ravel()[0])
    return Attribution(
        instance_id=instance_id,
        values=coef,
        base_value=intercept,
        model_output=output,
        local_fit_r2=r2,
    )


def standardize_invert_rows(params: StandardizationParams, Z: np.ndarray) -> np.ndarray:
    return Z * params.stds + params.means


def lime_rank(f, X_explain, cfg: LimeConfig, per_instance_k: int = 50) -> FeatureRanking:
    """Global ranking by how often a feature makes an instance's local top-k.

    Scores are selection frequencies; ties break on mean absolute local
    coefficient, then on feature index. Per-instance seeds derive from
    (cfg.seed, row index).
    """
    if per_instance_k < 1:
        raise ValueError("per_instance_k must be >= 1")
    X_explain = np.atleast_2d(np.asarray(X_explain, dtype=float))
    n, m = X_explain.shape
    if n == 0:
        raise ValueError("X_explain must be nonempty")
    k = min(per_instance_k, m)
    hits = np.zeros(m)
    coef_mass = np.zeros(m)
    for i, row in enumerate(X_explain):
        row_cfg = LimeConfig(
            train_stats=cfg.train_stats,
            n_perturbations=cfg.n_perturbations,
            kernel_width=cfg.kernel_width,
            ridge_penalty=cfg.ridge_penalty,
            seed=_derive_seed(cfg.seed, i),
        )
        att = lime_local(f, row, row_cfg, instance_id=i)
        magnitude = np.abs(att.values)
        top = np.lexsort((np.arange(m), -magnitude))[:k]
        hits[top] += 1.0
        coef_mass += magnitude
    return FeatureRanking.from_scores(hits / n, method="lime", tiebreak=coef_mass / n)


# --- global surrogate ----------------------------------------------------------

@dataclass(frozen=True)
class SurrogateModel:
    """Linear stand-in fitted to black-box predictions on standardized data.

    ``fidelity`` is the R^2 between surrogate and black-box outputs on the
    fitting data; report it alongside any ranking derived from the weights.
    """

    weights: np.ndarray
    intercept: float
    fidelity: float
    params: StandardizationParams

    def __post_init__(self):
        object.__setattr__(self, "weights", _readonly(self.weights, dtype=float))

    def predict(self, X) -> np.ndarray:
        return standardize_apply(self.params, X) @ self.weights + self.intercept


def surrogate_fit(f, X, ridge_penalty: float = 1e-8) -> SurrogateModel:
    """Fit the global surrogate to f(X) with a ridge-stabilized linear model."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("X must be nonempty")
    params = standardize_fit(X)
    Xs = standardize_apply(params, X)
    target = np.asarray(f(X), dtype=float).ravel()
    ones = np.ones(X.shape[0])
    coef, intercept, r2 = _weighted_ridge(Xs, target, ones, ridge_penalty)
    return SurrogateModel(weights=coef, intercept=intercept, fidelity=r2, params=params)


def surrogate_rank(model: SurrogateModel) -> FeatureRanking:
    return FeatureRanking.from_scores(np.abs(model.weights), method="gs")
