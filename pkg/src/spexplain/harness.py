"""Repeated-split scenario evaluation across models and selection methods.

One evaluation run: rank features once per method on the full old-data pool
(for correctness reporting), then for every repeat derive a fresh seed, split
each scenario, compute per-method subsets from the training partition only,
fit every configured model on each subset, and score train/test MSE. The
test partition is touched exclusively by ``predict``.

Per-repeat seeds are pre-assigned, so results are identical no matter how
repeats are scheduled or parallelized.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .explainers import LimeConfig, ShapConfig, lime_rank, shap_rank, stratified_background, surrogate_fit, surrogate_rank
from .metrics import BinScheme, CorrectnessResult, ExpertFeatureSet, bin_set, correctness, default_feature_counts, jaccard, mse
from .models import (
    KernelSpec,
    MlpArchitecture,
    MlpHyperparams,
    RfHyperparams,
    SvrHyperparams,
    mlp_fit,
    ols_fit,
    reference_svr_hyperparams,
    rf_fit,
    ridge_fit,
    svr_fit,
)
from .selectors import (
    FeatureRanking,
    FeatureSubset,
    choose_components,
    component_feature_scores,
    pca_fit,
    pls_fit,
    rf_rank,
    ridge_rank_fit,
    select_top,
)
from .spectra import ScenarioSpec, SpectraDataset, generate_synthetic, load_dataset, make_scenario
from .spectra.synth import SynthConfig

REPORT_FORMAT = "spexplain-report"
REPORT_VERSION = 1

SELECTION_METHODS = ("FullModel", "Expert", "PCA", "PLS", "RF", "Ridge", "SHAP", "GS", "LIME")
MODEL_KINDS = ("ols", "ridge", "svr", "mlp", "rf")
BLACK_BOX_METHODS = ("SHAP", "GS", "LIME")


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 1)."""


class DataError(ValueError):
    """Missing or malformed data (CLI exit code 2)."""


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")


@dataclass(frozen=True)
class SelectionSettings:
    """Budgets and hyperparameters for the per-method ranking computations."""

    pca_max_components: int = 10
    pls_max_components: int = 10
    rf_trees: int = 91
    rf_max_features: float | int = 1.0 / 3.0
    ridge_alpha: float = 0.001
    shap_permutations: int = 8
    shap_instances: int = 16
    shap_background: int = 12
    lime_perturbations: int = 500
    lime_instances: int = 12
    lime_per_instance_k: int = 50

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def default_models() -> tuple:
    """Roster defaults: the tuned SVR, its soft-tube variant, and plain OLS."""
    return (
        ModelSpec(name="svr", kind="svr", params={}),
        ModelSpec(name="svr_soft", kind="svr", params={"epsilon": 0.66}),
        ModelSpec(name="ols", kind="ols", params={}),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    synth: SynthConfig | None = None
    synth_seed: int = 0
    old_path: str | None = None
    new_path: str | None = None
    expert_path: str | None = None
    scenarios: tuple = ("control", "mixed", "realtime")
    models: tuple = field(default_factory=default_models)
    selections: tuple = ("FullModel", "Expert", "RF", "Ridge")
    subset_k: int = 120
    n_repeats: int = 30
    base_seed: int = 0
    bin_width: float | None = None
    correctness_ks: tuple | None = None
    explain_model: str | None = None
    tradeoff_model: str | None = None
    tradeoff_scenario: str | None = None
    selection_settings: SelectionSettings = field(default_factory=SelectionSettings)

    def __post_init__(self):
        if self.synth is None and self.old_path is None:
            raise ConfigError("configure either synthetic data or an old-data file")
        if self.synth is not None and self.old_path is not None:
            raise ConfigError("configure synthetic data or file paths, not both")
        if self.n_repeats < 1:
            raise ConfigError("n_repeats must be >= 1")
        if self.subset_k < 1:
            raise ConfigError("subset_k must be >= 1")
        for s in self.scenarios:
            if s not in ("control", "mixed", "realtime"):
                raise ConfigError(f"unknown scenario {s!r}")
        for method in self.selections:
            if method not in SELECTION_METHODS:
                raise ConfigError(f"unknown selection method {method!r}; expected one of {SELECTION_METHODS}")
        names = [m.name for m in self.models]
        if len(set(names)) != len(names):
            raise ConfigError("model names must be unique")
        if not names:
            raise ConfigError("the model roster is empty")
        if self.explain_model is not None and self.explain_model not in names:
            raise ConfigError(f"explain_model {self.explain_model!r} is not in the roster")
        if self.tradeoff_model is not None and self.tradeoff_model not in names:
            raise ConfigError(f"tradeoff_model {self.tradeoff_model!r} is not in the roster")

    def resolved_explain_model(self) -> "ModelSpec":
        if self.explain_model is not None:
            return next(m for m in self.models if m.name == self.explain_model)
        for m in self.models:
            if m.kind == "svr":
                return m
        return self.models[0]

    def to_dict(self) -> dict:
        return {
            "synth": None if self.synth is None else self.synth.to_dict(),
            "synth_seed": self.synth_seed,
            "old_path": self.old_path,
            "new_path": self.new_path,
            "expert_path": self.expert_path,
            "scenarios": list(self.scenarios),
            "models": [{"name": m.name, "kind": m.kind, "params": dict(m.params)} for m in self.models],
            "selections": list(self.selections),
            "subset_k": self.subset_k,
            "n_repeats": self.n_repeats,
            "base_seed": self.base_seed,
            "bin_width": self.bin_width,
            "correctness_ks": None if self.correctness_ks is None else list(self.correctness_ks),
            "explain_model": self.explain_model,
            "tradeoff_model": self.tradeoff_model,
            "tradeoff_scenario": self.tradeoff_scenario,
            "selection_settings": self.selection_settings.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        kwargs = {}
        try:
            if doc.get("synth") is not None:
                kwargs["synth"] = SynthConfig.from_dict(doc.pop("synth"))
            else:
                doc.pop("synth", None)
            if "models" in doc:
                kwargs["models"] = tuple(
                    ModelSpec(name=m["name"], kind=m["kind"], params=dict(m.get("params", {})))
                    for m in doc.pop("models")
                )
            if "selection_settings" in doc:
                kwargs["selection_settings"] = SelectionSettings(**doc.pop("selection_settings"))
            for key in ("scenarios", "selections", "correctness_ks"):
                if key in doc and doc[key] is not None:
                    kwargs[key] = tuple(doc.pop(key))
                else:
                    doc.pop(key, None)
            allowed = {
                "synth_seed", "old_path", "new_path", "expert_path", "subset_k",
                "n_repeats", "base_seed", "bin_width", "explain_model",
                "tradeoff_model", "tradeoff_scenario",
            }
            unknown = set(doc) - allowed
            if unknown:
                raise ConfigError(f"unknown config fields: {sorted(unknown)}")
            kwargs.update(doc)
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise DataError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


# --- model fitting ------------------------------------------------------------

def fit_named_model(spec: ModelSpec, X: np.ndarray, y: np.ndarray):
    """Instantiate and fit one roster entry on (X, y)."""
    params = dict(spec.params)
    if spec.kind == "ols":
        return ols_fit(X, y)
    if spec.kind == "ridge":
        return ridge_fit(X, y, alpha=params.pop("alpha", 0.001))
    if spec.kind == "svr":
        base = reference_svr_hyperparams()
        kernel = KernelSpec(
            kind=params.pop("kernel", base.kernel.kind),
            gamma=params.pop("gamma", base.kernel.gamma),
            coef0=params.pop("coef0", base.kernel.coef0),
            degree=int(params.pop("degree", base.kernel.degree)),
        )
        h = SvrHyperparams(
            kernel=kernel,
            c=params.pop("c", base.c),
            epsilon=params.pop("epsilon", base.epsilon),
            max_iter=int(params.pop("max_iter", base.max_iter)),
            tol=params.pop("tol", base.tol),
            standardize_inputs=params.pop("standardize_inputs", False),
        )
        _reject_unknown(params, spec)
        return svr_fit(X, y, h)
    if spec.kind == "rf":
        h = RfHyperparams(
            n_trees=int(params.pop("n_trees", 91)),
            max_features=params.pop("max_features", 1.0 / 3.0),
            min_leaf=int(params.pop("min_leaf", 1)),
            bootstrap=params.pop("bootstrap", True),
            seed=int(params.pop("seed", 0)),
        )
        _reject_unknown(params, spec)
        return rf_fit(X, y, h)
    hidden = tuple(params.pop("hidden", (64,)))
    arch = MlpArchitecture(
        layer_sizes=(X.shape[1], *hidden, 1),
        hidden_activation=params.pop("hidden_activation", "relu"),
        output_activation=params.pop("output_activation", "linear"),
    )
    h = MlpHyperparams(
        optimizer=params.pop("optimizer", "adam"),
        learning_rate=params.pop("learning_rate", 0.0011),
        batch_size=int(params.pop("batch_size", 32)),
        epochs=int(params.pop("epochs", 200)),
        l2_penalty=params.pop("l2_penalty", 0.0),
        weight_init=params.pop("weight_init", "uniform-fan-scaled"),
        init_seed=int(params.pop("init_seed", 0)),
    )
    _reject_unknown(params, spec)
    return mlp_fit(X, y, arch, h)


def _reject_unknown(params: dict, spec: ModelSpec) -> None:
    if params:
        raise ConfigError(f"unknown parameters for model {spec.name!r}: {sorted(params)}")


# --- feature selection --------------------------------------------------------

def expert_subset(axis, expert: ExpertFeatureSet) -> FeatureSubset:
    """Nearest axis index for each expert wavenumber (duplicates collapse)."""
    values = np.asarray(axis.values)
    picks = []
    for w in expert.wavenumbers:
        pos = int(np.searchsorted(values, w))
        pos = min(max(pos, 1), values.size - 1)
        picks.append(pos if abs(values[pos] - w) < abs(values[pos - 1] - w) else pos - 1)
    idx = np.unique(picks)
    return FeatureSubset(indices=idx, wavenumbers=values[idx])


def compute_ranking(
    method: str,
    train: SpectraDataset,
    val: SpectraDataset | None,
    cfg: ExperimentConfig,
    seed: int,
) -> FeatureRanking:
    """Rank every feature with one method, using training (and validation) data only."""
    settings = cfg.selection_settings
    X, y = train.intensities, train.response
    n, m = X.shape
    if method == "PCA":
        max_p = max(2, min(settings.pca_max_components, n - 1, m))
        best_p = choose_components("pca", X, y, max_p)
        return component_feature_scores(pca_fit(X, best_p))
    if method == "PLS":
        max_p = max(2, min(settings.pls_max_components, n - 1, m))
        if val is not None and val.n_samples > 0:
            holdout = (val.intensities, val.response)
        else:
            split = max(2, int(0.8 * n))
            holdout = (X[split:], y[split:])
            X, y = X[:split], y[:split]
        best_p = choose_components("pls", X, y, max_p, val=holdout)
        return component_feature_scores(pls_fit(X, y, best_p))
    if method == "RF":
        h = RfHyperparams(
            n_trees=settings.rf_trees, max_features=settings.rf_max_features, seed=seed
        )
        return rf_rank(rf_fit(X, y, h))
    if method == "Ridge":
        return ridge_rank_fit(X, y, alpha=settings.ridge_alpha)
    if method in BLACK_BOX_METHODS:
        model = fit_named_model(cfg.resolved_explain_model(), X, y)
        f = model.predict
        rng = np.random.default_rng(seed)
        if method == "GS":
            return surrogate_rank(surrogate_fit(f, X))
        if method == "SHAP":
            bg_idx = stratified_background(X, f, min(settings.shap_background, n), seed=seed)
            rows = rng.choice(n, size=min(settings.shap_instances, n), replace=False)
            shap_cfg = ShapConfig(
                background=X[bg_idx],
                mode="sampled",
                n_permutations=settings.shap_permutations,
                seed=seed,
            )
            return shap_rank(f, X[rows], shap_cfg)
        from .spectra.dataset import standardize_fit

        rows = rng.choice(n, size=min(settings.lime_instances, n), replace=False)
        lime_cfg = LimeConfig(
            train_stats=standardize_fit(X),
            n_perturbations=settings.lime_perturbations,
            seed=seed,
        )
        return lime_rank(f, X[rows], lime_cfg, per_instance_k=settings.lime_per_instance_k)
    raise ConfigError(f"method {method!r} does not produce a ranking")


def compute_subset(
    method: str,
    train: SpectraDataset,
    val: SpectraDataset | None,
    cfg: ExperimentConfig,
    expert: ExpertFeatureSet,
    seed: int,
) -> FeatureSubset | None:
    """Feature subset for one method; None means the full feature set."""
    if method == "FullModel":
        return None
    if method == "Expert":
        return expert_subset(train.axis, expert)
    ranking = compute_ranking(method, train, val, cfg, seed)
    return select_top(ranking, train.axis, k=min(cfg.subset_k, train.n_features))


# --- evaluation results ---------------------------------------------------------

@dataclass(frozen=True)
class EvalCell:
    scenario: str
    model: str
    method: str
    train_mse_mean: float
    train_mse_sd: float
    test_mse_mean: float
    test_mse_sd: float
    complexity_mean: float
    n_ok: int
    n_failed: int
    status: str
    errors: tuple
    wall_time_total_s: float
    wall_time_per_fit_s: float

    def key(self) -> tuple:
        return (self.scenario, self.model, self.method)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "model": self.model,
            "method": self.method,
            "train_mse_mean": self.train_mse_mean,
            "train_mse_sd": self.train_mse_sd,
            "test_mse_mean": self.test_mse_mean,
            "test_mse_sd": self.test_mse_sd,
            "complexity_mean": self.complexity_mean,
            "n_ok": self.n_ok,
            "n_failed": self.n_failed,
            "status": self.status,
            "errors": list(self.errors),
            "wall_time_total_s": self.wall_time_total_s,
            "wall_time_per_fit_s": self.wall_time_per_fit_s,
        }


@dataclass(frozen=True)
class EvalReport:
    config: dict
    scenario_sizes: dict
    correctness: dict
    cells: tuple
    version: int = REPORT_VERSION

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": self.version,
            "config": self.config,
            "scenario_sizes": self.scenario_sizes,
            "correctness": self.correctness,
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalReport":
        if doc.get("format") != REPORT_FORMAT:
            raise DataError("not an evaluation report document")
        cells = tuple(
            EvalCell(**{**c, "errors": tuple(c.get("errors", ()))}) for c in doc["cells"]
        )
        return cls(
            config=doc["config"],
            scenario_sizes=doc["scenario_sizes"],
            correctness=doc["correctness"],
            cells=cells,
            version=doc["version"],
        )

    def fingerprint(self) -> str:
        """Canonical JSON with the wall-time fields stripped, for determinism checks."""
        doc = self.to_dict()
        for cell in doc["cells"]:
            cell.pop("wall_time_total_s", None)
            cell.pop("wall_time_per_fit_s", None)
        return json.dumps(doc, sort_keys=True)


def _load_data(cfg: ExperimentConfig):
    if cfg.synth is not None:
        result = generate_synthetic(cfg.synth, seed=cfg.synth_seed)
        old, new = result.old, result.new
        if cfg.expert_path is not None:
            expert = ExpertFeatureSet.from_file(cfg.expert_path)
        else:
            expert = ExpertFeatureSet(wavenumbers=result.expert_wavenumbers, source="synthetic ground truth")
    else:
        try:
            old = load_dataset(cfg.old_path)
            new = load_dataset(cfg.new_path) if cfg.new_path else None
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from exc
        if cfg.expert_path is None:
            raise ConfigError("file-based runs need an expert feature file")
        expert = ExpertFeatureSet.from_file(cfg.expert_path)
    expert.validate_for_axis(old.axis)
    return old, new, expert


def _bin_scheme(cfg: ExperimentConfig, axis) -> BinScheme:
    return BinScheme.for_axis(axis, width=cfg.bin_width)


def _correctness_ks(cfg: ExperimentConfig, m: int) -> list[int]:
    if cfg.correctness_ks is not None:
        ks = [k for k in cfg.correctness_ks if k <= m]
    else:
        ks = [k for k in default_feature_counts() if k <= m]
    return ks or [min(cfg.subset_k, m)]


def _pool_correctness(cfg: ExperimentConfig, old: SpectraDataset, expert: ExpertFeatureSet) -> dict:
    """Correctness attachments from rankings over the full old-data pool."""
    scheme = _bin_scheme(cfg, old.axis)
    ks = _correctness_ks(cfg, old.n_features)
    k_point = min(cfg.subset_k, old.n_features)
    out = {}
    for method in cfg.selections:
        if method == "FullModel":
            continue
        if method == "Expert":
            snapped = expert_subset(old.axis, expert)
            value = jaccard(bin_set(snapped.wavenumbers, scheme), bin_set(expert.wavenumbers, scheme))
            out[method] = {
                "k": int(len(snapped)),
                "jaccard": value,
                "percent": 100.0 * value,
                "curve": [],
            }
            continue
        ranking = compute_ranking(method, old, None, cfg, seed=cfg.base_seed)
        point = correctness(ranking, expert, k_point, scheme, old.axis)
        curve = [
            correctness(ranking, expert, k, scheme, old.axis) for k in ks
        ]
        out[method] = {
            "k": point.k,
            "jaccard": point.jaccard,
            "percent": point.percent,
            "curve": [[r.k, r.jaccard] for r in curve],
        }
    return out


def _run_one_repeat(cfg: ExperimentConfig, old, new, expert, repeat: int) -> list[dict]:
    seed = cfg.base_seed + repeat
    records = []
    for scenario in cfg.scenarios:
        spec = ScenarioSpec(kind=scenario, seed=seed)
        train, val, test = make_scenario(old, new, spec)
        for method in cfg.selections:
            try:
                subset = compute_subset(method, train, val, cfg, expert, seed)
            except Exception as exc:  # noqa: BLE001 - recorded per cell
                for model_spec in cfg.models:
                    records.append(
                        {
                            "scenario": scenario,
                            "model": model_spec.name,
                            "method": method,
                            "status": "failed",
                            "error": f"selection: {type(exc).__name__}: {exc}",
                        }
                    )
                continue
            cols = slice(None) if subset is None else subset.indices
            X_train, y_train = train.intensities[:, cols], train.response
            X_test, y_test = test.intensities[:, cols], test.response
            for model_spec in cfg.models:
                record = {
                    "scenario": scenario,
                    "model": model_spec.name,
                    "method": method,
                    "status": "ok",
                    "error": "",
                }
                start = time.perf_counter()
                try:
                    model = fit_named_model(model_spec, X_train, y_train)
                    record["train_mse"] = mse(y_train, model.predict(X_train))
                    record["test_mse"] = mse(y_test, model.predict(X_test))
                    record["complexity"] = float(model.complexity)
                except Exception as exc:  # noqa: BLE001 - recorded per cell
                    record["status"] = "failed"
                    record["error"] = f"{type(exc).__name__}: {exc}"
                record["seconds"] = time.perf_counter() - start
                records.append(record)
    return records


def _aggregate(cfg: ExperimentConfig, records: list[dict]) -> tuple:
    grouped: dict[tuple, list[dict]] = {}
    for rec in records:
        grouped.setdefault((rec["scenario"], rec["model"], rec["method"]), []).append(rec)
    cells = []
    for key in sorted(grouped):
        scenario, model, method = key
        recs = grouped[key]
        ok = [r for r in recs if r["status"] == "ok"]
        failed = [r for r in recs if r["status"] != "ok"]
        train = np.asarray([r["train_mse"] for r in ok])
        test = np.asarray([r["test_mse"] for r in ok])
        complexity = np.asarray([r["complexity"] for r in ok])
        seconds = sum(r.get("seconds", 0.0) for r in recs)
        status = "ok" if not failed else ("failed" if not ok else "partial")
        cells.append(
            EvalCell(
                scenario=scenario,
                model=model,
                method=method,
                train_mse_mean=float(train.mean()) if ok else float("nan"),
                train_mse_sd=float(train.std()) if ok else float("nan"),
                test_mse_mean=float(test.mean()) if ok else float("nan"),
                test_mse_sd=float(test.std()) if ok else float("nan"),
                complexity_mean=float(complexity.mean()) if ok else float("nan"),
                n_ok=len(ok),
                n_failed=len(failed),
                status=status,
                errors=tuple(sorted({r["error"] for r in failed})),
                wall_time_total_s=seconds,
                wall_time_per_fit_s=seconds / len(recs) if recs else 0.0,
            )
        )
    return tuple(cells)


def run_evaluation(cfg: ExperimentConfig, n_workers: int = 1) -> EvalReport:
    """Execute the full protocol and aggregate means and deviations per cell."""
    old, new, expert = _load_data(cfg)

    sizes = {}
    for scenario in cfg.scenarios:
        spec = ScenarioSpec(kind=scenario, seed=cfg.base_seed)
        train, val, test = make_scenario(old, new, spec)
        sizes[scenario] = {"train": train.n_samples, "val": val.n_samples, "test": test.n_samples}

    correctness_attachments = _pool_correctness(cfg, old, expert)

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_repeat = list(
                pool.map(lambda r: _run_one_repeat(cfg, old, new, expert, r), range(cfg.n_repeats))
            )
    else:
        per_repeat = [_run_one_repeat(cfg, old, new, expert, r) for r in range(cfg.n_repeats)]
    records = [rec for batch in per_repeat for rec in batch]

    return EvalReport(
        config=cfg.to_dict(),
        scenario_sizes=sizes,
        correctness=correctness_attachments,
        cells=_aggregate(cfg, records),
    )


# --- report emission ------------------------------------------------------------

def _format_cell_value(v: float) -> str:
    return "" if v != v else repr(v)  # NaN -> empty cell


def emit_report(report: EvalReport, out_dir, formats=("json", "csv")) -> list[Path]:
    """Write the structured report plus flat per-model tables and plot data."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {out_dir}: {exc}") from exc
    written = []

    if "json" in formats:
        path = out_dir / "report.json"
        path.write_text(json.dumps(report.to_dict(), sort_keys=True, indent=1))
        written.append(path)
    if "csv" not in formats:
        return written

    scenarios = list(dict.fromkeys(c.scenario for c in report.cells))
    models = list(dict.fromkeys(c.model for c in report.cells))
    methods = list(dict.fromkeys(c.method for c in report.cells))
    by_key = {c.key(): c for c in report.cells}

    for model in models:
        lines = []
        header = ["method"]
        for scenario in scenarios:
            header += [
                f"{scenario}_train_mu", f"{scenario}_train_sd",
                f"{scenario}_test_mu", f"{scenario}_test_sd",
                f"{scenario}_time_s", f"{scenario}_complexity",
            ]
        lines.append(",".join(header))
        for method in methods:
            row = [method]
            for scenario in scenarios:
                cell = by_key.get((scenario, model, method))
                if cell is None:
                    row += [""] * 6
                else:
                    row += [
                        _format_cell_value(cell.train_mse_mean),
                        _format_cell_value(cell.train_mse_sd),
                        _format_cell_value(cell.test_mse_mean),
                        _format_cell_value(cell.test_mse_sd),
                        repr(cell.wall_time_total_s),
                        _format_cell_value(cell.complexity_mean),
                    ]
            lines.append(",".join(row))
        path = out_dir / f"table_{model}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)

    curve_results = []
    for method, entry in sorted(report.correctness.items()):
        for k, value in entry.get("curve", []):
            curve_results.append(CorrectnessResult(jaccard=value, k=int(k), method=method))
    curve_path = out_dir / "correctness_curve.csv"
    metrics.write_correctness_curve(curve_results, curve_path)
    written.append(curve_path)

    tradeoff_model = report.config.get("tradeoff_model") or (
        next((m["name"] for m in report.config.get("models", []) if m.get("kind") == "svr"), None)
        or (models[0] if models else "")
    )
    scenario_pref = report.config.get("tradeoff_scenario") or (
        "realtime" if "realtime" in scenarios else (scenarios[0] if scenarios else "")
    )
    entries = {}
    for method, entry in report.correctness.items():
        cell = by_key.get((scenario_pref, tradeoff_model, method))
        if cell is not None and cell.n_ok > 0:
            entries[method] = (entry["jaccard"], cell.test_mse_mean, cell.test_mse_sd)
    if entries:
        rows = metrics.tradeoff(entries)
        tradeoff_path = out_dir / "tradeoff.csv"
        metrics.write_tradeoff(rows, tradeoff_path)
        written.append(tradeoff_path)
    return written


def load_report(path) -> EvalReport:
    """Round-trip loader for report.json."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DataError(f"cannot read report {path}: {exc}") from exc
    return EvalReport.from_dict(doc)
