"""Seeded hyperparameter search over declared ranges.

Random search (or an exhaustive grid for discrete spaces) replaces an
external Bayesian optimizer: it is deterministic given the seed, records
every trial, and scores configurations by validation MSE.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..metrics import mse
from .kernels import KernelSpec
from .mlp import MlpArchitecture, MlpHyperparams, gen_architecture, mlp_fit
from .svr import SvrHyperparams, svr_fit


@dataclass(frozen=True)
class Real:
    lo: float
    hi: float
    log: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("Real range needs lo < hi")
        if self.log and self.lo <= 0:
            raise ValueError("log-scaled ranges need positive bounds")

    def sample(self, rng):
        if self.log:
            return float(np.exp(rng.uniform(math.log(self.lo), math.log(self.hi))))
        return float(rng.uniform(self.lo, self.hi))

    def grid_values(self):
        raise ValueError("grid search over a Real range needs explicit Categorical choices")

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi


@dataclass(frozen=True)
class Integer:
    lo: int
    hi: int
    step: int = 1

    def __post_init__(self):
        if self.lo > self.hi or self.step < 1:
            raise ValueError("Integer range needs lo <= hi and step >= 1")

    def sample(self, rng):
        n_steps = (self.hi - self.lo) // self.step
        return int(self.lo + self.step * rng.integers(0, n_steps + 1))

    def grid_values(self):
        return list(range(self.lo, self.hi + 1, self.step))

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi


@dataclass(frozen=True)
class Categorical:
    options: tuple

    def __post_init__(self):
        if not self.options:
            raise ValueError("Categorical needs at least one option")
        object.__setattr__(self, "options", tuple(self.options))

    def sample(self, rng):
        return self.options[int(rng.integers(0, len(self.options)))]

    def grid_values(self):
        return list(self.options)

    def contains(self, v) -> bool:
        return v in self.options


@dataclass(frozen=True)
class TunerSpec:
    space: dict
    budget: int = 25
    strategy: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.strategy not in ("random", "grid"):
            raise ValueError("strategy must be 'random' or 'grid'")
        if not self.space:
            raise ValueError("search space is empty")


@dataclass(frozen=True)
class TuneResult:
    best_params: dict
    best_val_mse: float
    trials: tuple


def _sampled_configs(spec: TunerSpec):
    keys = sorted(spec.space)
    if spec.strategy == "grid":
        grids = [spec.space[k].grid_values() for k in keys]
        for combo in itertools.islice(itertools.product(*grids), spec.budget):
            yield dict(zip(keys, combo))
        return
    rng = np.random.default_rng(spec.seed)
    for _ in range(spec.budget):
        yield {k: spec.space[k].sample(rng) for k in keys}


def tune(trainer, spec: TunerSpec, train, val) -> TuneResult:
    """Evaluate sampled configurations and keep the best by validation MSE.

    ``trainer(params, X, y)`` must return a fitted model exposing
    ``predict``. Trainer failures are recorded on the trial and skipped, not
    raised. Ties keep the earlier trial.
    """
    X_train, y_train = train
    X_val, y_val = val
    trials = []
    best_params, best_mse = None, math.inf
    for params in _sampled_configs(spec):
        for key, value in params.items():
            if not spec.space[key].contains(value):
                raise AssertionError(f"sampled {key}={value!r} escaped its declared range")
        record = {"params": params, "val_mse": math.nan, "status": "ok", "error": ""}
        try:
            model = trainer(params, X_train, y_train)
            record["val_mse"] = mse(y_val, model.predict(X_val))
        except Exception as exc:  # noqa: BLE001 - per-trial failures are data
            record["status"] = "failed"
            record["error"] = f"{type(exc).__name__}: {exc}"
        trials.append(record)
        if record["status"] == "ok" and record["val_mse"] < best_mse:
            best_params, best_mse = params, record["val_mse"]
    if best_params is None:
        raise RuntimeError("every tuning trial failed; see the trial log")
    return TuneResult(best_params=best_params, best_val_mse=best_mse, trials=tuple(trials))


# --- search spaces -----------------------------------------------------------

def svr_search_space() -> dict:
    return {
        "kernel": Categorical(("poly", "rbf", "sigmoid", "linear")),
        "degree": Integer(1, 4),
        "gamma": Real(1e-4, 1.0, log=True),
        "coef0": Real(0.01, 10.0),
        "c": Real(0.1, 1000.0, log=True),
        "epsilon": Real(0.01, 10.0),
    }


def mlp_search_space() -> dict:
    return {
        "hidden_activation": Categorical(("relu", "sigmoid")),
        "n_hidden_layers": Integer(1, 10),
        "base_width": Integer(32, 8000, step=32),
        "output_activation": Categorical(("linear", "sigmoid")),
        "optimizer": Categorical(("adam", "sgd", "rmsprop")),
        "learning_rate": Real(1e-4, 1.0, log=True),
        "l2_penalty": Real(1e-4, 0.01, log=True),
        "weight_init": Categorical(("normal", "uniform-fan-scaled")),
        "batch_size": Integer(32, 100),
        "epochs": Integer(100, 1000),
        "architecture": Categorical(("up", "down", "up-down", "down-up", "random")),
    }


# Tuned operating points for the two SVR variants: the search optimum, and the
# same kernel with a softer tube that generalizes better onto shifted batches.
DEFAULT_SVR_EPSILON = 0.1
SOFT_TUBE_EPSILON = 0.66


def reference_svr_hyperparams(epsilon: float = DEFAULT_SVR_EPSILON, **overrides) -> SvrHyperparams:
    kernel = KernelSpec(kind="poly", gamma=0.7, coef0=0.1, degree=3)
    return SvrHyperparams(kernel=kernel, c=0.7, epsilon=epsilon, **overrides)


def soft_margin_svr_hyperparams(**overrides) -> SvrHyperparams:
    return reference_svr_hyperparams(epsilon=SOFT_TUBE_EPSILON, **overrides)


def make_svr_trainer(**fixed):
    """Adapter from sampled parameter dicts to svr_fit."""

    def trainer(params: dict, X, y):
        kernel = KernelSpec(
            kind=params.get("kernel", "rbf"),
            gamma=params.get("gamma", 1.0),
            coef0=params.get("coef0", 0.0),
            degree=int(params.get("degree", 3)),
        )
        h = SvrHyperparams(
            kernel=kernel,
            c=params.get("c", 1.0),
            epsilon=params.get("epsilon", 0.1),
            **fixed,
        )
        return svr_fit(X, y, h)

    return trainer


def make_mlp_trainer(arch_seed: int = 0, **fixed):
    """Adapter from sampled parameter dicts to mlp_fit; derives the layer
    sizes from the architecture pattern."""

    def trainer(params: dict, X, y):
        hidden = gen_architecture(
            params.get("architecture", "up"),
            depth=int(params.get("n_hidden_layers", 1)),
            base_width=int(params.get("base_width", 64)),
            seed=arch_seed,
        )
        arch = MlpArchitecture(
            layer_sizes=(X.shape[1], *hidden, 1),
            hidden_activation=params.get("hidden_activation", "relu"),
            output_activation=params.get("output_activation", "linear"),
        )
        h = MlpHyperparams(
            optimizer=params.get("optimizer", "adam"),
            learning_rate=params.get("learning_rate", 1e-3),
            batch_size=int(params.get("batch_size", 32)),
            epochs=int(params.get("epochs", 200)),
            l2_penalty=params.get("l2_penalty", 0.0),
            weight_init=params.get("weight_init", "uniform-fan-scaled"),
            **fixed,
        )
        return mlp_fit(X, y, arch, h)

    return trainer
