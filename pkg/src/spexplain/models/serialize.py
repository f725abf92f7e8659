"""Versioned JSON serialization for fitted models.

Floats survive a round trip exactly (shortest-repr encoding), so a reloaded
model predicts bit-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..spectra.dataset import StandardizationParams
from .forest import RfHyperparams, RfModel, TreeNodes
from .kernels import KernelSpec
from .linear import LinearModel
from .mlp import MlpArchitecture, MlpModel
from .svr import SvrModel

FORMAT_NAME = "spexplain-model"
FORMAT_VERSION = 1


def _arr(a) -> list:
    return np.asarray(a).tolist()


def _kernel_to_dict(k: KernelSpec) -> dict:
    return {"kind": k.kind, "gamma": k.gamma, "coef0": k.coef0, "degree": k.degree}


def _params_to_dict(p: StandardizationParams | None):
    if p is None:
        return None
    return {"means": _arr(p.means), "stds": _arr(p.stds)}


def _params_from_dict(d) -> StandardizationParams | None:
    if d is None:
        return None
    return StandardizationParams(means=np.asarray(d["means"]), stds=np.asarray(d["stds"]))


def model_to_dict(model) -> dict:
    doc = {"format": FORMAT_NAME, "version": FORMAT_VERSION}
    if isinstance(model, LinearModel):
        doc.update(kind="linear", weights=_arr(model.weights), intercept=model.intercept)
    elif isinstance(model, SvrModel):
        doc.update(
            kind="svr",
            kernel=_kernel_to_dict(model.kernel),
            support_indices=_arr(model.support_indices),
            dual_coefs=_arr(model.dual_coefs),
            bias=model.bias,
            n_features=int(model.training_rows.shape[1]) if model.training_rows.ndim == 2 else 0,
            training_rows=_arr(model.training_rows),
            dual_objective=model.dual_objective,
            kkt_violation=model.kkt_violation,
            n_iter=model.n_iter,
            converged=model.converged,
            input_params=_params_to_dict(model.input_params),
        )
    elif isinstance(model, MlpModel):
        doc.update(
            kind="mlp",
            layer_sizes=list(model.arch.layer_sizes),
            hidden_activation=model.arch.hidden_activation,
            output_activation=model.arch.output_activation,
            weights=[_arr(w) for w in model.weights],
            biases=[_arr(b) for b in model.biases],
        )
    elif isinstance(model, RfModel):
        doc.update(
            kind="rf",
            n_features=model.n_features,
            hyper={
                "n_trees": model.hyper.n_trees,
                "max_features": model.hyper.max_features,
                "min_leaf": model.hyper.min_leaf,
                "bootstrap": model.hyper.bootstrap,
                "seed": model.hyper.seed,
            },
            trees=[
                {
                    "feature": _arr(t.feature),
                    "threshold": _arr(t.threshold),
                    "left": _arr(t.left),
                    "right": _arr(t.right),
                    "value": _arr(t.value),
                    "variance": _arr(t.variance),
                    "n_node": _arr(t.n_node),
                    "gain": _arr(t.gain),
                }
                for t in model.trees
            ],
        )
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    return doc


def model_from_dict(doc: dict):
    if doc.get("format") != FORMAT_NAME:
        raise ValueError("not a model document")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')!r}")
    kind = doc["kind"]
    if kind == "linear":
        return LinearModel(weights=np.asarray(doc["weights"]), intercept=doc["intercept"])
    if kind == "svr":
        k = doc["kernel"]
        return SvrModel(
            kernel=KernelSpec(kind=k["kind"], gamma=k["gamma"], coef0=k["coef0"], degree=k["degree"]),
            support_indices=np.asarray(doc["support_indices"], dtype=int),
            dual_coefs=np.asarray(doc["dual_coefs"]),
            bias=doc["bias"],
            training_rows=np.asarray(doc["training_rows"], dtype=float).reshape(
                len(doc["support_indices"]), doc["n_features"]
            ),
            dual_objective=doc["dual_objective"],
            kkt_violation=doc["kkt_violation"],
            n_iter=doc["n_iter"],
            converged=doc["converged"],
            input_params=_params_from_dict(doc.get("input_params")),
        )
    if kind == "mlp":
        arch = MlpArchitecture(
            layer_sizes=tuple(doc["layer_sizes"]),
            hidden_activation=doc["hidden_activation"],
            output_activation=doc["output_activation"],
        )
        return MlpModel(
            arch=arch,
            weights=tuple(np.asarray(w) for w in doc["weights"]),
            biases=tuple(np.asarray(b) for b in doc["biases"]),
        )
    if kind == "rf":
        h = doc["hyper"]
        hyper = RfHyperparams(
            n_trees=h["n_trees"],
            max_features=h["max_features"],
            min_leaf=h["min_leaf"],
            bootstrap=h["bootstrap"],
            seed=h["seed"],
        )
        trees = tuple(
            TreeNodes(
                feature=np.asarray(t["feature"], dtype=int),
                threshold=np.asarray(t["threshold"], dtype=float),
                left=np.asarray(t["left"], dtype=int),
                right=np.asarray(t["right"], dtype=int),
                value=np.asarray(t["value"], dtype=float),
                variance=np.asarray(t["variance"], dtype=float),
                n_node=np.asarray(t["n_node"], dtype=int),
                gain=np.asarray(t["gain"], dtype=float),
            )
            for t in doc["trees"]
        )
        return RfModel(trees=trees, n_features=doc["n_features"], hyper=hyper)
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)))


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text()))
