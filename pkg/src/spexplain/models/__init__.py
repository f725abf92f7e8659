from .forest import RfHyperparams, RfModel, TreeNodes, rf_fit
from .kernels import KERNEL_KINDS, KernelSpec, kernel_eval, kernel_matrix
from .linear import LinearModel, ols_fit, ridge_fit
from .mlp import (
    ARCH_PATTERNS,
    MlpArchitecture,
    MlpHyperparams,
    MlpModel,
    TrainingDivergedError,
    forward_pass,
    gen_architecture,
    init_parameters,
    loss_and_gradients,
    mlp_fit,
)
from .serialize import load_model, model_from_dict, model_to_dict, save_model
from .svr import (
    SUPPORT_EPS,
    SmoSolution,
    SvrHyperparams,
    SvrModel,
    model_complexity,
    solve_epsilon_svr,
    svr_fit,
)
from .tuning import (
    DEFAULT_SVR_EPSILON,
    SOFT_TUBE_EPSILON,
    Categorical,
    Integer,
    Real,
    TuneResult,
    TunerSpec,
    make_mlp_trainer,
    make_svr_trainer,
    mlp_search_space,
    reference_svr_hyperparams,
    soft_margin_svr_hyperparams,
    svr_search_space,
    tune,
)

__all__ = [
    "RfHyperparams",
    "RfModel",
    "TreeNodes",
    "rf_fit",
    "KERNEL_KINDS",
    "KernelSpec",
    "kernel_eval",
    "kernel_matrix",
    "LinearModel",
    "ols_fit",
    "ridge_fit",
    "ARCH_PATTERNS",
    "MlpArchitecture",
    "MlpHyperparams",
    "MlpModel",
    "TrainingDivergedError",
    "forward_pass",
    "gen_architecture",
    "init_parameters",
    "loss_and_gradients",
    "mlp_fit",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "SUPPORT_EPS",
    "SmoSolution",
    "SvrHyperparams",
    "SvrModel",
    "model_complexity",
    "solve_epsilon_svr",
    "svr_fit",
    "DEFAULT_SVR_EPSILON",
    "SOFT_TUBE_EPSILON",
    "Categorical",
    "Integer",
    "Real",
    "TuneResult",
    "TunerSpec",
    "make_mlp_trainer",
    "make_svr_trainer",
    "mlp_search_space",
    "reference_svr_hyperparams",
    "soft_margin_svr_hyperparams",
    "svr_search_space",
    "tune",
]
