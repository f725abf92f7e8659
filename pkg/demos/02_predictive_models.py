"""Fit every predictive model on one synthetic split and compare them.

Shows the epsilon-SVR dual solver (with its convergence diagnostics), the
backprop MLP, the random forest, and the linear baselines, plus the seeded
random search over the declared hyperparameter space.
"""

import time

from spexplain.metrics import mse
from spexplain.models import (
    Categorical,
    Integer,
    MlpArchitecture,
    MlpHyperparams,
    Real,
    RfHyperparams,
    TunerSpec,
    make_svr_trainer,
    mlp_fit,
    ols_fit,
    reference_svr_hyperparams,
    rf_fit,
    ridge_fit,
    soft_margin_svr_hyperparams,
    svr_fit,
    tune,
)
from spexplain.spectra import ScenarioSpec, SynthConfig, generate_synthetic, make_scenario

# a lighter grid keeps the MLP affordable in plain numpy
cfg = SynthConfig(m_features=400)
result = generate_synthetic(cfg, seed=3)
train, val, test = make_scenario(result.old, result.new, ScenarioSpec.control(seed=0))
X, y = train.intensities, train.response
X_test, y_test = test.intensities, test.response

print(f"training on {X.shape[0]} x {X.shape[1]}\n")

def report(name, model, seconds):
    print(f"{name:14s} train={mse(y, model.predict(X)):8.4f} "
          f"test={mse(y_test, model.predict(X_test)):8.4f} "
          f"complexity={model.complexity:6d}  ({seconds:.2f}s)")

t0 = time.time(); m = ols_fit(X, y); report("ols", m, time.time() - t0)
t0 = time.time(); m = ridge_fit(X, y, alpha=0.001); report("ridge", m, time.time() - t0)

t0 = time.time()
svr = svr_fit(X, y, reference_svr_hyperparams())
report("svr (eps=.10)", svr, time.time() - t0)
print(f"{'':14s} converged={svr.converged} after {svr.n_iter} iterations, "
      f"KKT violation {svr.kkt_violation:.2e}")

t0 = time.time(); m = svr_fit(X, y, soft_margin_svr_hyperparams()); report("svr (eps=.66)", m, time.time() - t0)
t0 = time.time(); m = rf_fit(X, y, RfHyperparams(n_trees=40, seed=0)); report("rf", m, time.time() - t0)

t0 = time.time()
arch = MlpArchitecture(layer_sizes=(X.shape[1], 64, 1))
mlp = mlp_fit(X, y, arch, MlpHyperparams(learning_rate=0.0011, epochs=150, init_seed=0))
report("mlp 64", mlp, time.time() - t0)
print(f"{'':14s} loss curve: {mlp.loss_curve[0]:.3f} -> {mlp.loss_curve[-1]:.3f}")

# seeded random search over a slice of the declared SVR space
space = {
    "kernel": Categorical(("rbf", "poly")),
    "degree": Integer(1, 3),
    "gamma": Real(1e-4, 1.0, log=True),
    "coef0": Real(0.01, 10.0),
    "c": Real(0.1, 1000.0, log=True),
    "epsilon": Real(0.01, 2.0),
}
t0 = time.time()
outcome = tune(make_svr_trainer(), TunerSpec(space=space, budget=12, seed=1),
               (X, y), (val.intensities, val.response))
print(f"\nrandom search over {len(outcome.trials)} trials ({time.time()-t0:.1f}s):")
print("  best val MSE:", round(outcome.best_val_mse, 4))
print("  best params:", {k: round(v, 4) if isinstance(v, float) else v for k, v in outcome.best_params.items()})
