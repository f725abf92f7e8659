import time
import warnings

import numpy as np

warnings.simplefilter("ignore")

from spexplain.explainers import LimeConfig, ShapConfig, lime_rank, shap_rank, stratified_background, surrogate_fit, surrogate_rank
from spexplain.metrics import BinScheme, bin_set, mse
from spexplain.models import RfHyperparams, reference_svr_hyperparams, rf_fit, soft_margin_svr_hyperparams, svr_fit
from spexplain.selectors import ridge_rank_fit, rf_rank, select_top
from spexplain.spectra import ScenarioSpec, SynthConfig, generate_synthetic, make_scenario, standardize_fit

cfg = SynthConfig()
scheme_width = 2 * cfg.resolution

t_start = time.time()
recovered = {m: [] for m in ("RF", "Ridge", "SHAP", "GS", "LIME")}
ratios = []
rt_soft_wins = 0
sv_counts = {"soft": [], "default": []}
rt_mses = {"soft": [], "default": []}

for s in range(5):
    t0 = time.time()
    res = generate_synthetic(cfg, seed=1000 + s)
    old = res.old
    X, y = old.intensities, old.response
    axis = old.axis
    scheme = BinScheme.for_axis(axis)
    active_bins = bin_set(cfg.active_centers(), scheme)

    # black box for the model-agnostic methods
    bb = svr_fit(X, y, soft_margin_svr_hyperparams())
    f = bb.predict

    rankings = {}
    t = time.time(); rankings["RF"] = rf_rank(rf_fit(X, y, RfHyperparams(n_trees=91, seed=s))); t_rf = time.time()-t
    t = time.time(); rankings["Ridge"] = ridge_rank_fit(X, y, 0.001); t_rid = time.time()-t
    t = time.time()
    bg = stratified_background(X, f, 12, seed=s)
    rng = np.random.default_rng(s)
    rows = rng.choice(X.shape[0], size=16, replace=False)
    rankings["SHAP"] = shap_rank(f, X[rows], ShapConfig(background=X[bg], mode="sampled", n_permutations=8, seed=s))
    t_shap = time.time()-t
    t = time.time(); rankings["GS"] = surrogate_rank(surrogate_fit(f, X)); t_gs = time.time()-t
    t = time.time()
    rows_l = rng.choice(X.shape[0], size=12, replace=False)
    rankings["LIME"] = lime_rank(f, X[rows_l], LimeConfig(train_stats=standardize_fit(X), n_perturbations=500, seed=s), per_instance_k=50)
    t_lime = time.time()-t

    line = f"seed {s}: rf={t_rf:.1f}s shap={t_shap:.1f}s lime={t_lime:.1f}s |"
    for name, ranking in rankings.items():
        top = select_top(ranking, axis, k=120)
        hit = len(bin_set(top.wavenumbers, scheme) & active_bins)
        recovered[name].append(hit)
        line += f" {name}={hit}"
    print(line, flush=True)

    # Mixed scenario: reduced (RF top-120) vs full, fine-tuned SVR
    train, val, test = make_scenario(res.old, res.new, ScenarioSpec.mixed(seed=s))
    sub = select_top(rankings["RF"], axis, k=120).indices
    t = time.time()
    m_full = svr_fit(train.intensities, train.response, soft_margin_svr_hyperparams())
    m_red = svr_fit(train.intensities[:, sub], train.response, soft_margin_svr_hyperparams())
    full_mse = mse(test.response, m_full.predict(test.intensities))
    red_mse = mse(test.response, m_red.predict(test.intensities[:, sub]))
    ratios.append(red_mse / full_mse)
    print(f"  mixed: full={full_mse:.4f} reduced={red_mse:.4f} ratio={red_mse/full_mse:.2f} ({time.time()-t:.1f}s)", flush=True)

    # Realtime directional effect over 3 split seeds
    soft_mses, def_mses, soft_sv, def_sv = [], [], [], []
    for r in range(3):
        tr, va, te = make_scenario(res.old, res.new, ScenarioSpec.realtime(seed=100 * s + r))
        m_soft = svr_fit(tr.intensities, tr.response, soft_margin_svr_hyperparams())
        m_def = svr_fit(tr.intensities, tr.response, reference_svr_hyperparams())
        soft_mses.append(mse(te.response, m_soft.predict(te.intensities)))
        def_mses.append(mse(te.response, m_def.predict(te.intensities)))
        soft_sv.append(m_soft.complexity)
        def_sv.append(m_def.complexity)
    mu_soft, mu_def = np.mean(soft_mses), np.mean(def_mses)
    rt_mses["soft"].append(mu_soft); rt_mses["default"].append(mu_def)
    sv_counts["soft"].append(np.mean(soft_sv)); sv_counts["default"].append(np.mean(def_sv))
    if mu_soft <= mu_def:
        rt_soft_wins += 1
    print(f"  realtime: soft={mu_soft:.3f} default={mu_def:.3f} sv_soft={np.mean(soft_sv):.0f} sv_def={np.mean(def_sv):.0f} seed_time={time.time()-t0:.0f}s", flush=True)

print()
print("recovery means:", {k: np.mean(v) for k, v in recovered.items()})
print("mixed ratio mean:", np.mean(ratios), "=> pass" if np.mean(ratios) <= 1.5 else "=> FAIL")
print(f"realtime soft wins {rt_soft_wins}/5; mean sv soft={np.mean(sv_counts['soft']):.1f} vs default={np.mean(sv_counts['default']):.1f}")
print(f"TOTAL {time.time()-t_start:.0f}s")
