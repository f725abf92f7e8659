import time
import warnings

import numpy as np

warnings.simplefilter("ignore")

from spexplain.explainers import LimeConfig, ShapConfig, lime_rank, shap_rank, stratified_background, surrogate_fit, surrogate_rank
from spexplain.metrics import BinScheme, bin_set, mse
from spexplain.models import RfHyperparams, reference_svr_hyperparams, rf_fit, soft_margin_svr_hyperparams, svr_fit
from spexplain.selectors import ridge_rank_fit, rf_rank, select_top
from spexplain.spectra import (
    BatchShift,
    GaussianPeak,
    InteractionTerm,
    ScenarioSpec,
    SynthConfig,
    generate_synthetic,
    make_scenario,
    standardize_fit,
)


def candidate(name, peaks, active, weights, nonlin, amp_sd, rnoise, baseline, nscale):
    return name, SynthConfig(
        m_features=1562, axis_range=(181.45, 3200.82), resolution=7.1,
        peaks=peaks, active_peaks=active, response_weights=weights,
        nonlinearity=nonlin, amp_rel_sd=amp_sd, noise_sd=0.02,
        response_noise_sd=rnoise, batch_shift=BatchShift(baseline=baseline, noise_scale=nscale),
        n_old=145, n_new=100,
    )


peaksA = (
    GaussianPeak(420.0, 22.0, 1.2),
    GaussianPeak(725.0, 18.0, 0.8),
    GaussianPeak(1015.0, 14.0, 1.2),
    GaussianPeak(1305.0, 25.0, 1.0),
    GaussianPeak(1610.0, 14.0, 1.2),
    GaussianPeak(1940.0, 30.0, 0.6),
    GaussianPeak(2230.0, 20.0, 0.9),
    GaussianPeak(2560.0, 14.0, 1.2),
    GaussianPeak(2925.0, 14.0, 1.2),
    GaussianPeak(3080.0, 26.0, 0.7),
)

def cand2(name, noise, nscale, rnoise, baseline, nonlin):
    return candidate(name, peaksA, (2, 4, 7, 8), (3.5, -3.5, 3.5, 3.5), nonlin, 0.3, rnoise, baseline, nscale)._replace_noise(noise) if False else (
        name, SynthConfig(
            m_features=1562, axis_range=(181.45, 3200.82), resolution=7.1,
            peaks=peaksA, active_peaks=(2, 4, 7, 8), response_weights=(3.5, -3.5, 3.5, 3.5),
            nonlinearity=nonlin, amp_rel_sd=0.3, noise_sd=noise,
            response_noise_sd=rnoise, batch_shift=BatchShift(baseline=baseline, noise_scale=nscale),
            n_old=145, n_new=100,
        ))

cands = [
    cand2("G", 0.01, 2.5, 0.25, 0.05, ()),
    cand2("H", 0.0075, 2.5, 0.3, 0.05, ()),
    cand2("I", 0.0075, 2.5, 0.3, 0.05, (InteractionTerm(8, 8, 0.4),)),
]

for name, cfg in cands:
    t_start = time.time()
    rec = {m: [] for m in ("RF", "Ridge", "SHAP", "GS", "LIME")}
    ratios, wins = [], 0
    sv_soft_all, sv_def_all = [], []
    for s in range(5):
        res = generate_synthetic(cfg, seed=1000 + s)
        X, y = res.old.intensities, res.old.response
        axis = res.old.axis
        scheme = BinScheme.for_axis(axis)
        active_bins = bin_set(cfg.active_centers(), scheme)
        bb = svr_fit(X, y, soft_margin_svr_hyperparams())
        f = bb.predict
        rng = np.random.default_rng(s)

        rankings = {
            "RF": rf_rank(rf_fit(X, y, RfHyperparams(n_trees=91, seed=s))),
            "Ridge": ridge_rank_fit(X, y, 0.001),
            "GS": surrogate_rank(surrogate_fit(f, X)),
        }
        bg = stratified_background(X, f, 12, seed=s)
        rows = rng.choice(X.shape[0], size=16, replace=False)
        rankings["SHAP"] = shap_rank(f, X[rows], ShapConfig(background=X[bg], mode="sampled", n_permutations=8, seed=s))
        rows_l = rng.choice(X.shape[0], size=12, replace=False)
        rankings["LIME"] = lime_rank(f, X[rows_l], LimeConfig(train_stats=standardize_fit(X), n_perturbations=500, seed=s), per_instance_k=50)

        for mname, ranking in rankings.items():
            top = select_top(ranking, axis, k=120)
            rec[mname].append(len(bin_set(top.wavenumbers, scheme) & active_bins))

        train, val, test = make_scenario(res.old, res.new, ScenarioSpec.mixed(seed=s))
        sub = select_top(rankings["RF"], axis, k=120).indices
        m_full = svr_fit(train.intensities, train.response, soft_margin_svr_hyperparams())
        m_red = svr_fit(train.intensities[:, sub], train.response, soft_margin_svr_hyperparams())
        ratios.append(mse(test.response, m_red.predict(test.intensities[:, sub])) /
                      mse(test.response, m_full.predict(test.intensities)))

        soft_m, def_m, sv_s, sv_d = [], [], [], []
        for r in range(3):
            tr, va, te = make_scenario(res.old, res.new, ScenarioSpec.realtime(seed=100 * s + r))
            ms = svr_fit(tr.intensities, tr.response, soft_margin_svr_hyperparams())
            md = svr_fit(tr.intensities, tr.response, reference_svr_hyperparams())
            soft_m.append(mse(te.response, ms.predict(te.intensities)))
            def_m.append(mse(te.response, md.predict(te.intensities)))
            sv_s.append(ms.complexity); sv_d.append(md.complexity)
        if np.mean(soft_m) <= np.mean(def_m):
            wins += 1
        sv_soft_all.append(np.mean(sv_s)); sv_def_all.append(np.mean(sv_d))

    means = {k: float(np.mean(v)) for k, v in rec.items()}
    ok_rec = all(v >= 3 for v in means.values())
    ok_ratio = np.mean(ratios) <= 1.5
    ok_rt = wins >= 4 and np.mean(sv_soft_all) < np.mean(sv_def_all)
    print(f"[{name}] rec={means} ratio={np.mean(ratios):.2f} wins={wins}/5 "
          f"sv={np.mean(sv_soft_all):.0f}/{np.mean(sv_def_all):.0f} "
          f"{'PASS' if ok_rec and ok_ratio and ok_rt else 'FAIL'} ({time.time()-t_start:.0f}s)", flush=True)
