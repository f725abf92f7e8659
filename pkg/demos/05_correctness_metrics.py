"""Score selections against expert locations with binned Jaccard similarity.

Bins absorb small instrument shifts: a selected wavenumber matches an expert
one when both land in the same bin (default width, twice the resolution).
"""

import warnings

from spexplain.metrics import (
    BinScheme,
    ExpertFeatureSet,
    correctness,
    correctness_curve,
    tradeoff,
)
from spexplain.models import RfHyperparams, rf_fit
from spexplain.selectors import component_feature_scores, pca_fit, rf_rank, ridge_rank_fit
from spexplain.spectra import SynthConfig, generate_synthetic

warnings.filterwarnings("ignore")

cfg = SynthConfig()
result = generate_synthetic(cfg, seed=2)
X, y = result.old.intensities, result.old.response
axis = result.old.axis

expert = ExpertFeatureSet(wavenumbers=result.expert_wavenumbers, source="synthetic ground truth")
scheme = BinScheme.for_axis(axis)
print(f"expert set: {expert.wavenumbers.size} wavenumbers; "
      f"bin width {scheme.width} cm^-1 (2 x {axis.resolution} resolution)\n")

rankings = {
    "rf": rf_rank(rf_fit(X, y, RfHyperparams(n_trees=91, seed=0))),
    "ridge": ridge_rank_fit(X, y, alpha=0.001),
    "pca": component_feature_scores(pca_fit(X, 4)),
}

print("correctness at k=120:")
for name, ranking in rankings.items():
    point = correctness(ranking, expert, k=120, scheme=scheme, axis=axis)
    print(f"  {name:6s} jaccard={point.jaccard:.3f} ({point.percent:.1f}%)")

print("\ncorrectness curve for rf (k = 120..500 step 80):")
for point in correctness_curve(rankings["rf"], expert, list(range(120, 501, 80)), scheme, axis):
    print(f"  k={point.k:3d} -> {point.percent:5.1f}%")

rows = tradeoff({
    name: (correctness(r, expert, 120, scheme, axis).jaccard, 1.0 + i * 0.3, 0.1)
    for i, (name, r) in enumerate(rankings.items())
})
print("\ntrade-off table (correctness vs illustrative test MSE):")
for row in rows:
    print(f"  {row['method']:6s} correctness={row['correctness']:.3f} "
          f"test_mse={row['test_mse_mean']:.2f} +- {row['test_mse_sd']:.2f}")
