"""Feature ranking: components, importances, subset rules, invariances."""

import warnings

import numpy as np
import pytest

from spexplain.models import RfHyperparams, rf_fit, ridge_fit
from spexplain.selectors import (
    FeatureRanking,
    FeatureSubset,
    choose_components,
    component_feature_scores,
    elbow_index,
    pca_fit,
    pls_fit,
    rf_rank,
    ridge_rank,
    ridge_rank_fit,
    select_top,
    write_ranking,
    write_subset,
)
from spexplain.spectra import WavenumberAxis, standardize_apply


@pytest.fixture
def axis10():
    return WavenumberAxis(values=np.linspace(100.0, 190.0, 10), resolution=7.1)


class TestPca:
    def test_two_point_closed_form(self):
        model = pca_fit(np.array([[1.0, 0.0], [-1.0, 0.0]]), 1)
        assert np.abs(model.loadings[0]).tolist() == [1.0, 0.0]
        assert model.explained_variance_ratio[0] == pytest.approx(1.0)

    def test_second_variance_zero_on_line_data(self):
        X = np.array([[1.0, 0.0], [-1.0, 0.0], [0.5, 0.0], [-0.5, 0.0]])
        model = pca_fit(X, 2)
        assert model.component_variances[1] == pytest.approx(0.0, abs=1e-12)

    def test_isotropic_variances_nearly_equal(self, rng):
        X = rng.standard_normal((4000, 4))
        model = pca_fit(X, 4)
        ratios = model.explained_variance_ratio
        assert ratios.max() - ratios.min() < 0.05

    def test_rank_one_single_component_explains_all(self, rng):
        X = rng.standard_normal(30)[:, None] * rng.standard_normal(5)[None, :]
        model = pca_fit(X, 1)
        assert abs(model.explained_variance_ratio[0] - 1.0) < 1e-8

    def test_eigen_equation_and_orthonormality(self, rng):
        X = rng.standard_normal((25, 40))  # wide: exercises the Gram path
        model = pca_fit(X, 6)
        Xs = standardize_apply(model.params, X)
        cov = Xs.T @ Xs / X.shape[0]
        for vec, lam in zip(model.loadings, model.component_variances):
            assert np.linalg.norm(cov @ vec - lam * vec) < 1e-8
        gram = model.loadings @ model.loadings.T
        assert np.abs(gram - np.eye(6)).max() < 1e-8

    def test_variances_non_increasing(self, rng):
        model = pca_fit(rng.standard_normal((30, 8)), 5)
        diffs = np.diff(model.component_variances)
        assert np.all(diffs <= 1e-12)

    def test_reconstruction_error_decreases_with_components(self, rng):
        X = rng.standard_normal((40, 12))
        errors = []
        for p in (1, 3, 6, 10):
            model = pca_fit(X, p)
            Xs = standardize_apply(model.params, X)
            recon = (Xs @ model.loadings.T) @ model.loadings
            errors.append(float(np.sum((Xs - recon) ** 2)))
        assert all(b <= a + 1e-9 for a, b in zip(errors, errors[1:]))

    def test_component_count_bounds(self, rng):
        with pytest.raises(ValueError):
            pca_fit(rng.random((5, 3)), 5)


class TestPls:
    def test_orthogonal_features_weight_on_target_column(self, rng):
        Q, _ = np.linalg.qr(rng.standard_normal((60, 5)))
        y = Q[:, 0].copy()
        model = pls_fit(Q, y, 1)
        assert abs(model.weights[0][0]) > 0.99

    def test_cumulative_ev_one_on_noiseless_rank_p(self, rng):
        rank = 3
        X = rng.standard_normal((80, rank)) @ rng.standard_normal((rank, 9))
        y = X @ rng.standard_normal(9)
        model = pls_fit(X, y, rank)
        assert abs(np.sum(model.per_component_ev) - 1.0) < 1e-6

    def test_uncorrelated_response_low_first_ev(self, rng):
        X = rng.standard_normal((4000, 6))
        y = rng.standard_normal(4000)
        model = pls_fit(X, y, 1)
        assert model.per_component_ev[0] < 0.01

    def test_scores_mutually_uncorrelated(self, rng):
        X = rng.standard_normal((50, 12))
        y = X @ rng.standard_normal(12) + rng.standard_normal(50)
        model = pls_fit(X, y, 5)
        corr = np.corrcoef(model.scores.T)
        assert np.abs(corr - np.eye(5)).max() < 1e-6

    def test_early_stop_reported(self, rng):
        X = rng.standard_normal((30, 2)) @ np.ones((2, 6))  # rank 1
        y = X[:, 0].copy()
        with pytest.warns(UserWarning):
            model = pls_fit(X, y, 4)
        assert model.stopped_early
        assert model.n_components < 4

    def test_per_component_ev_non_negative(self, rng):
        X = rng.standard_normal((40, 10))
        y = X @ rng.standard_normal(10) + 0.3 * rng.standard_normal(40)
        model = pls_fit(X, y, 6)
        assert np.all(model.per_component_ev >= -1e-12)


class TestChooseComponents:
    def test_elbow_hand_arithmetic(self):
        assert elbow_index([0.5, 0.9, 0.93, 0.95]) == 2

    def test_elbow_ties_to_smaller(self):
        assert elbow_index([0.0, 0.5, 1.0, 1.5]) == 2  # flat curvature everywhere

    def test_pca_elbow_on_structured_data(self, rng):
        # two strong directions, the rest noise: elbow lands at 2
        lat = rng.standard_normal((200, 2)) * np.array([8.0, 5.0])
        X = lat @ rng.standard_normal((2, 12)) + 0.05 * rng.standard_normal((200, 12))
        assert choose_components("pca", X, None, 8) == 2

    def test_pls_picks_data_rank(self, rng):
        X = rng.standard_normal((120, 2)) @ rng.standard_normal((2, 8))
        y = X @ rng.standard_normal(8)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            p = choose_components("pls", X[:80], y[:80], 6, val=(X[80:], y[80:]))
        assert p == 2

    def test_requires_max_p_at_least_two(self, rng):
        with pytest.raises(ValueError):
            choose_components("pca", rng.random((10, 4)), None, 1)


class TestComponentFeatureScores:
    def test_single_component_hand_values(self, rng):
        X = rng.standard_normal((20, 2))
        model = pca_fit(X, 1)
        ranking = component_feature_scores(model)
        expected = model.explained_variance_ratio[0] * np.abs(model.loadings[0])
        assert np.allclose(ranking.scores, expected)

    def test_scores_linear_in_ev_weights(self, rng):
        X = rng.standard_normal((30, 6))
        model = pca_fit(X, 3)
        ranking = component_feature_scores(model)
        manual = model.explained_variance_ratio @ np.abs(model.loadings)
        assert np.allclose(ranking.scores, manual)

    def test_order_for_known_loading(self):
        ranking = FeatureRanking.from_scores(np.array([0.6, 0.8]))
        assert ranking.order.tolist() == [1, 0]


class TestRfRank:
    def test_dominant_feature(self, rng):
        X = rng.standard_normal((80, 6))
        y = 5.0 * X[:, 0]
        model = rf_fit(X, y, RfHyperparams(n_trees=25, max_features=1.0, seed=3))
        ranking = rf_rank(model)
        assert ranking.order[0] == 0
        assert ranking.scores[0] > 0.9

    def test_matches_per_node_bookkeeping(self, rng):
        X = rng.standard_normal((30, 4))
        y = X[:, 1] + 0.2 * rng.standard_normal(30)
        model = rf_fit(X, y, RfHyperparams(n_trees=5, seed=1))
        manual = np.zeros(4)
        for tree in model.trees:
            for node in range(tree.feature.size):
                if tree.feature[node] >= 0:
                    manual[tree.feature[node]] += tree.gain[node]
        ranking = rf_rank(model)
        assert np.allclose(ranking.scores, manual / manual.sum())

    def test_unused_feature_scores_zero(self, rng):
        X = np.column_stack([rng.standard_normal(40), np.zeros(40)])
        y = X[:, 0] * 2
        model = rf_fit(X, y, RfHyperparams(n_trees=10, max_features=1.0, seed=0))
        assert rf_rank(model).scores[1] == 0.0

    def test_scores_sum_to_one(self, rng):
        X = rng.standard_normal((50, 5))
        y = rng.standard_normal(50)
        model = rf_fit(X, y, RfHyperparams(n_trees=8, seed=2))
        assert abs(rf_rank(model).scores.sum() - 1.0) < 1e-10


class TestRidgeRank:
    def test_hand_order(self):
        model = ridge_fit(np.eye(3), np.array([3.0, -4.0, 0.0]), alpha=0.0, fit_intercept=False)
        ranking = ridge_rank(model)
        assert np.allclose(ranking.scores, [3.0, 4.0, 0.0])
        assert ranking.order.tolist() == [1, 0, 2]

    def test_all_zero_weights_identity_order(self):
        from spexplain.models import LinearModel

        ranking = ridge_rank(LinearModel(weights=np.zeros(4), intercept=1.0))
        assert ranking.order.tolist() == [0, 1, 2, 3]

    def test_fit_helper_standardizes(self, rng):
        X = rng.standard_normal((40, 3))
        X[:, 1] *= 1000.0
        y = X[:, 1] / 1000.0 + 0.01 * rng.standard_normal(40)
        ranking = ridge_rank_fit(X, y, alpha=0.001)
        assert ranking.order[0] == 1


class TestSelectTop:
    def test_cumulative_fraction_hand_case(self, axis10):
        ranking = FeatureRanking.from_scores([0.5, 0.3, 0.2] + [0.0] * 7)
        subset = select_top(ranking, axis10, fraction=0.8)
        assert subset.indices.tolist() == [0, 1]

    def test_k_equals_m_identity(self, axis10):
        ranking = FeatureRanking.from_scores(np.arange(10, dtype=float))
        subset = select_top(ranking, axis10, k=10)
        assert sorted(subset.indices.tolist()) == list(range(10))

    def test_wavenumbers_consistent(self, axis10):
        ranking = FeatureRanking.from_scores(np.arange(10, dtype=float))
        subset = select_top(ranking, axis10, k=3)
        assert np.array_equal(subset.wavenumbers, axis10.values[subset.indices])

    def test_exactly_one_rule(self, axis10):
        ranking = FeatureRanking.from_scores(np.ones(10))
        with pytest.raises(ValueError):
            select_top(ranking, axis10)
        with pytest.raises(ValueError):
            select_top(ranking, axis10, k=2, fraction=0.5)


class TestInvariances:
    def test_permutation_equivariance(self, rng):
        X = rng.standard_normal((40, 6))
        y = X @ rng.standard_normal(6) + 0.1 * rng.standard_normal(40)
        perm = rng.permutation(6)

        def scores_of(builder):
            return builder(X), builder(X[:, perm])

        base_ridge, perm_ridge = scores_of(lambda A: ridge_rank_fit(A, y, 0.01).scores)
        assert np.allclose(base_ridge[perm], perm_ridge)

        base_pca, perm_pca = scores_of(lambda A: component_feature_scores(pca_fit(A, 3)).scores)
        assert np.allclose(base_pca[perm], perm_pca, atol=1e-10)

        base_pls, perm_pls = scores_of(lambda A: component_feature_scores(pls_fit(A, y, 3)).scores)
        assert np.allclose(base_pls[perm], perm_pls, atol=1e-10)

        # min_leaf keeps nodes away from pure-split cost ties, where the
        # deterministic lowest-index tie rule is inherently basis-dependent
        def rf_scores(A):
            h = RfHyperparams(n_trees=5, max_features=1.0, min_leaf=5, bootstrap=False, seed=0)
            return rf_rank(rf_fit(A, y, h)).scores

        base_rf, perm_rf = scores_of(rf_scores)
        assert np.allclose(base_rf[perm], perm_rf)

    def test_column_rescale_leaves_rankings_unchanged(self, rng):
        X = rng.standard_normal((40, 5))
        y = X @ np.array([1.0, -2.0, 0.5, 0.0, 1.5]) + 0.1 * rng.standard_normal(40)
        X10 = X.copy()
        X10[:, 2] *= 10.0

        assert np.allclose(ridge_rank_fit(X, y, 0.01).scores, ridge_rank_fit(X10, y, 0.01).scores)
        assert np.allclose(
            component_feature_scores(pca_fit(X, 3)).scores,
            component_feature_scores(pca_fit(X10, 3)).scores,
            atol=1e-10,
        )
        h = RfHyperparams(n_trees=5, max_features=1.0, bootstrap=False, seed=0)
        assert np.array_equal(
            rf_rank(rf_fit(X, y, h)).order, rf_rank(rf_fit(X10, y, h)).order
        )


class TestRankingType:
    def test_rejects_negative_scores(self):
        with pytest.raises(ValueError):
            FeatureRanking.from_scores([-1.0, 2.0])

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            FeatureRanking(scores=np.array([1.0, 2.0]), order=np.array([0, 1]))

    def test_tie_break_ascending_index(self):
        ranking = FeatureRanking.from_scores([1.0, 2.0, 2.0, 1.0])
        assert ranking.order.tolist() == [1, 2, 0, 3]

    def test_subset_rejects_duplicates(self):
        with pytest.raises(ValueError):
            FeatureSubset(indices=np.array([1, 1]), wavenumbers=np.array([5.0, 5.0]))

    def test_export_files(self, tmp_path, axis10):
        ranking = FeatureRanking.from_scores(np.arange(10, dtype=float), method="demo")
        write_ranking(ranking, axis10, tmp_path / "ranking.txt")
        lines = (tmp_path / "ranking.txt").read_text().splitlines()
        assert lines[0].startswith("#")
        first_w, first_s = lines[1].split(",")
        assert float(first_w) == axis10.values[9] and float(first_s) == 9.0

        subset = select_top(ranking, axis10, k=4)
        write_subset(subset, tmp_path / "subset.txt")
        body = [l for l in (tmp_path / "subset.txt").read_text().splitlines() if not l.startswith("#")]
        assert [float(v) for v in body] == subset.wavenumbers.tolist()
