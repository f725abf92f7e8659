"""MLP training: gradient correctness against finite differences, optimizers,
architecture generation."""

import numpy as np
import pytest

from spexplain.models import (
    MlpArchitecture,
    MlpHyperparams,
    MlpModel,
    TrainingDivergedError,
    gen_architecture,
    init_parameters,
    loss_and_gradients,
    mlp_fit,
)


def finite_difference_max_rel_error(arch, weights, biases, X, y, l2, step=1e-5):
    """Central finite differences over every parameter."""
    _, w_grads, b_grads = loss_and_gradients(arch, weights, biases, X, y, l2)
    worst = 0.0
    for params, grads in ((weights, w_grads), (biases, b_grads)):
        for p, g in zip(params, grads):
            it = np.nditer(p, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                orig = p[ix]
                p[ix] = orig + step
                up, _, _ = loss_and_gradients(arch, weights, biases, X, y, l2)
                p[ix] = orig - step
                down, _, _ = loss_and_gradients(arch, weights, biases, X, y, l2)
                p[ix] = orig
                numeric = (up - down) / (2 * step)
                denom = max(abs(numeric), abs(g[ix]), 1e-8)
                worst = max(worst, abs(numeric - g[ix]) / denom)
    return worst


class TestGradients:
    @pytest.mark.parametrize("seed", range(6))
    def test_backprop_matches_finite_differences(self, seed):
        r = np.random.default_rng(seed)
        arch = MlpArchitecture(
            layer_sizes=(3, 4, 1),
            hidden_activation=("relu", "sigmoid")[seed % 2],
            output_activation=("linear", "sigmoid")[(seed // 2) % 2],
        )
        weights, biases = init_parameters(arch, "uniform-fan-scaled", seed)
        X = r.standard_normal((5, 3))
        y = r.standard_normal(5)
        l2 = 0.01 if seed % 3 == 0 else 0.0
        assert finite_difference_max_rel_error(arch, weights, biases, X, y, l2) < 1e-4

    def test_l2_term_included_in_loss(self, rng):
        arch = MlpArchitecture((2, 2, 1))
        weights, biases = init_parameters(arch, "normal", 0)
        X, y = rng.random((4, 2)), rng.random(4)
        plain, _, _ = loss_and_gradients(arch, weights, biases, X, y, 0.0)
        penalized, _, _ = loss_and_gradients(arch, weights, biases, X, y, 0.5)
        expected = plain + 0.5 * sum(np.sum(w**2) for w in weights)
        assert penalized == pytest.approx(expected)


class TestFitting:
    def test_zero_network_predicts_zero(self, rng):
        arch = MlpArchitecture((4, 3, 1))
        model = MlpModel(
            arch=arch,
            weights=(np.zeros((4, 3)), np.zeros((3, 1))),
            biases=(np.zeros(3), np.zeros(1)),
        )
        assert np.all(model.predict(rng.random((6, 4))) == 0.0)

    def test_learns_linear_target(self, rng):
        X = rng.standard_normal((50, 3))
        y = 3.0 * X[:, 0]
        h = MlpHyperparams(optimizer="adam", learning_rate=0.01, epochs=500, batch_size=16, init_seed=1)
        model = mlp_fit(X, y, MlpArchitecture((3, 8, 1)), h)
        assert model.loss_curve[-1] < 1e-2

    @pytest.mark.parametrize("optimizer", ["sgd", "rmsprop", "adam"])
    def test_all_optimizers_reduce_loss(self, optimizer, rng):
        X = rng.standard_normal((40, 2))
        y = X[:, 0] - 0.5 * X[:, 1]
        h = MlpHyperparams(optimizer=optimizer, learning_rate=0.01, epochs=100, batch_size=10, init_seed=3)
        model = mlp_fit(X, y, MlpArchitecture((2, 6, 1)), h)
        assert model.loss_curve[-1] < model.loss_curve[0]

    def test_deterministic_given_seeds(self, rng):
        X = rng.standard_normal((30, 3))
        y = X.sum(axis=1)
        h = MlpHyperparams(epochs=20, init_seed=7)
        a = mlp_fit(X, y, MlpArchitecture((3, 5, 1)), h)
        b = mlp_fit(X, y, MlpArchitecture((3, 5, 1)), h)
        assert all(np.array_equal(w1, w2) for w1, w2 in zip(a.weights, b.weights))
        assert np.array_equal(a.loss_curve, b.loss_curve)

    def test_divergence_aborts_with_diagnostic(self, rng):
        X = rng.standard_normal((20, 2)) * 100
        y = rng.standard_normal(20) * 100
        h = MlpHyperparams(optimizer="sgd", learning_rate=1e6, epochs=50, init_seed=0)
        with pytest.raises(TrainingDivergedError):
            mlp_fit(X, y, MlpArchitecture((2, 4, 1)), h)

    def test_input_width_must_match(self, rng):
        with pytest.raises(ValueError):
            mlp_fit(rng.random((5, 3)), rng.random(5), MlpArchitecture((2, 2, 1)), MlpHyperparams(epochs=1))

    def test_complexity_counts_parameters(self):
        arch = MlpArchitecture((3, 4, 1))
        weights, biases = init_parameters(arch, "normal", 0)
        model = MlpModel(arch=arch, weights=tuple(weights), biases=tuple(biases))
        assert model.complexity == 3 * 4 + 4 + 4 * 1 + 1


class TestGenArchitecture:
    def test_up_doubles(self):
        assert gen_architecture("up", 3, 512) == (512, 1024, 2048)

    def test_down_single_layer(self):
        assert gen_architecture("down", 1, 64) == (64,)

    def test_up_capped_at_max_width(self):
        widths = gen_architecture("up", 6, 512)
        assert max(widths) <= 8000

    def test_down_floors_at_one(self):
        widths = gen_architecture("down", 8, 16)
        assert min(widths) >= 1

    def test_random_within_bounds(self):
        widths = gen_architecture("random", 10, 1, seed=4)
        assert all(32 <= w <= 8000 for w in widths)

    def test_updown_rises_then_falls(self):
        widths = gen_architecture("up-down", 5, 64, seed=1)
        peak = int(np.argmax(widths))
        assert all(a <= b for a, b in zip(widths[: peak + 1], widths[1 : peak + 1]))
        assert all(a >= b for a, b in zip(widths[peak:], widths[peak + 1 :]))

    def test_deterministic_given_seed(self):
        assert gen_architecture("random", 4, 1, seed=9) == gen_architecture("random", 4, 1, seed=9)

    def test_unknown_pattern(self):
        with pytest.raises(ValueError):
            gen_architecture("sideways", 2, 64)
