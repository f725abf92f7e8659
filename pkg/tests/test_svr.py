"""Support vector regression: dual solver behavior against small oracles."""

import numpy as np
import pytest

from spexplain.models import (
    KernelSpec,
    SvrHyperparams,
    kernel_matrix,
    model_complexity,
    solve_epsilon_svr,
    svr_fit,
)


def random_problem(seed, n=20, m=5):
    r = np.random.default_rng(seed)
    X = r.standard_normal((n, m))
    y = X @ r.standard_normal(m) + 0.3 * r.standard_normal(n)
    return X, y


class TestSvrFit:
    def test_exact_linear_fit_inside_tube(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([0.0, 2.0, 4.0])
        h = SvrHyperparams(kernel=KernelSpec("linear"), c=1000.0, epsilon=0.01, tol=1e-3)
        model = svr_fit(X, y, h)
        residuals = np.abs(model.predict(X) - y)
        assert residuals.max() <= h.epsilon + h.tol

    def test_constant_target_needs_no_support_vectors(self):
        X = np.arange(8.0).reshape(4, 2)
        y = np.full(4, 3.3)
        model = svr_fit(X, y, SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.5), c=1.0, epsilon=0.2))
        assert model.complexity == 0
        assert model_complexity(model) == 0
        assert np.allclose(model.predict(X), 3.3)

    def test_dual_box_and_equality_constraints(self):
        X, y = random_problem(5)
        h = SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.4), c=2.0, epsilon=0.1)
        model = svr_fit(X, y, h)
        assert np.all(np.abs(model.dual_coefs) <= h.c + 1e-12)
        assert abs(model.dual_coefs.sum()) < 1e-8

    def test_objective_curve_non_decreasing(self):
        X, y = random_problem(7, n=15, m=3)
        h = SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.7), c=5.0, epsilon=0.05)
        model = svr_fit(X, y, h, record_objective=True)
        steps = np.diff(model.objective_curve)
        assert np.all(steps >= -1e-9)

    def test_in_tube_training_residuals(self):
        X, y = random_problem(11)
        h = SvrHyperparams(kernel=KernelSpec("poly", gamma=0.5, coef0=1.0, degree=2), c=50.0, epsilon=0.2)
        model = svr_fit(X, y, h)
        preds = model.predict(X)
        beta = np.zeros(y.size)
        beta[model.support_indices] = model.dual_coefs
        in_tube = np.abs(beta) < h.c - 1e-9
        assert np.all(np.abs(preds[in_tube] - y[in_tube]) <= h.epsilon + h.tol)

    def test_deterministic(self):
        X, y = random_problem(3)
        h = SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.4), c=2.0, epsilon=0.1)
        a, b = svr_fit(X, y, h), svr_fit(X, y, h)
        assert np.array_equal(a.dual_coefs, b.dual_coefs)
        assert a.bias == b.bias

    def test_iteration_cap_warns_not_raises(self):
        X, y = random_problem(1)
        h = SvrHyperparams(kernel=KernelSpec("linear"), c=100.0, epsilon=0.001, max_iter=3)
        with pytest.warns(UserWarning):
            model = svr_fit(X, y, h)
        assert not model.converged

    def test_softer_tube_does_not_increase_support_count(self):
        X, y = random_problem(9, n=40, m=6)
        base = dict(kernel=KernelSpec("rbf", gamma=0.3), c=5.0)
        tight = svr_fit(X, y, SvrHyperparams(epsilon=0.1, **base))
        soft = svr_fit(X, y, SvrHyperparams(epsilon=0.66, **base))
        assert soft.complexity <= tight.complexity

    def test_standardize_inputs_flag(self):
        X, y = random_problem(13)
        X = X * 100 + 50
        h = SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.1), c=10.0, epsilon=0.05, standardize_inputs=True)
        model = svr_fit(X, y, h)
        assert model.input_params is not None
        assert np.isfinite(model.predict(X)).all()

    def test_rejects_non_finite(self):
        X, y = random_problem(0)
        X[0, 0] = np.nan
        with pytest.raises(ValueError):
            svr_fit(X, y, SvrHyperparams(kernel=KernelSpec("linear")))


class TestAgainstReferenceQp:
    """Small-scale QP oracle (cvxopt) built independently of the SMO path."""

    @staticmethod
    def reference_dual_objective(K, y, c, epsilon):
        cvxopt = pytest.importorskip("cvxopt")
        import cvxopt.solvers

        cvxopt.solvers.options["show_progress"] = False
        cvxopt.solvers.options["abstol"] = 1e-10
        cvxopt.solvers.options["reltol"] = 1e-10
        n = y.size
        P = np.block([[K, -K], [-K, K]])
        q = np.concatenate([epsilon - y, epsilon + y])
        G = np.vstack([-np.eye(2 * n), np.eye(2 * n)])
        h = np.concatenate([np.zeros(2 * n), np.full(2 * n, c)])
        A = np.concatenate([np.ones(n), -np.ones(n)])[None, :]
        sol = cvxopt.solvers.qp(
            cvxopt.matrix(P + 1e-10 * np.eye(2 * n)),
            cvxopt.matrix(q),
            cvxopt.matrix(G),
            cvxopt.matrix(h),
            cvxopt.matrix(A),
            cvxopt.matrix(np.zeros(1)),
        )
        z = np.asarray(sol["x"]).ravel()
        return float(0.5 * z @ (P @ z) + q @ z)

    @pytest.mark.parametrize("kind", ["linear", "poly", "rbf", "sigmoid"])
    def test_dual_objective_matches(self, kind):
        X, y = random_problem(17)
        spec = KernelSpec(kind=kind, gamma=0.3, coef0=0.5, degree=2)
        K = kernel_matrix(spec, X, X)
        lo = np.linalg.eigvalsh(K)[0]
        if lo < -1e-10:
            K = K + (abs(lo) + 1e-9) * np.eye(y.size)
        sol = solve_epsilon_svr(K, y, c=2.0, epsilon=0.1, tol=1e-4, max_iter=200_000)
        ref = self.reference_dual_objective(K, y, 2.0, 0.1)
        assert sol.converged
        assert abs(sol.dual_objective - ref) <= 1e-3 * max(abs(ref), 1e-9)
