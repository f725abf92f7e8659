import sys, time

sys.path.insert(0, "src")
import numpy as np
from spexplain.models.kernels import KernelSpec, kernel_matrix
from spexplain.models.svr import solve_epsilon_svr, svr_fit, SvrHyperparams

import cvxopt
import cvxopt.solvers

cvxopt.solvers.options["show_progress"] = False
cvxopt.solvers.options["abstol"] = 1e-10
cvxopt.solvers.options["reltol"] = 1e-10


def reference_qp(K, y, c, eps):
    n = y.size
    P = np.block([[K, -K], [-K, K]])
    # tiny ridge for cvxopt numerical rank
    P = P + 1e-10 * np.eye(2 * n)
    q = np.concatenate([eps - y, eps + y])
    G = np.vstack([-np.eye(2 * n), np.eye(2 * n)])
    h = np.concatenate([np.zeros(2 * n), np.full(2 * n, c)])
    A = np.concatenate([np.ones(n), -np.ones(n)])[None, :]
    b = np.zeros(1)
    sol = cvxopt.solvers.qp(
        cvxopt.matrix(P), cvxopt.matrix(q), cvxopt.matrix(G), cvxopt.matrix(h),
        cvxopt.matrix(A), cvxopt.matrix(b),
    )
    z = np.asarray(sol["x"]).ravel()
    obj = 0.5 * z @ (np.block([[K, -K], [-K, K]]) @ z) + q @ z
    return obj, z


rng = np.random.default_rng(0)
t0 = time.time()
kinds = ["linear", "poly", "rbf", "sigmoid"]
worst = 0.0
for trial in range(25):
    kind = kinds[trial % 4]
    r = np.random.default_rng(1000 + trial)
    X = r.standard_normal((20, 5))
    y = X @ r.standard_normal(5) + 0.3 * r.standard_normal(20)
    spec = KernelSpec(kind=kind, gamma=0.3, coef0=0.5, degree=2)
    K = kernel_matrix(spec, X, X)
    # ensure PSD for the convex reference (sigmoid can be indefinite)
    evals = np.linalg.eigvalsh(K)
    if evals[0] < -1e-10:
        K = K + (abs(evals[0]) + 1e-9) * np.eye(20)
    c, eps = 2.0, 0.1
    sol = solve_epsilon_svr(K, y, c=c, epsilon=eps, tol=1e-4, max_iter=200000)
    ref_obj, z = reference_qp(K, y, c, eps)
    rel = abs(sol.dual_objective - ref_obj) / max(abs(ref_obj), 1e-9)
    worst = max(worst, rel)
    print(f"{trial:2d} {kind:8s} smo={sol.dual_objective: .6f} ref={ref_obj: .6f} rel={rel:.2e} iters={sol.n_iter} kkt={sol.kkt_violation:.2e} conv={sol.converged}")
print("worst rel:", worst, "elapsed:", time.time() - t0)

# exact-fit sanity: y = 2x
X = np.array([[0.0], [1.0], [2.0]])
y = np.array([0.0, 2.0, 4.0])
m = svr_fit(X, y, SvrHyperparams(kernel=KernelSpec("linear"), c=1000.0, epsilon=0.01, tol=1e-3))
res = np.abs(m.predict(X) - y)
print("linear tube residuals:", res, "ok:", np.all(res <= 0.01 + 1e-3))

# constant target
yc = np.full(4, 3.3)
Xc = np.arange(8.0).reshape(4, 2)
mc = svr_fit(Xc, yc, SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.5), c=1.0, epsilon=0.2))
print("constant: nsv=", mc.complexity, "pred=", mc.predict(Xc))

# objective monotonicity
r = np.random.default_rng(7)
X = r.standard_normal((15, 3))
y = r.standard_normal(15)
mm = svr_fit(X, y, SvrHyperparams(kernel=KernelSpec("rbf", gamma=0.7), c=5.0, epsilon=0.05), record_objective=True)
d = np.diff(mm.objective_curve)
print("monotone:", np.all(d >= -1e-9), "min step:", d.min() if d.size else None)
