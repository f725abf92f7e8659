"""Random forest regressor with per-split variance-reduction bookkeeping.

Trees are grown to purity (subject to ``min_leaf``) on bootstrap resamples,
choosing at each node the candidate split that removes the most response
variance. Every split records its weighted variance reduction so feature
importance can later be read straight off the trees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._util import readonly_array as _readonly

LEAF = -1


@dataclass(frozen=True)
class RfHyperparams:
    n_trees: int = 91
    max_features: float | int = 1.0 / 3.0  # fraction of M, or an absolute count
    min_leaf: int = 1
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if isinstance(self.max_features, int):
            if self.max_features < 1:
                raise ValueError("max_features count must be >= 1")
        elif not 0 < self.max_features <= 1:
            raise ValueError("max_features fraction must be in (0, 1]")

    def resolve_max_features(self, n_features: int) -> int:
        if isinstance(self.max_features, int):
            return min(self.max_features, n_features)
        return max(1, int(self.max_features * n_features))


@dataclass(frozen=True)
class TreeNodes:
    """Flat array representation of one binary regression tree.

    ``feature`` is -1 at leaves. ``gain`` holds each internal node's variance
    reduction weighted by its sample share of the training set.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    variance: np.ndarray
    n_node: np.ndarray
    gain: np.ndarray

    def __post_init__(self):
        for name in ("feature", "left", "right", "n_node"):
            object.__setattr__(self, name, _readonly(getattr(self, name), dtype=int))
        for name in ("threshold", "value", "variance", "gain"):
            object.__setattr__(self, name, _readonly(getattr(self, name), dtype=float))

    def predict(self, X: np.ndarray) -> np.ndarray:
        pos = np.zeros(X.shape[0], dtype=int)
        while True:
            feat = self.feature[pos]
            active = feat != LEAF
            if not np.any(active):
                break
            rows = np.nonzero(active)[0]
            go_left = X[rows, feat[rows]] <= self.threshold[pos[rows]]
            pos[rows] = np.where(go_left, self.left[pos[rows]], self.right[pos[rows]])
        return self.value[pos]


def _best_split(X, y, rows, candidates, min_leaf):
    """Exhaustive split search over the candidate features of one node.

    Returns (feature, threshold, left_rows, right_rows, sse_drop) or None.
    Ties resolve to the lowest feature index, then the lowest threshold.
    """
    n = rows.size
    Xn = X[np.ix_(rows, candidates)]
    order = np.argsort(Xn, axis=0, kind="stable")
    Xs = np.take_along_axis(Xn, order, axis=0)
    yn = y[rows]
    ys = yn[order]

    csum = np.cumsum(ys, axis=0)
    csq = np.cumsum(ys * ys, axis=0)
    # node totals in fixed row order, so costs do not depend on column order
    total_sum = yn.sum()
    total_sq = float(yn @ yn)

    counts = np.arange(1, n, dtype=float)[:, None]
    left_sse = csq[:-1] - csum[:-1] ** 2 / counts
    right_sse = (total_sq - csq[:-1]) - (total_sum - csum[:-1]) ** 2 / (n - counts)
    cost = left_sse + right_sse

    valid = Xs[:-1] < Xs[1:]
    if min_leaf > 1:
        sizes = np.arange(1, n)
        size_ok = (sizes >= min_leaf) & (n - sizes >= min_leaf)
        valid &= size_ok[:, None]
    cost = np.where(valid, cost, np.inf)
    best = cost.min()
    if not np.isfinite(best):
        return None

    # cost ties: prefer the lowest original feature index, then threshold
    positions, cols = np.nonzero(cost <= best + 1e-12 * max(1.0, abs(best)))
    thresholds = (Xs[positions, cols] + Xs[positions + 1, cols]) / 2.0
    pick = np.lexsort((thresholds, candidates[cols]))[0]
    col = cols[pick]
    pos = positions[pick]
    feature = int(candidates[col])
    threshold = float(thresholds[pick])

    node_order = order[:, col]
    left_rows = rows[node_order[: pos + 1]]
    right_rows = rows[node_order[pos + 1 :]]
    sse_drop = float(total_sq - total_sum**2 / n - cost[pos, col])
    return feature, threshold, left_rows, right_rows, sse_drop


def _grow_tree(X, y, rows, rng, max_features, min_leaf, n_total):
    feature, threshold, left, right = [], [], [], []
    value, variance, n_node, gain = [], [], [], []
    m = X.shape[1]

    def new_node(idx) -> int:
        node = len(feature)
        yn = y[idx]
        feature.append(LEAF)
        threshold.append(np.nan)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(yn.mean()))
        variance.append(float(yn.var()))
        n_node.append(idx.size)
        gain.append(0.0)
        return node

    # explicit stack, left child first, for a schedule-independent layout
    root = new_node(rows)
    stack = [(root, rows)]
    while stack:
        node, idx = stack.pop()
        if idx.size < 2 * min_leaf or variance[node] <= 0.0:
            continue
        candidates = np.sort(rng.choice(m, size=max_features, replace=False))
        found = _best_split(X, y, idx, candidates, min_leaf)
        if found is None:
            continue
        feat, thr, rows_l, rows_r, sse_drop = found
        feature[node] = feat
        threshold[node] = thr
        gain[node] = sse_drop / n_total
        node_l = new_node(rows_l)
        node_r = new_node(rows_r)
        left[node] = node_l
        right[node] = node_r
        stack.append((node_r, rows_r))
        stack.append((node_l, rows_l))

    return TreeNodes(
        feature=np.asarray(feature),
        threshold=np.asarray(threshold),
        left=np.asarray(left),
        right=np.asarray(right),
        value=np.asarray(value),
        variance=np.asarray(variance),
        n_node=np.asarray(n_node),
        gain=np.asarray(gain),
    )


@dataclass(frozen=True)
class RfModel:
    """Bagged regression trees; prediction is the per-tree mean."""

    trees: tuple
    n_features: int
    hyper: RfHyperparams

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.zeros(X.shape[0])
        for tree in self.trees:
            out += tree.predict(X)
        return out / len(self.trees)

    @property
    def complexity(self) -> int:
        """Total node count across the forest."""
        return int(sum(t.feature.size for t in self.trees))

    def feature_gains(self) -> np.ndarray:
        """Summed weighted variance reduction per feature over every split."""
        gains = np.zeros(self.n_features)
        for tree in self.trees:
            split = tree.feature != LEAF
            np.add.at(gains, tree.feature[split], tree.gain[split])
        return gains


def rf_fit(X, y, h: RfHyperparams) -> RfModel:
    """Grow the forest; per-tree seeds are pre-assigned so results do not
    depend on growth order."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise ValueError("X must be N x M and y length N")
    if X.shape[0] < 2:
        raise ValueError("need at least two training rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("inputs contain non-finite values")

    n = X.shape[0]
    max_features = h.resolve_max_features(X.shape[1])
    seeds = np.random.SeedSequence(h.seed).spawn(h.n_trees)
    trees = []
    for seq in seeds:
        rng = np.random.default_rng(seq)
        rows = rng.integers(0, n, size=n) if h.bootstrap else np.arange(n)
        trees.append(_grow_tree(X, y, rows, rng, max_features, h.min_leaf, n))
    return RfModel(trees=tuple(trees), n_features=X.shape[1], hyper=h)
