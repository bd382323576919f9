"""Binary regression tree with squared-error splits.

The weak learner behind both the boosted feature selector and the random
forest. Growth is greedy and top-down: at every node each candidate
feature is scanned at the midpoints between consecutive distinct sorted
values, and the split minimizing the summed squared error of the two
children wins. Ties go to the lowest feature index, then the smallest
threshold, so fitting is deterministic. Routing sends ``value <=
threshold`` to the left child.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, ShapeMismatch


@dataclass(frozen=True)
class TreeConfig:
    """Growth limits and feature sampling for one tree.

    ``feature_subset`` statically restricts the candidate features for the
    whole tree (boosting uses this). ``features_per_node`` draws that many
    candidates fresh at every node from the allowed set (forests use this).
    ``max_depth=None`` grows until the leaf minimum stops it.
    """

    max_depth: int | None = None
    min_samples_leaf: int = 1
    feature_subset: tuple[int, ...] | None = None
    features_per_node: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1 or None")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.features_per_node is not None and self.features_per_node < 1:
            raise ValueError("features_per_node must be >= 1 or None")
        if self.feature_subset is not None:
            object.__setattr__(self, "feature_subset", tuple(sorted(set(self.feature_subset))))


class Leaf:
    __slots__ = ("value", "n")

    def __init__(self, value: float, n: int):
        self.value = value
        self.n = n


class Internal:
    __slots__ = ("feature", "threshold", "left", "right")

    def __init__(self, feature: int, threshold: float, left, right):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right


class RegressionTree:
    """A fitted tree; immutable and safe to share across threads."""

    def __init__(self, root, n_features: int):
        self.root = root
        self.n_features = n_features

    def predict(self, x) -> float:
        """Route one feature vector to its leaf value."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_features,):
            raise ShapeMismatch(
                f"expected feature vector of length {self.n_features}, got {x.shape}"
            )
        node = self.root
        while isinstance(node, Internal):
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.value

    def predict_batch(self, X) -> np.ndarray:
        """Vectorized prediction for an (n, d) matrix."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeMismatch(
                f"expected (n, {self.n_features}) matrix, got {X.shape}"
            )
        out = np.empty(X.shape[0], dtype=np.float64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if isinstance(node, Leaf):
                out[idx] = node.value
            else:
                left = X[idx, node.feature] <= node.threshold
                stack.append((node.left, idx[left]))
                stack.append((node.right, idx[~left]))
        return out

    def features_used(self) -> set[int]:
        """Features appearing in at least one internal node."""
        used: set[int] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Internal):
                used.add(node.feature)
                stack.extend((node.left, node.right))
        return used

    def node_feature_counts(self) -> dict[int, int]:
        """Feature -> number of internal nodes splitting on it."""
        counts: dict[int, int] = {}
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Internal):
                counts[node.feature] = counts.get(node.feature, 0) + 1
                stack.extend((node.left, node.right))
        return counts

    def depth(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)

    def n_leaves(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 1
            return walk(node.left) + walk(node.right)

        return walk(self.root)

    # Serialization: a flat node list with child links by list index, root
    # at index 0. Stable format; see README.
    def to_dict(self) -> dict:
        nodes: list[dict] = []

        def emit(node) -> int:
            slot = len(nodes)
            nodes.append(None)
            if isinstance(node, Leaf):
                nodes[slot] = {"value": node.value, "n": node.n}
            else:
                left = emit(node.left)
                right = emit(node.right)
                nodes[slot] = {
                    "feature": node.feature,
                    "threshold": node.threshold,
                    "left": left,
                    "right": right,
                }
            return slot

        emit(self.root)
        return {"n_features": self.n_features, "nodes": nodes}

    @classmethod
    def from_dict(cls, payload: dict) -> "RegressionTree":
        nodes = payload["nodes"]

        def build(i: int):
            spec = nodes[i]
            if "value" in spec:
                return Leaf(float(spec["value"]), int(spec["n"]))
            return Internal(
                int(spec["feature"]),
                float(spec["threshold"]),
                build(spec["left"]),
                build(spec["right"]),
            )

        return cls(build(0), int(payload["n_features"]))


def fit_tree(X, y, cfg: TreeConfig = TreeConfig()) -> RegressionTree:
    """Grow a squared-error CART tree on ``(X, y)``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.size == 0 or y.size == 0:
        raise EmptyInput("cannot fit a tree on empty input")
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"X {X.shape} incompatible with y {y.shape}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data must be finite")

    n_features = X.shape[1]
    if cfg.feature_subset is not None:
        allowed = cfg.feature_subset
        if allowed and (allowed[0] < 0 or allowed[-1] >= n_features):
            raise ValueError(f"feature_subset out of range for {n_features} features")
    else:
        allowed = tuple(range(n_features))

    rng = np.random.default_rng(cfg.seed)
    root = _grow(X, y, np.arange(X.shape[0]), 0, cfg, allowed, rng)
    return RegressionTree(root, n_features)


def _grow(X, y, idx, depth, cfg, allowed, rng):
    y_node = y[idx]
    n = idx.size
    if (
        n < 2 * cfg.min_samples_leaf
        or (cfg.max_depth is not None and depth >= cfg.max_depth)
        or y_node.max() == y_node.min()
    ):
        return Leaf(float(y_node.mean()), int(n))

    candidates = allowed
    if cfg.features_per_node is not None and cfg.features_per_node < len(allowed):
        picked = rng.choice(len(allowed), size=cfg.features_per_node, replace=False)
        candidates = tuple(allowed[i] for i in sorted(picked.tolist()))

    best = _best_split(X, y_node, idx, candidates, cfg.min_samples_leaf)
    if best is None:
        return Leaf(float(y_node.mean()), int(n))

    feature, threshold = best
    left_mask = X[idx, feature] <= threshold
    left = _grow(X, y, idx[left_mask], depth + 1, cfg, allowed, rng)
    right = _grow(X, y, idx[~left_mask], depth + 1, cfg, allowed, rng)
    return Internal(feature, threshold, left, right)


def _best_split(X, y_node, idx, candidates, min_leaf):
    """Scan midpoint thresholds of each candidate; lowest total child SSE wins.

    Candidates must be in ascending order: ties on SSE keep the first
    (lowest) feature, and np.argmin keeps the smallest threshold within a
    feature.
    """
    n = y_node.size
    yc = y_node - y_node.mean()  # SSE is shift-invariant; centering helps precision
    best_sse = np.inf
    best = None
    positions = np.arange(1, n)
    for feature in candidates:
        x = X[idx, feature]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = yc[order]
        valid = xs[1:] > xs[:-1]
        if min_leaf > 1:
            valid &= (positions >= min_leaf) & (n - positions >= min_leaf)
        cut = np.nonzero(valid)[0]
        if cut.size == 0:
            continue
        c1 = np.cumsum(ys)
        c2 = np.cumsum(ys * ys)
        n_left = cut + 1.0
        n_right = n - n_left
        sum_left = c1[cut]
        sq_left = c2[cut]
        sse = (sq_left - sum_left * sum_left / n_left) + (
            (c2[-1] - sq_left) - (c1[-1] - sum_left) ** 2 / n_right
        )
        j = int(np.argmin(sse))
        if sse[j] < best_sse:
            best_sse = sse[j]
            best = (feature, float((xs[cut[j]] + xs[cut[j] + 1]) / 2.0))
    return best


def training_mse(tree: RegressionTree, X, y) -> float:
    y = np.asarray(y, dtype=np.float64)
    return float(np.mean((y - tree.predict_batch(X)) ** 2))
