"""Two-phase feature selection: colinearity pruning, then boosted ranking.

Phase one drops the later column of every pair whose cosine similarity
magnitude reaches ``gamma``; only surviving columns may knock out later
ones, which keeps the scan idempotent. Phase two fits staged gradient
boosting where every stage adds the average of 100 shallow trees fitted
to the current residuals, each tree drawing its own random feature
subset. Features are then ranked by how many trees split on them at
least once, and the top ``kappa`` move on to model training.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cart import RegressionTree, TreeConfig, fit_tree
from .errors import (
    EmptyInput,
    LengthMismatch,
    NonFiniteResidual,
    ZeroNormColumn,
    ZeroNormVector,
)

L2 = "l2"
L1_AS_PRINTED = "l1_as_printed"


@dataclass(frozen=True)
class ColinearityConfig:
    """Threshold and norm for the pairwise cosine filter.

    The standard L2 cosine is the default: identical columns score exactly
    1 and the threshold behaves as a correlation-like cutoff. The
    ``l1_as_printed`` variant divides by L1 norms instead; it scores
    identical columns below 1, so duplicates can evade the cutoff, and is
    kept only for side-by-side experiments.
    """

    gamma: float = 0.9
    norm: str = L2

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.norm not in (L2, L1_AS_PRINTED):
            raise ValueError(f"unknown norm: {self.norm!r}")


@dataclass(frozen=True)
class BoostConfig:
    """Staged boosting schedule for the selector.

    Every stage fits ``trees_per_stage`` trees to the residuals and adds
    ``shrinkage`` times their average to the running model. Stages stop at
    ``max_stages`` or when the relative training-MSE improvement falls
    below ``stop_tolerance``. Each tree sees a random feature subset of
    ``feature_subset_size`` columns (default: ceil(sqrt(n_features))),
    drawn from a seed derived per (stage, tree).
    """

    trees_per_stage: int = 100
    max_stages: int = 10
    shrinkage: float = 1.0
    stop_tolerance: float = 1e-4
    weak_tree: TreeConfig = field(default_factory=lambda: TreeConfig(max_depth=3, min_samples_leaf=5))
    feature_subset_size: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.trees_per_stage < 1:
            raise ValueError("trees_per_stage must be >= 1")
        if self.max_stages < 1:
            raise ValueError("max_stages must be >= 1")
        if self.shrinkage <= 0:
            raise ValueError("shrinkage must be > 0")
        if self.stop_tolerance < 0:
            raise ValueError("stop_tolerance must be >= 0")


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of the full pruning + boosting + ranking pass.

    All indices are 0-based columns of the matrix handed to
    :func:`run_selection` (equal to catalog_index - 1 for full-catalog
    matrices). ``occurrence`` maps every surviving column to its per-tree
    use count; pruned columns are absent.
    """

    kept_after_prune: tuple[int, ...]
    dropped_pairs: tuple[tuple[int, int, float], ...]
    occurrence: dict[int, int]
    top_k: tuple[int, ...]
    kappa: int
    training_mse_per_stage: tuple[float, ...]
    n_stages: int

    @property
    def occurrence_total(self) -> int:
        return sum(self.occurrence.values())


class BoostedModel:
    """Stagewise sum: mean(y) plus shrinkage times each stage's tree average."""

    def __init__(self, base: float, stages, shrinkage: float, n_features: int,
                 training_mse_per_stage):
        self.base = base
        self.stages = stages  # list of lists of RegressionTree
        self.shrinkage = shrinkage
        self.n_features = n_features
        self.training_mse_per_stage = list(training_mse_per_stage)

    def predict_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.full(X.shape[0], self.base, dtype=np.float64)
        for trees in self.stages:
            stage_sum = np.zeros(X.shape[0])
            for tree in trees:
                stage_sum += tree.predict_batch(X)
            out += self.shrinkage * stage_sum / len(trees)
        return out

    def iter_trees(self):
        for trees in self.stages:
            yield from trees


def cosine_similarity(f_i, f_j, norm: str = L2) -> float:
    """Inner product over the product of vector norms."""
    a = np.asarray(f_i, dtype=np.float64)
    b = np.asarray(f_j, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size < 1:
        raise LengthMismatch(f"vectors must share a length >= 1: {a.shape} vs {b.shape}")
    if norm == L2:
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
    elif norm == L1_AS_PRINTED:
        na, nb = np.abs(a).sum(), np.abs(b).sum()
    else:
        raise ValueError(f"unknown norm: {norm!r}")
    if na == 0.0 or nb == 0.0:
        raise ZeroNormVector("cosine undefined for zero-norm vectors")
    return float(a @ b / (na * nb))


def prune_colinear(X, cfg: ColinearityConfig = ColinearityConfig()):
    """Drop near-colinear columns, keeping the earlier of each pair.

    Scans ordered pairs (i, j), i < j, in column order. A column j is
    dropped the first time a *surviving* earlier column i matches it with
    |cos| >= gamma; the triple (i, j, cos) is recorded. Returns
    ``(kept, dropped_pairs)`` with kept columns in their original order.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError(f"expected a (n, d) matrix with d >= 1, got {X.shape}")
    if X.shape[0] < 1:
        raise EmptyInput("cannot prune an empty matrix")

    if cfg.norm == L2:
        norms = np.linalg.norm(X, axis=0)
    else:
        norms = np.abs(X).sum(axis=0)
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise ZeroNormColumn(int(zero[0]))

    cos = (X.T @ X) / np.outer(norms, norms)
    d = X.shape[1]
    dropped = np.zeros(d, dtype=bool)
    pairs: list[tuple[int, int, float]] = []
    for i in range(d):
        if dropped[i]:
            continue
        hits = np.nonzero(~dropped[i + 1:] & (np.abs(cos[i, i + 1:]) >= cfg.gamma))[0]
        for off in hits.tolist():
            j = i + 1 + off
            dropped[j] = True
            pairs.append((i, j, float(cos[i, j])))
    kept = tuple(int(i) for i in np.nonzero(~dropped)[0])
    return kept, tuple(pairs)


def fit_boosted(X, y, cfg: BoostConfig = BoostConfig()) -> BoostedModel:
    """Stagewise residual fitting with 100-tree stages.

    Stage 0 is the constant mean of ``y``. Each later stage fits its trees
    to the current residuals over the full sample (no bootstrap), averages
    their predictions into the stage output h, and updates the model by
    ``shrinkage * h``. The recorded training MSE per stage never increases:
    every tree's leaf means cannot raise the SSE of the residuals they fit,
    and neither can their convex average.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.size == 0 or y.size == 0:
        raise EmptyInput("cannot boost on empty input")
    if X.shape[0] != y.shape[0] or y.ndim != 1:
        raise LengthMismatch(f"X {X.shape} incompatible with y {y.shape}")
    if X.shape[0] < 2:
        raise ValueError("boosting needs at least 2 samples")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data must be finite")

    n, d = X.shape
    subset_size = cfg.feature_subset_size or math.ceil(math.sqrt(d))
    subset_size = min(subset_size, d)

    current = np.full(n, y.mean())
    mse = [float(np.mean((y - current) ** 2))]
    stages: list[list[RegressionTree]] = []

    for stage in range(cfg.max_stages):
        if mse[-1] == 0.0:
            break
        residual = y - current
        if not np.isfinite(residual).all():
            raise NonFiniteResidual(f"residuals diverged at stage {stage}")
        trees = []
        stage_sum = np.zeros(n)
        for t in range(cfg.trees_per_stage):
            tree_seed = np.random.SeedSequence([cfg.seed, stage, t])
            rng = np.random.default_rng(tree_seed)
            subset = tuple(sorted(rng.choice(d, size=subset_size, replace=False).tolist()))
            tree_cfg = TreeConfig(
                max_depth=cfg.weak_tree.max_depth,
                min_samples_leaf=cfg.weak_tree.min_samples_leaf,
                feature_subset=subset,
                features_per_node=cfg.weak_tree.features_per_node,
                seed=int(rng.integers(2**63)),
            )
            tree = fit_tree(X, residual, tree_cfg)
            trees.append(tree)
            stage_sum += tree.predict_batch(X)
        current = current + cfg.shrinkage * stage_sum / cfg.trees_per_stage
        stages.append(trees)
        mse.append(float(np.mean((y - current) ** 2)))
        prev, new = mse[-2], mse[-1]
        if prev > 0 and (prev - new) / prev < cfg.stop_tolerance:
            break

    return BoostedModel(float(y.mean()), stages, cfg.shrinkage, d, mse)


def rank_features(model: BoostedModel, per_node: bool = False) -> dict[int, int]:
    """Occurrence count per feature over all fitted trees.

    Default counts each feature once per tree that splits on it; with
    ``per_node`` every internal node counts. Unused features appear with
    count 0.
    """
    counts = {f: 0 for f in range(model.n_features)}
    for tree in model.iter_trees():
        if per_node:
            for f, c in tree.node_feature_counts().items():
                counts[f] += c
        else:
            for f in tree.features_used():
                counts[f] += 1
    return counts


def select_top_k(occurrence: dict[int, int], kappa: int) -> tuple[int, ...]:
    """Indices with the highest counts; ties to the lower index, zeros excluded."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    ranked = sorted(
        (f for f, c in occurrence.items() if c > 0),
        key=lambda f: (-occurrence[f], f),
    )
    return tuple(ranked[:kappa])


@dataclass(frozen=True)
class SelectionConfig:
    colinearity: ColinearityConfig = field(default_factory=ColinearityConfig)
    boost: BoostConfig = field(default_factory=BoostConfig)
    kappa: int = 10


def run_selection(X, y, cfg: SelectionConfig = SelectionConfig()) -> SelectionResult:
    """Prune colinear columns, boost on the survivors, rank, take top kappa.

    Occurrence counts and selected indices refer to columns of ``X``;
    pruned columns can never appear in ``top_k``.
    """
    X = np.asarray(X, dtype=np.float64)
    kept, dropped = prune_colinear(X, cfg.colinearity)
    model = fit_boosted(X[:, kept], y, cfg.boost)
    pruned_counts = rank_features(model)
    occurrence = {kept[pos]: count for pos, count in pruned_counts.items()}
    top = select_top_k(occurrence, cfg.kappa)
    return SelectionResult(
        kept_after_prune=kept,
        dropped_pairs=dropped,
        occurrence=occurrence,
        top_k=top,
        kappa=cfg.kappa,
        training_mse_per_stage=tuple(model.training_mse_per_stage),
        n_stages=len(model.stages),
    )
