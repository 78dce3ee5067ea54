"""Random forest over bag-of-words count features, built for one purpose:
an entropy-based ranking of the words that separate accepted from rejected
events.

Trees use axis-aligned threshold splits with information gain (entropy
impurity). All randomness flows from one explicit seed; identical inputs
and seed give bit-identical models, predictions, and rankings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "ForestParams",
    "TreeNode",
    "ForestModel",
    "FeatureRanking",
    "train_forest",
    "predict_proba",
    "training_accuracy",
    "rank_features",
]


@dataclass(frozen=True)
class ForestParams:
    """Forest hyperparameters. ``features_per_split=None`` means ceil(sqrt(m))."""

    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: int | None = None
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1 or self.min_samples_split < 1:
            raise ValueError("forest counts must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive or None")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be positive or None")

    def to_json(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "features_per_split": self.features_per_split,
            "bootstrap": self.bootstrap,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ForestParams":
        known = {k: doc[k] for k in doc if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class TreeNode:
    """Split node or leaf. Leaves keep class counts (negative, positive)."""

    counts: tuple[int, int]
    n_samples: int
    feature: int | None = None
    threshold: float | None = None
    gain: float = 0.0  # entropy decrease achieved by this split
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class ForestModel:
    trees: list[TreeNode]
    params: ForestParams
    seed: int
    n_features: int


@dataclass
class FeatureRanking:
    """Words ranked by normalized entropy importance, descending.

    Zero-importance words are omitted; when any split occurred the retained
    importances sum to 1. Exact ties order lexicographically by word.
    """

    entries: list[tuple[str, float]] = field(default_factory=list)

    def words(self) -> list[str]:
        return [word for word, _ in self.entries]


def _entropy(counts: tuple[int, int]) -> float:
    total = counts[0] + counts[1]
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def _class_counts(y: np.ndarray) -> tuple[int, int]:
    pos = int(y.sum())
    return (len(y) - pos, pos)


def _best_split(X: np.ndarray, y: np.ndarray, features: Sequence[int]):
    """Best (gain, feature, threshold) over the given features.

    Features are examined in the given (seeded random) order and only a
    strictly larger gain displaces the incumbent, so exact ties fall to
    whichever feature the permutation visited first; identically useful
    words then share importance across trees instead of one hoarding it.
    """
    parent = _entropy(_class_counts(y))
    n = len(y)
    best: tuple[float, int, float] | None = None
    for f in features:
        column = X[:, f]
        values = np.unique(column)
        if len(values) < 2:
            continue
        thresholds = (values[:-1] + values[1:]) / 2.0
        for thr in thresholds:
            mask = column <= thr
            n_left = int(mask.sum())
            if n_left == 0 or n_left == n:
                continue
            h_left = _entropy(_class_counts(y[mask]))
            h_right = _entropy(_class_counts(y[~mask]))
            gain = parent - (n_left / n) * h_left - ((n - n_left) / n) * h_right
            if gain <= 1e-12:
                continue
            if best is None or gain > best[0]:
                best = (gain, f, float(thr))
    return best


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    depth: int,
    params: ForestParams,
    k_features: int,
    rng: np.random.Generator,
) -> TreeNode:
    counts = _class_counts(y)
    node = TreeNode(counts=counts, n_samples=len(y))
    if (
        counts[0] == 0
        or counts[1] == 0
        or len(y) < params.min_samples_split
        or (params.max_depth is not None and depth >= params.max_depth)
    ):
        return node

    m = X.shape[1]
    order = rng.permutation(m).tolist()
    best = _best_split(X, y, order[: min(k_features, m)])
    if best is None and k_features < m:
        # No gainful split among the sampled features; fall back to all of
        # them so a separating word is never missed just by subsampling.
        best = _best_split(X, y, order)
    if best is None:
        return node

    gain, feature, threshold = best
    mask = X[:, feature] <= threshold
    node.feature = feature
    node.threshold = threshold
    node.gain = gain
    node.left = _grow(X[mask], y[mask], depth + 1, params, k_features, rng)
    node.right = _grow(X[~mask], y[~mask], depth + 1, params, k_features, rng)
    return node


def train_forest(ts, params: ForestParams = ForestParams(), seed: int = 0) -> ForestModel:
    """Train a forest on a TrainingSet (positives vs negatives).

    Deterministic for fixed (ts, params, seed). Requires at least one
    positive and one negative bag.
    """
    X, y = ts.design_matrix()
    if not (y == 1).any() or not (y == 0).any():
        raise ValueError("training requires at least one positive and one negative")
    m = X.shape[1]
    k = params.features_per_split or max(1, math.ceil(math.sqrt(m)))
    n = X.shape[0]
    trees: list[TreeNode] = []
    for t in range(params.n_trees):
        rng = np.random.default_rng([seed, t])
        if params.bootstrap:
            idx = rng.integers(0, n, size=n)
        else:
            idx = np.arange(n)
        trees.append(_grow(X[idx], y[idx], 0, params, k, rng))
    return ForestModel(trees=trees, params=params, seed=seed, n_features=m)


def _leaf_for(node: TreeNode, row: np.ndarray) -> TreeNode:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node


def predict_proba(model: ForestModel, X: np.ndarray) -> np.ndarray:
    """Mean over trees of the leaf positive-class fraction, one per row."""
    probs = np.zeros(len(X))
    for i, row in enumerate(X):
        acc = 0.0
        for tree in model.trees:
            leaf = _leaf_for(tree, row)
            total = leaf.counts[0] + leaf.counts[1]
            acc += (leaf.counts[1] / total) if total else 0.5
        probs[i] = acc / len(model.trees)
    return probs


def training_accuracy(model: ForestModel, ts) -> float:
    X, y = ts.design_matrix()
    pred = (predict_proba(model, X) >= 0.5).astype(int)
    return float((pred == y).mean())


def _tree_importances(tree: TreeNode, m: int) -> np.ndarray:
    """Per-feature sum of entropy decreases, weighted by the fraction of the
    tree's samples reaching each split."""
    acc = np.zeros(m)
    root_n = tree.n_samples

    def walk(node: TreeNode) -> None:
        if node.is_leaf:
            return
        acc[node.feature] += (node.n_samples / root_n) * node.gain
        walk(node.left)
        walk(node.right)

    if root_n:
        walk(tree)
    return acc


def rank_features(model: ForestModel, ts) -> FeatureRanking:
    """Entropy ranking of vocabulary words for a trained model.

    importance(word) = mean over trees of the weighted entropy decrease at
    splits on that word, normalized to sum 1. A forest with no splits
    yields an empty ranking.
    """
    m = model.n_features
    totals = np.zeros(m)
    for tree in model.trees:
        totals += _tree_importances(tree, m)
    totals /= len(model.trees)
    total_sum = totals.sum()
    if total_sum <= 0:
        return FeatureRanking([])
    totals /= total_sum
    vocab = ts.vocabulary
    entries = [(vocab[i], float(totals[i])) for i in range(m) if totals[i] > 0]
    entries.sort(key=lambda item: (-item[1], item[0]))
    return FeatureRanking(entries)
