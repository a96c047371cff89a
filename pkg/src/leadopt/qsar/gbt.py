"""Least-squares gradient-boosted regression trees, from scratch.

Each round fits an axis-aligned regression tree to the residuals of the
running prediction. Split finding is exact greedy over sorted unique feature
values (midpoint thresholds), vectorized across features; ties in gain break
toward the lowest feature index, then the lowest threshold, so training is
bit-reproducible. Leaf values are mean residuals, applied with shrinkage.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from leadopt.errors import DimensionMismatchError, InsufficientDataError

log = logging.getLogger(__name__)

MIN_TRAIN_SAMPLES = 10


@dataclass(frozen=True)
class GbtParams:
    n_trees: int = 300
    max_depth: int = 4
    learning_rate: float = 0.1
    min_leaf: int = 3
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "learning_rate": self.learning_rate,
            "min_leaf": self.min_leaf,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbtParams":
        return cls(**data)


@dataclass
class Tree:
    """Flat node arrays; feature -1 marks a leaf."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict_one(self, x: np.ndarray) -> float:
        node = 0
        while self.feature[node] >= 0:
            node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
        return self.value[node]

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        for i, row in enumerate(X):
            out[i] = self.predict_one(row)
        return out

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "value": self.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tree":
        return cls(**data)


@dataclass
class GbtModel:
    trees: list[Tree]
    learning_rate: float
    base_prediction: float
    feature_view: str
    n_features: int
    params: GbtParams
    train_mse: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "view": self.feature_view,
            "params": self.params.to_dict(),
            "learning_rate": self.learning_rate,
            "base_prediction": self.base_prediction,
            "n_features": self.n_features,
            "train_mse": self.train_mse,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbtModel":
        return cls(
            trees=[Tree.from_dict(t) for t in data["trees"]],
            learning_rate=data["learning_rate"],
            base_prediction=data["base_prediction"],
            feature_view=data["view"],
            n_features=data["n_features"],
            params=GbtParams.from_dict(data["params"]),
            train_mse=data["train_mse"],
        )


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int):
    """(feature, threshold, gain) maximizing SSE reduction, or None."""
    n, d = X.shape
    if n < 2 * min_leaf:
        return None
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    ys = y[order]
    left_sum = np.cumsum(ys, axis=0)[:-1]          # (n-1, d)
    total = y.sum()
    counts = np.arange(1, n, dtype=np.float64)[:, None]
    right_sum = total - left_sum

    score = left_sum ** 2 / counts + right_sum ** 2 / (n - counts)
    valid = (
        (xs[:-1] < xs[1:])
        & (counts >= min_leaf)
        & ((n - counts) >= min_leaf)
    )
    score = np.where(valid, score, -np.inf)

    per_feature_pos = score.argmax(axis=0)          # first max: lowest threshold
    per_feature_score = score[per_feature_pos, np.arange(d)]
    best_f = int(per_feature_score.argmax())        # first max: lowest index
    best_score = per_feature_score[best_f]
    if not np.isfinite(best_score):
        return None
    gain = best_score - total ** 2 / n
    if gain <= 1e-12:
        return None
    pos = per_feature_pos[best_f]
    threshold = 0.5 * (xs[pos, best_f] + xs[pos + 1, best_f])
    return best_f, float(threshold), float(gain)


def _fit_tree(X: np.ndarray, y: np.ndarray, max_depth: int, min_leaf: int) -> Tree:
    tree = Tree()

    def build(idx: np.ndarray, depth: int) -> int:
        node = tree._new_node()
        yn = y[idx]
        tree.value[node] = float(yn.mean())
        if depth >= max_depth:
            return node
        found = _best_split(X[idx], yn, min_leaf)
        if found is None:
            return node
        f, threshold, _ = found
        mask = X[idx, f] <= threshold
        tree.feature[node] = f
        tree.threshold[node] = threshold
        tree.left[node] = build(idx[mask], depth + 1)
        tree.right[node] = build(idx[~mask], depth + 1)
        return node

    build(np.arange(len(y)), 0)
    return tree


def train_gbt(features, labels, params: GbtParams, feature_view: str = "generic") -> GbtModel:
    """Boost least-squares trees on residuals; MSE is recorded per round."""
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError("features must be a 2-D array")
    if len(X) != len(y):
        raise DimensionMismatchError("features and labels differ in length")
    if len(X) < MIN_TRAIN_SAMPLES:
        raise InsufficientDataError(
            f"need at least {MIN_TRAIN_SAMPLES} samples, got {len(X)}"
        )
    if not np.all(np.isfinite(y)):
        raise InsufficientDataError("labels must be finite")

    base = float(y.mean())
    model = GbtModel(
        trees=[],
        learning_rate=params.learning_rate,
        base_prediction=base,
        feature_view=feature_view,
        n_features=X.shape[1],
        params=params,
    )

    # Constant columns can never host a split; drop them up front and remap
    # stored feature indices afterwards (selection order is unchanged, so
    # tie-breaking is unaffected).
    active = np.flatnonzero(X.min(axis=0) != X.max(axis=0))
    if active.size == 0:
        if y.std() > 0:
            log.warning(
                "all %s features are constant with varying labels; "
                "returning base-prediction-only model", feature_view,
            )
        model.train_mse = [float(((y - base) ** 2).mean())]
        return model
    Xa = np.ascontiguousarray(X[:, active])

    current = np.full(len(y), base)
    model.train_mse.append(float(((y - current) ** 2).mean()))
    for _ in range(params.n_trees):
        residual = y - current
        tree = _fit_tree(Xa, residual, params.max_depth, params.min_leaf)
        tree.feature = [
            int(active[f]) if f >= 0 else -1 for f in tree.feature
        ]
        model.trees.append(tree)
        current = current + params.learning_rate * tree.predict(X)
        model.train_mse.append(float(((y - current) ** 2).mean()))
    return model


def predict(model: GbtModel, features) -> float:
    """base + learning_rate * sum of tree outputs, for one vector."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1 or len(x) != model.n_features:
        raise DimensionMismatchError(
            f"expected {model.n_features} features, got shape {x.shape}"
        )
    total = model.base_prediction
    for tree in model.trees:
        total += model.learning_rate * tree.predict_one(x)
    return float(total)


def predict_many(model: GbtModel, features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatchError(
            f"expected (n, {model.n_features}) features, got shape {X.shape}"
        )
    out = np.full(len(X), model.base_prediction)
    for tree in model.trees:
        out += model.learning_rate * tree.predict(X)
    return out


class GbtRegressor(BaseEstimator, RegressorMixin):
    """Scikit-learn style wrapper around the boosted-tree trainer."""

    def __init__(self, n_trees: int = 300, max_depth: int = 4,
                 learning_rate: float = 0.1, min_leaf: int = 3, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        params = GbtParams(
            n_trees=self.n_trees,
            max_depth=self.max_depth,
            learning_rate=self.learning_rate,
            min_leaf=self.min_leaf,
            seed=self.seed,
        )
        self.model_ = train_gbt(X, y, params)
        return self

    def predict(self, X):
        if not hasattr(self, "model_"):
            raise NotFittedError("GbtRegressor is not fitted")
        return predict_many(self.model_, X)
