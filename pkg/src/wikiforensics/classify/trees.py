"""Tree ensembles: bagged Gini forests and second-order boosted trees.

Split thresholds are always actual feature values with an ``x <= t`` rule,
so predictions depend only on the ordering of each feature, never on its
scale. Trees serialize to plain nested dicts.
"""

from __future__ import annotations

import numpy as np

from .. import _kernels
from .models import _sigmoid


def _majority(y: np.ndarray) -> int:
    ones = int(y.sum())
    return 1 if ones * 2 >= len(y) else 0


def _predict_tree(node: dict, X: np.ndarray) -> np.ndarray:
    out = np.empty(len(X))
    stack = [(node, np.arange(len(X)))]
    while stack:
        nd, idx = stack.pop()
        if "value" in nd:
            out[idx] = nd["value"]
            continue
        go_left = X[idx, nd["feature"]] <= nd["threshold"]
        stack.append((nd["left"], idx[go_left]))
        stack.append((nd["right"], idx[~go_left]))
    return out


def _grow_gini_tree(X: np.ndarray, y: np.ndarray, idx: np.ndarray, depth: int,
                    max_depth: int, min_leaf: int, n_candidates: int,
                    rng: np.random.Generator) -> dict:
    labels = y[idx]
    if depth >= max_depth or len(idx) < 2 * min_leaf or labels.min() == labels.max():
        return {"value": _majority(labels)}
    d = X.shape[1]
    if n_candidates < d:
        candidates = np.sort(rng.choice(d, size=n_candidates, replace=False))
    else:
        candidates = np.arange(d)
    best = (np.inf, -1, 0.0)  # (impurity, feature, threshold)
    labels8 = labels.astype(np.int8)
    for f in candidates:
        col = X[idx, f]
        order = np.argsort(col, kind="stable")
        split_i, impurity = _kernels.best_split_gini(
            np.ascontiguousarray(col[order]),
            np.ascontiguousarray(labels8[order]), min_leaf)
        if split_i >= 0 and impurity < best[0]:
            best = (impurity, int(f), float(col[order[split_i]]))
    if best[1] < 0:
        return {"value": _majority(labels)}
    _, feature, threshold = best
    mask = X[idx, feature] <= threshold
    return {
        "feature": feature,
        "threshold": threshold,
        "left": _grow_gini_tree(X, y, idx[mask], depth + 1, max_depth,
                                min_leaf, n_candidates, rng),
        "right": _grow_gini_tree(X, y, idx[~mask], depth + 1, max_depth,
                                 min_leaf, n_candidates, rng),
    }


class RandomForestModel:
    """Bagged depth-limited Gini trees voting by majority.

    Each tree trains on a bootstrap resample and considers sqrt(d) features
    per split; the returned score is the fraction of trees voting class 1.
    """

    kind = "random-forest"

    def __init__(self, n_trees: int = 100, max_depth: int = 16, min_leaf: int = 1,
                 seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed
        self.trees: list[dict] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestModel":
        n, d = X.shape
        n_candidates = max(1, int(np.sqrt(d)))
        self.trees = []
        for ss in np.random.SeedSequence(self.seed).spawn(self.n_trees):
            rng = np.random.default_rng(ss)
            sample = rng.integers(0, n, size=n)
            self.trees.append(_grow_gini_tree(X, y, sample, 0, self.max_depth,
                                              self.min_leaf, n_candidates, rng))
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(len(X))
        for tree in self.trees:
            votes += _predict_tree(tree, X)
        return votes / len(self.trees)

    def params(self) -> dict:
        return {"trees": self.trees, "n_trees": self.n_trees,
                "max_depth": self.max_depth, "min_leaf": self.min_leaf,
                "seed": self.seed}

    @classmethod
    def from_params(cls, doc: dict) -> "RandomForestModel":
        model = cls(n_trees=doc["n_trees"], max_depth=doc["max_depth"],
                    min_leaf=doc["min_leaf"], seed=doc["seed"])
        model.trees = doc["trees"]
        return model


def _grow_boost_tree(X: np.ndarray, grad: np.ndarray, hess: np.ndarray,
                     idx: np.ndarray, depth: int, max_depth: int,
                     min_leaf: int, leaf_l2: float) -> dict:
    def leaf() -> dict:
        g = float(grad[idx].sum())
        h = float(hess[idx].sum())
        return {"value": -g / (h + leaf_l2)}

    if depth >= max_depth or len(idx) < 2 * min_leaf:
        return leaf()
    best = (0.0, -1, 0.0)  # (gain, feature, threshold)
    for f in range(X.shape[1]):
        col = X[idx, f]
        order = np.argsort(col, kind="stable")
        split_i, gain = _kernels.best_split_gain(
            np.ascontiguousarray(col[order]),
            np.ascontiguousarray(grad[idx][order]),
            np.ascontiguousarray(hess[idx][order]),
            leaf_l2, min_leaf)
        if split_i >= 0 and gain > best[0]:
            best = (gain, int(f), float(col[order[split_i]]))
    if best[1] < 0:
        return leaf()
    _, feature, threshold = best
    mask = X[idx, feature] <= threshold
    return {
        "feature": feature,
        "threshold": threshold,
        "left": _grow_boost_tree(X, grad, hess, idx[mask], depth + 1,
                                 max_depth, min_leaf, leaf_l2),
        "right": _grow_boost_tree(X, grad, hess, idx[~mask], depth + 1,
                                  max_depth, min_leaf, leaf_l2),
    }


class GradientBoostedTreesModel:
    """Boosted regression trees on the logistic loss.

    Each round fits a tree to the first/second-order loss statistics; leaf
    weights are the regularized Newton step -G/(H + l2), scaled by the
    shrinkage rate. ``train_losses_`` records the mean training loss after
    every round.
    """

    kind = "gbt"

    def __init__(self, n_rounds: int = 100, max_depth: int = 6,
                 shrinkage: float = 0.3, leaf_l2: float = 1.0, min_leaf: int = 1):
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.shrinkage = shrinkage
        self.leaf_l2 = leaf_l2
        self.min_leaf = min_leaf
        self.trees: list[dict] = []
        self.train_losses_: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GradientBoostedTreesModel":
        n = len(y)
        raw = np.zeros(n)
        idx = np.arange(n)
        self.trees = []
        self.train_losses_ = []
        for _ in range(self.n_rounds):
            p = _sigmoid(raw)
            grad = p - y
            hess = p * (1.0 - p)
            tree = _grow_boost_tree(X, grad, hess, idx, 0, self.max_depth,
                                    self.min_leaf, self.leaf_l2)
            raw += self.shrinkage * _predict_tree(tree, X)
            self.trees.append(tree)
            z = 2.0 * y - 1.0
            self.train_losses_.append(float(np.mean(np.logaddexp(0.0, -z * raw))))
        return self

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        raw = np.zeros(len(X))
        for tree in self.trees:
            raw += self.shrinkage * _predict_tree(tree, X)
        return raw

    def scores(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.raw_scores(X))

    def params(self) -> dict:
        return {"trees": self.trees, "n_rounds": self.n_rounds,
                "max_depth": self.max_depth, "shrinkage": self.shrinkage,
                "leaf_l2": self.leaf_l2, "min_leaf": self.min_leaf}

    @classmethod
    def from_params(cls, doc: dict) -> "GradientBoostedTreesModel":
        model = cls(n_rounds=doc["n_rounds"], max_depth=doc["max_depth"],
                    shrinkage=doc["shrinkage"], leaf_l2=doc["leaf_l2"],
                    min_leaf=doc["min_leaf"])
        model.trees = doc["trees"]
        return model
