"""Split protocol and evaluation metrics.

Stratified 80/20 splits use largest-remainder rounding of per-class test
quotas; stratified k-fold deals each class round-robin so fold proportions
stay within one example of the global mix. ROC-AUC uses the rank
(Mann-Whitney) formulation with ties counted one half.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DataError
from ..features import FeatureVector


@dataclass
class LabeledExample:
    features: FeatureVector
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise DataError(f"labels must be 0 or 1, got {self.label!r}")


def example_matrix(examples: Sequence[LabeledExample]) -> tuple[np.ndarray, np.ndarray]:
    if not examples:
        raise DataError("no examples")
    X = np.vstack([ex.features.values for ex in examples]).astype(np.float64)
    y = np.array([ex.label for ex in examples], dtype=np.float64)
    return X, y


def _class_indices(examples: Sequence[LabeledExample]) -> dict[int, list[int]]:
    by_class: dict[int, list[int]] = {}
    for i, ex in enumerate(examples):
        by_class.setdefault(ex.label, []).append(i)
    return by_class


def stratified_split(examples: Sequence[LabeledExample], test_fraction: float = 0.2,
                     seed: int = 0) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """Disjoint, exhaustive train/test split preserving class proportions."""
    if not 0.0 <= test_fraction < 1.0:
        raise DataError("test_fraction must be in [0, 1)")
    by_class = _class_indices(examples)
    for label, idxs in by_class.items():
        if len(idxs) < 2:
            raise DataError(f"class {label} has fewer than 2 examples")
    target = int(len(examples) * test_fraction + 0.5)
    labels = sorted(by_class)
    quotas = {c: len(by_class[c]) * test_fraction for c in labels}
    take = {c: int(quotas[c]) for c in labels}
    leftover = target - sum(take.values())
    remainders = sorted(labels, key=lambda c: (-(quotas[c] - take[c]), c))
    for c in remainders[:max(0, leftover)]:
        take[c] += 1
    rng = random.Random(seed)
    test_idx: list[int] = []
    train_idx: list[int] = []
    for c in labels:
        idxs = list(by_class[c])
        rng.shuffle(idxs)
        test_idx.extend(idxs[:take[c]])
        train_idx.extend(idxs[take[c]:])
    rng.shuffle(test_idx)
    rng.shuffle(train_idx)
    return [examples[i] for i in train_idx], [examples[i] for i in test_idx]


def stratified_kfold(examples: Sequence[LabeledExample], k: int = 5,
                     seed: int = 0) -> list[list[int]]:
    """k disjoint index folds with per-fold class counts within +/-1 of even.

    Classes smaller than k are allowed (their members spread over the first
    folds, which keeps the proportion bound); a class must still have at
    least 2 members so no training complement can lose it entirely.
    """
    if k < 2:
        raise DataError("k must be >= 2")
    if k > len(examples):
        raise DataError(f"k={k} exceeds the {len(examples)} available examples")
    by_class = _class_indices(examples)
    for label, idxs in by_class.items():
        if len(idxs) < 2:
            raise DataError(f"class {label} has fewer than 2 examples")
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in sorted(by_class):
        idxs = list(by_class[label])
        rng.shuffle(idxs)
        for j, idx in enumerate(idxs):
            folds[(offset + j) % k].append(idx)
        offset += len(idxs)
    return folds


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray) -> list[list[int]]:
    """2x2 matrix indexed [actual][predicted]."""
    m = [[0, 0], [0, 0]]
    for t, p in zip(y_true, y_pred):
        m[int(t)][int(p)] += 1
    return m


def accuracy_from_confusion(confusion: list[list[int]]) -> float:
    total = sum(sum(row) for row in confusion)
    if total == 0:
        raise DataError("empty confusion matrix")
    return (confusion[0][0] + confusion[1][1]) / total


def roc_auc(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Rank-based AUC; tied scores contribute one half per pair."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(y_true.sum())
    n_neg = len(y_true) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC-AUC is undefined for a single-class set")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum_pos = float(ranks[y_true == 1].sum())
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass
class EvalReport:
    accuracy: float
    confusion: list[list[int]]
    roc_auc: float | None
    cv_fold_accuracies: list[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "roc_auc": self.roc_auc,
            "cv_fold_accuracies": self.cv_fold_accuracies,
        }
