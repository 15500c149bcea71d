"""Supervised detection models: training, evaluation, persistence, ablation.

Five model families share one train/predict surface. Linear and Gaussian
models standardize features by default; tree ensembles see raw values
(their splits are scale-free). Trained models serialize to a versioned
JSON document whose content hash becomes the model id.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import ConfigError, DataError
from ..features import (FeatureConfig, ScalerParams, apply_scaler, fit_scaler,
                        metadata_values)
from ..ingest import ArticleMetadata
from .evalutil import (EvalReport, LabeledExample, accuracy_from_confusion,
                       confusion_matrix, example_matrix, roc_auc,
                       stratified_kfold, stratified_split)
from .models import (GaussianNBModel, LinearSVMModel, LogisticRegressionModel,
                     logistic_loss_and_grad)
from .trees import GradientBoostedTreesModel, RandomForestModel

SCHEMA_VERSION = 1

_MODEL_CLASSES = {
    "logreg": LogisticRegressionModel,
    "linear-svm": LinearSVMModel,
    "gnb": GaussianNBModel,
    "random-forest": RandomForestModel,
    "gbt": GradientBoostedTreesModel,
}
MODEL_TYPES = tuple(_MODEL_CLASSES)

# Scale-sensitive models standardize unless the feature config overrides.
STANDARDIZE_DEFAULT = {
    "logreg": True,
    "linear-svm": True,
    "gnb": True,
    "random-forest": False,
    "gbt": False,
}

ABLATION_SETS = ("A", "B", "C", "D", "E", "A+B", "C+D+E", "All")


def ablation_fields(set_name: str) -> str:
    if set_name == "All":
        return "ABCDE"
    return "".join(sorted(set_name.replace("+", "")))


def _build_inner(model_type: str, seed: int, hyperparams: dict | None):
    if model_type not in _MODEL_CLASSES:
        raise ConfigError(f"unknown model type {model_type!r}; "
                          f"expected one of {MODEL_TYPES}")
    hp = dict(hyperparams or {})
    if model_type in ("linear-svm", "random-forest"):
        hp.setdefault("seed", seed)
    return _MODEL_CLASSES[model_type](**hp)


@dataclass
class TrainedModel:
    model_type: str
    inner: object
    feature_config: FeatureConfig
    scaler: ScalerParams | None
    training_summary: dict
    schema_version: int = SCHEMA_VERSION
    model_id: str | None = None

    def _prepare(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        expected = self.training_summary.get("feature_dim")
        if expected is not None and X.shape[1] != expected:
            raise DataError(f"model expects feature dim {expected}, got {X.shape[1]}")
        if self.scaler is not None:
            X = apply_scaler(X, self.scaler)
        return X

    def scores(self, X: np.ndarray) -> np.ndarray:
        return self.inner.scores(self._prepare(X))

    def predict(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(labels, scores); label is 1 when score >= 0.5."""
        scores = self.scores(X)
        return (scores >= 0.5).astype(int), scores


def train(model_type: str, examples: Sequence[LabeledExample],
          feature_config: FeatureConfig | None = None, seed: int = 0,
          hyperparams: dict | None = None) -> TrainedModel:
    """Fit one model on labeled examples, standardizing per its default."""
    X, y = example_matrix(examples)
    class_counts = {c: int((y == c).sum()) for c in (0, 1)}
    if min(class_counts.values()) == 0:
        raise DataError("training set must contain both classes")
    feature_config = feature_config or FeatureConfig()
    standardize = feature_config.standardize
    if standardize is None:
        standardize = STANDARDIZE_DEFAULT[model_type]
    scaler = fit_scaler(X) if standardize else None
    if scaler is not None:
        X = apply_scaler(X, scaler)
    inner = _build_inner(model_type, seed, hyperparams)
    inner.fit(X, y)
    summary = {
        "n_examples": len(examples),
        "class_counts": class_counts,
        "feature_dim": X.shape[1],
        "seed": seed,
        "standardized": scaler is not None,
    }
    model = TrainedModel(model_type=model_type, inner=inner,
                         feature_config=feature_config, scaler=scaler,
                         training_summary=summary)
    model.model_id = compute_model_id(model)
    return model


def evaluate(model: TrainedModel, test: Sequence[LabeledExample],
             cv_fold_accuracies: Sequence[float] | None = None) -> EvalReport:
    """Accuracy, confusion matrix, and ROC-AUC on a held-out set.

    A single-class test set still yields accuracy and confusion; AUC is
    reported as None since it is undefined there.
    """
    X, y = example_matrix(test)
    labels, scores = model.predict(X)
    confusion = confusion_matrix(y, labels)
    try:
        auc = roc_auc(y, scores)
    except DataError:
        auc = None
    return EvalReport(
        accuracy=accuracy_from_confusion(confusion),
        confusion=confusion,
        roc_auc=auc,
        cv_fold_accuracies=list(cv_fold_accuracies or []),
    )


def cross_validate(model_type: str, examples: Sequence[LabeledExample],
                   k: int = 5, seed: int = 0,
                   hyperparams: dict | None = None) -> list[float]:
    """Per-fold accuracies under stratified k-fold cross-validation."""
    folds = stratified_kfold(examples, k=k, seed=seed)
    accuracies = []
    for held_out in folds:
        held = set(held_out)
        train_set = [ex for i, ex in enumerate(examples) if i not in held]
        test_set = [examples[i] for i in held_out]
        model = train(model_type, train_set, seed=seed, hyperparams=hyperparams)
        accuracies.append(evaluate(model, test_set).accuracy)
    return accuracies


def run_ablation(items: Sequence[tuple[ArticleMetadata, int]], model_type: str,
                 ablation_sets: Sequence[str] = ABLATION_SETS,
                 test_fraction: float = 0.2, seed: int = 0,
                 hyperparams: dict | None = None) -> dict[str, float]:
    """Test accuracy per metadata feature set, one fixed-seed split each."""
    from ..features import FeatureVector

    results: dict[str, float] = {}
    for set_name in ablation_sets:
        fields = ablation_fields(set_name)
        config = FeatureConfig(mode="metadata", metadata_fields=fields)
        examples = [
            LabeledExample(FeatureVector(i, metadata_values(meta, config.metadata_fields)),
                           label)
            for i, (meta, label) in enumerate(items)
        ]
        train_set, test_set = stratified_split(examples, test_fraction, seed)
        model = train(model_type, train_set, feature_config=config, seed=seed,
                      hyperparams=hyperparams)
        results[set_name] = evaluate(model, test_set).accuracy
    return results


def _canonical_doc(model: TrainedModel) -> dict:
    return {
        "schema_version": model.schema_version,
        "model_type": model.model_type,
        "feature_config": model.feature_config.to_json_dict(),
        "scaler": model.scaler.to_json_dict() if model.scaler else None,
        "parameters": model.inner.params(),
        "training_summary": model.training_summary,
    }


def compute_model_id(model: TrainedModel) -> str:
    blob = json.dumps(_canonical_doc(model), sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def save_model(model: TrainedModel, path) -> str:
    """Write the versioned JSON document; returns the content-hash model id."""
    doc = _canonical_doc(model)
    model.model_id = compute_model_id(model)
    doc["model_id"] = model.model_id
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return model.model_id


def load_model(path) -> TrainedModel:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"model file not found: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported model schema version: {version!r}")
    model_type = doc["model_type"]
    if model_type not in _MODEL_CLASSES:
        raise ConfigError(f"unknown model type in file: {model_type!r}")
    inner = _MODEL_CLASSES[model_type].from_params(doc["parameters"])
    scaler = ScalerParams.from_json_dict(doc["scaler"]) if doc.get("scaler") else None
    model = TrainedModel(
        model_type=model_type,
        inner=inner,
        feature_config=FeatureConfig.from_json_dict(doc["feature_config"]),
        scaler=scaler,
        training_summary=doc.get("training_summary", {}),
        schema_version=version,
        model_id=doc.get("model_id"),
    )
    return model


__all__ = [
    "ABLATION_SETS",
    "EvalReport",
    "LabeledExample",
    "MODEL_TYPES",
    "TrainedModel",
    "ablation_fields",
    "accuracy_from_confusion",
    "compute_model_id",
    "confusion_matrix",
    "cross_validate",
    "evaluate",
    "example_matrix",
    "load_model",
    "logistic_loss_and_grad",
    "roc_auc",
    "run_ablation",
    "save_model",
    "stratified_kfold",
    "stratified_split",
    "train",
]
