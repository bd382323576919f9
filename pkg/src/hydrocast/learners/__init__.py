"""Five regression models behind one fit/predict contract.

Each model trains on the matrix restricted to the selected features and
is immutable afterwards; prediction accepts vectors in that same
restricted column order. All randomness flows from the spec's seed.
"""

from __future__ import annotations

import numpy as np

from ..errors import DuplicateKind
from .base import (
    KIND_ORDER,
    KNN,
    LR,
    MLP,
    RF,
    SVR,
    DEFAULT_CONFIGS,
    FittedModel,
    KNNConfig,
    LearnerSpec,
    LRConfig,
    MLPConfig,
    RFConfig,
    Standardization,
    SVRConfig,
    default_specs,
)
from .forest import RFModel, fit_rf
from .linear import LRModel, fit_lr
from .mlp import MLPModel, fit_mlp
from .neighbors import KNNModel, fit_knn
from .svm import SVRModel, fit_svr

__all__ = [
    "KIND_ORDER", "RF", "KNN", "SVR", "LR", "MLP",
    "LearnerSpec", "FittedModel", "Standardization",
    "RFConfig", "KNNConfig", "SVRConfig", "LRConfig", "MLPConfig",
    "RFModel", "KNNModel", "SVRModel", "LRModel", "MLPModel",
    "default_specs", "fit", "predict", "fit_all",
    "model_to_dict", "model_from_dict",
]

_MODEL_CLASSES = {
    RF: RFModel,
    KNN: KNNModel,
    SVR: SVRModel,
    LR: LRModel,
    MLP: MLPModel,
}


def fit(spec: LearnerSpec, X_train, y_train, feature_indices=None) -> FittedModel:
    """Train one model on the feature-restricted training matrix."""
    X = np.asarray(X_train, dtype=np.float64)
    y = np.asarray(y_train, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X {X.shape} incompatible with y {y.shape}")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training samples")
    if X.shape[1] < 1:
        raise ValueError("need at least 1 feature")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data must be finite")
    if feature_indices is None:
        feature_indices = range(X.shape[1])
    feature_indices = tuple(feature_indices)
    if len(feature_indices) != X.shape[1]:
        raise ValueError("feature_indices must match the matrix width")

    if spec.kind == LR:
        return fit_lr(spec.hyper, X, y, feature_indices)
    if spec.kind == KNN:
        return fit_knn(spec.hyper, X, y, feature_indices)
    if spec.kind == RF:
        return fit_rf(spec.hyper, X, y, feature_indices, spec.seed)
    if spec.kind == SVR:
        return fit_svr(spec.hyper, X, y, feature_indices, spec.seed)
    if spec.kind == MLP:
        return fit_mlp(spec.hyper, X, y, feature_indices, spec.seed)
    raise ValueError(f"unknown learner kind: {spec.kind!r}")


def predict(model: FittedModel, x) -> float:
    """Deterministic prediction for one feature-restricted vector."""
    return model.predict(x)


def fit_all(specs, X_train, y_train, feature_indices=None) -> dict[str, FittedModel]:
    """Train every spec; error messages are tagged with the failing kind."""
    seen = set()
    for spec in specs:
        if spec.kind in seen:
            raise DuplicateKind(f"duplicate learner kind: {spec.kind!r}")
        seen.add(spec.kind)

    models: dict[str, FittedModel] = {}
    for spec in specs:
        try:
            models[spec.kind] = fit(spec, X_train, y_train, feature_indices)
        except Exception as exc:
            exc.args = (f"[{spec.kind}] {exc}",)
            raise
    return models


def model_to_dict(model: FittedModel) -> dict:
    return model.to_dict()


def model_from_dict(payload: dict) -> FittedModel:
    kind = payload["kind"]
    if kind not in _MODEL_CLASSES:
        raise ValueError(f"unknown learner kind in payload: {kind!r}")
    return _MODEL_CLASSES[kind].from_dict(payload)
