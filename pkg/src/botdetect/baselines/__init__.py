"""Classical baselines: logistic regression, SGD linear, random forest,
AdaBoost, and a small feed-forward net.

All baselines consume standardized features; the standardizer is always fit
on training data and stored with the model. Fits are deterministic under the
config seed; a fixed epoch budget means non-convergence returns the final
state rather than raising.
"""

from __future__ import annotations

import numpy as np

from ..data import FeatureMatrix, Standardizer
from .boost import ensemble_training_error, fit_adaboost, predict_adaboost
from .common import (
    BaselineConfig,
    BaselineKind,
    BaselineModel,
    load_baseline,
    rows_for_prediction,
    save_baseline,
    validate_training_matrix,
)
from .forest import fit_forest, predict_forest
from .linear import fit_logreg, fit_sgd, predict_logreg, predict_sgd
from .mlp import fit_mlp, mlp_forward

__all__ = [
    "BaselineConfig",
    "BaselineKind",
    "BaselineModel",
    "ensemble_training_error",
    "fit",
    "load_baseline",
    "predict_proba",
    "save_baseline",
]


def fit(kind: BaselineKind, matrix: FeatureMatrix,
        config: BaselineConfig | None = None) -> BaselineModel:
    """Train a baseline of the given kind on a feature matrix."""
    kind = BaselineKind(kind)
    config = config or BaselineConfig()
    validate_training_matrix(matrix)
    standardizer = Standardizer.fit(matrix.features)
    x = standardizer.transform(matrix.features)
    y = matrix.labels.astype(np.float64)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    if kind == BaselineKind.LOGREG:
        params = fit_logreg(x, y, config)
    elif kind == BaselineKind.SGD:
        params = fit_sgd(x, y, config, rng)
    elif kind == BaselineKind.FOREST:
        params = fit_forest(x, y, config)
    elif kind == BaselineKind.ADABOOST:
        params = fit_adaboost(x, y, config)
    else:
        params = fit_mlp(x, y, config, rng)
    return BaselineModel(
        kind=kind,
        schema=matrix.schema,
        standardizer=standardizer,
        config=config,
        params=params,
    )


def predict_proba(model: BaselineModel, rows) -> np.ndarray:
    """Bot probability for each row; rows must match the training schema."""
    x = rows_for_prediction(model, rows)
    if model.kind == BaselineKind.LOGREG:
        return predict_logreg(model.params, x)
    if model.kind == BaselineKind.SGD:
        return predict_sgd(model.params, x)
    if model.kind == BaselineKind.FOREST:
        return predict_forest(model.params, x)
    if model.kind == BaselineKind.ADABOOST:
        return predict_adaboost(model.params, x)
    return mlp_forward(model.params, x)
