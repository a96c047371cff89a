"""Boosted-tree activity models and consensus prediction."""

from leadopt.qsar.ensemble import (
    VIEWS,
    EnsemblePredictor,
    consensus_mean,
    consensus_predict,
    consensus_predict_batch,
    train_ensemble,
    view_features,
)
from leadopt.qsar.evaluate import CvReport, cross_validate, fold_indices, regression_metrics
from leadopt.qsar.gbt import (
    GbtModel,
    GbtParams,
    GbtRegressor,
    Tree,
    predict,
    predict_many,
    train_gbt,
)

__all__ = [
    "VIEWS",
    "CvReport",
    "EnsemblePredictor",
    "GbtModel",
    "GbtParams",
    "GbtRegressor",
    "Tree",
    "consensus_mean",
    "consensus_predict",
    "consensus_predict_batch",
    "cross_validate",
    "fold_indices",
    "predict",
    "predict_many",
    "regression_metrics",
    "train_ensemble",
    "train_gbt",
    "view_features",
]
