"""The four classifiers behind one contract: ``train_*(X, y, **hp)`` returns a
model and ``predict(model, X)`` returns labels from the training label set."""
from ._backend import BACKEND
from .bayes import GnbModel, predict_gnb, predict_proba_gnb, train_gnb
from .forest import RfModel, predict_proba_rf, predict_rf, train_rf
from .logistic import LrModel, predict_lr, predict_proba_lr, sigmoid, train_lr
from .serialize import dumps, loads, model_from_dict, model_kind, model_to_dict
from .tree import (
    DtModel,
    entropy,
    information_gain,
    predict_dt,
    predict_proba_dt,
    train_dt,
)

MODEL_KINDS = ("rf", "dt", "gnb", "lr")

TRAINERS = {"gnb": train_gnb, "lr": train_lr, "dt": train_dt, "rf": train_rf}
_PREDICTORS = {GnbModel: predict_gnb, LrModel: predict_lr, DtModel: predict_dt, RfModel: predict_rf}
_PROBA = {GnbModel: predict_proba_gnb, LrModel: predict_proba_lr, DtModel: predict_proba_dt,
          RfModel: predict_proba_rf}

# hyperparameters each trainer accepts, with defaults
HYPERPARAMETERS = {
    "gnb": {"var_smoothing": 1e-9},
    "lr": {"learning_rate": 0.1, "max_iter": 1000, "tol": 1e-6},
    "dt": {"max_depth": None, "min_samples": 2},
    "rf": {"n_trees": 100, "features_per_split": None, "bootstrap": True, "seed": 0,
           "max_depth": None, "min_samples": 2},
}
USES_CATEGORICAL = {"dt", "rf"}


def train(kind, X, y, categorical=None, **hp):
    if kind not in TRAINERS:
        raise ValueError(f"unknown model kind {kind!r}; choose from {sorted(TRAINERS)}")
    unknown = set(hp) - set(HYPERPARAMETERS[kind])
    if unknown:
        raise ValueError(f"{kind}: unknown hyperparameters {sorted(unknown)}")
    if kind in USES_CATEGORICAL and categorical is not None:
        hp["categorical"] = categorical
    return TRAINERS[kind](X, y, **hp)


def predict(model, X):
    return _PREDICTORS[type(model)](model, X)


def predict_proba(model, X):
    return _PROBA[type(model)](model, X)
