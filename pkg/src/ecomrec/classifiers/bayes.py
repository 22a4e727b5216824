"""Gaussian naive Bayes with log-space posteriors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._common import argmax_rows, as_matrix, encode_labels, require_classes, validate_Xy

VAR_SMOOTHING = 1e-9


@dataclass
class GnbModel:
    classes: np.ndarray
    priors: np.ndarray  # (c,)
    means: np.ndarray  # (c, d)
    variances: np.ndarray  # (c, d), floor already added
    epsilon: float

    @property
    def n_features(self):
        return self.means.shape[1]


def train_gnb(X, y, var_smoothing=VAR_SMOOTHING) -> GnbModel:
    """Per-class priors, means and population variances.

    ``var_smoothing`` times the largest per-feature variance is added to every
    variance so constant features never divide by zero.
    """
    X, y = validate_Xy(X, y)
    classes, y_idx = encode_labels(y)
    require_classes(classes, "Gaussian naive Bayes")
    c, d = len(classes), X.shape[1]
    means = np.zeros((c, d))
    variances = np.zeros((c, d))
    counts = np.bincount(y_idx, minlength=c)
    for k in range(c):
        Xk = X[y_idx == k]
        means[k] = Xk.mean(axis=0)
        variances[k] = Xk.var(axis=0)
    max_var = X.var(axis=0).max() if d else 0.0
    eps = var_smoothing * max_var if max_var > 0 else var_smoothing
    return GnbModel(classes, counts / counts.sum(), means, variances + eps, float(eps))


def joint_log_likelihood(model: GnbModel, X) -> np.ndarray:
    X = as_matrix(X, model.n_features)
    jll = np.empty((X.shape[0], len(model.classes)))
    for k in range(len(model.classes)):
        var = model.variances[k]
        ll = -0.5 * np.sum(np.log(2.0 * np.pi * var)) - 0.5 * np.sum((X - model.means[k]) ** 2 / var, axis=1)
        jll[:, k] = np.log(model.priors[k]) + ll
    return jll


def predict_proba_gnb(model: GnbModel, X) -> np.ndarray:
    jll = joint_log_likelihood(model, X)
    jll -= jll.max(axis=1, keepdims=True)
    p = np.exp(jll)
    return p / p.sum(axis=1, keepdims=True)


def predict_gnb(model: GnbModel, X) -> np.ndarray:
    # argmax on the log-joint avoids ties created by exp underflow
    return model.classes[argmax_rows(joint_log_likelihood(model, X))]
