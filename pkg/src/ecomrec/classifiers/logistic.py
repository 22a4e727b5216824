"""One-vs-rest logistic regression trained by full-batch gradient descent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteLoss
from ._common import argmax_rows, as_matrix, encode_labels, require_classes, validate_Xy


def sigmoid(r):
    """Logistic function, evaluated on the branch that cannot overflow."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    pos = r >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-r[pos]))
    e = np.exp(r[~pos])
    out[~pos] = e / (1.0 + e)
    return out if out.ndim else float(out)


def log_loss(w, b, X, t) -> float:
    """Mean binary cross-entropy of ``sigmoid(X @ w + b)`` against 0/1 targets."""
    z = X @ w + b
    # log(1 + e^z) - t z
    return float(np.mean(np.logaddexp(0.0, z) - t * z))


def log_loss_grad(w, b, X, t):
    """Analytic gradient of :func:`log_loss`; returns ``(dw, db)``."""
    err = sigmoid(X @ w + b) - t
    n = X.shape[0]
    return X.T @ err / n, float(err.sum() / n)


@dataclass
class LrModel:
    classes: np.ndarray
    weights: np.ndarray  # (c, d)
    biases: np.ndarray  # (c,)
    learning_rate: float = 0.1
    max_iter: int = 1000
    tol: float = 1e-6
    n_iter: tuple = ()

    @property
    def n_features(self):
        return self.weights.shape[1]


def fit_binary(X, t, learning_rate=0.1, max_iter=1000, tol=1e-6, history=None):
    """Gradient descent from zero weights until the loss drop falls below ``tol``."""
    w = np.zeros(X.shape[1])
    b = 0.0
    loss = log_loss(w, b, X, t)
    if history is not None:
        history.append(loss)
    it = 0
    # divergence is detected below, so overflow here is not worth a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            dw, db = log_loss_grad(w, b, X, t)
            w = w - learning_rate * dw
            b = b - learning_rate * db
            new = log_loss(w, b, X, t)
            if not np.isfinite(new) or not np.all(np.isfinite(w)):
                raise NonFiniteLoss(f"loss diverged at iteration {it}; lower the learning rate")
            if history is not None:
                history.append(new)
            if loss - new < tol:
                loss = new
                break
            loss = new
    return w, b, it


def train_lr(X, y, learning_rate=0.1, max_iter=1000, tol=1e-6) -> LrModel:
    """One binary regressor per class. With two classes a single regressor is
    fitted and the class-0 scorer is its mirror image."""
    X, y = validate_Xy(X, y)
    classes, y_idx = encode_labels(y)
    require_classes(classes, "logistic regression")
    c, d = len(classes), X.shape[1]
    W = np.zeros((c, d))
    B = np.zeros(c)
    iters = []
    if c == 2:
        w, b, it = fit_binary(X, (y_idx == 1).astype(float), learning_rate, max_iter, tol)
        W[0], B[0], W[1], B[1] = -w, -b, w, b
        iters = [it, it]
    else:
        for k in range(c):
            W[k], B[k], it = fit_binary(X, (y_idx == k).astype(float), learning_rate, max_iter, tol)
            iters.append(it)
    return LrModel(classes, W, B, learning_rate, max_iter, tol, tuple(iters))


def predict_proba_lr(model: LrModel, X) -> np.ndarray:
    """Per-class sigmoid scores normalized to sum to one."""
    X = as_matrix(X, model.n_features)
    # log sigmoid(z) = -log(1 + e^-z); normalize in log-space so tiny scores survive
    log_s = -np.logaddexp(0.0, -(X @ model.weights.T + model.biases))
    log_s -= log_s.max(axis=1, keepdims=True)
    s = np.exp(log_s)
    return s / s.sum(axis=1, keepdims=True)


def predict_lr(model: LrModel, X) -> np.ndarray:
    return model.classes[argmax_rows(predict_proba_lr(model, X))]
