import numpy as np

from ..errors import DimensionMismatch, SingleClass


def as_matrix(X, d=None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1) if d in (None, 1) else X.reshape(-1, d)
    if X.ndim != 2:
        raise DimensionMismatch("X must be a 2-D matrix")
    if d is not None and X.shape[1] != d:
        raise DimensionMismatch(f"model expects {d} features, got {X.shape[1]}")
    return np.ascontiguousarray(X)


def validate_Xy(X, y):
    X = as_matrix(X)
    y = np.asarray(y).reshape(-1)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.shape[0]} labels")
    if X.shape[0] == 0:
        raise ValueError("cannot fit on zero rows")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")
    return X, y


def encode_labels(y):
    """Sorted distinct labels and each row's index into them."""
    classes, y_idx = np.unique(y, return_inverse=True)
    return classes, np.ascontiguousarray(y_idx, dtype=np.intp)


def require_classes(classes, what):
    if len(classes) < 2:
        raise SingleClass(f"{what} needs at least 2 classes, got {len(classes)}")


def argmax_rows(p) -> np.ndarray:
    # np.argmax returns the first maximum: smallest index on ties
    return np.argmax(p, axis=1)
