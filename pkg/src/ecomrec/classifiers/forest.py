"""Random forest: bootstrap-aggregated trees with per-node feature subsampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadHyperparameters
from ._common import as_matrix, encode_labels, validate_Xy
from .tree import DtModel, grow_tree, predict_index


@dataclass
class RfModel:
    trees: list[DtModel]
    classes: np.ndarray
    n_features: int
    n_trees: int
    features_per_split: int
    bootstrap: bool
    seed: int
    max_depth: int | None = None
    min_samples: int = 2


def train_rf(X, y, n_trees=100, features_per_split=None, bootstrap=True, seed=0,
             max_depth=None, min_samples=2, categorical=None) -> RfModel:
    """Fit ``n_trees`` trees on bootstrap resamples.

    Each tree draws from its own generator spawned off ``SeedSequence(seed)``,
    so the forest does not depend on the order trees are built in. At each
    node ``features_per_split`` (default ceil(sqrt(d))) candidates are drawn
    without replacement from the features that are not constant there.
    """
    X, y = validate_Xy(X, y)
    n, d = X.shape
    if n < 2:
        raise BadHyperparameters("random forest needs at least 2 rows")
    if not isinstance(n_trees, (int, np.integer)) or n_trees < 1:
        raise BadHyperparameters(f"n_trees must be a positive integer, got {n_trees!r}")
    if features_per_split is None:
        features_per_split = math.ceil(math.sqrt(d))
    if not 1 <= features_per_split <= d:
        raise BadHyperparameters(f"features_per_split must lie in [1, {d}], got {features_per_split}")
    categorical = tuple(bool(c) for c in (categorical if categorical is not None else [False] * d))
    classes, y_idx = encode_labels(y)
    c = len(classes)

    trees = []
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        if features_per_split == d:
            chooser = None
        else:
            def chooser(node_idx, rng=rng):
                # draw only among features that vary within the node
                rows = X[node_idx]
                live = np.flatnonzero(rows.min(axis=0) != rows.max(axis=0))
                if live.size <= features_per_split:
                    return live.astype(np.intp)
                return np.sort(rng.choice(live, size=features_per_split, replace=False)).astype(np.intp)
        root = grow_tree(X, y_idx, idx, c, categorical, max_depth, min_samples, chooser)
        trees.append(DtModel(root, classes, d, categorical, max_depth, min_samples))
    return RfModel(trees, classes, d, n_trees, features_per_split, bool(bootstrap), int(seed),
                   max_depth, min_samples)


def vote(tree_predictions: np.ndarray, n_classes: int) -> np.ndarray:
    """Majority vote over a (trees x rows) array of class indices; ties go to
    the smallest index."""
    votes = np.zeros((tree_predictions.shape[1], n_classes), dtype=np.int64)
    rows = np.arange(tree_predictions.shape[1])
    for pred in tree_predictions:
        np.add.at(votes, (rows, pred), 1)
    return np.argmax(votes, axis=1)


def predict_proba_rf(model: RfModel, X) -> np.ndarray:
    """Vote shares per class."""
    X = as_matrix(X, model.n_features)
    preds = np.array([predict_index(t.root, X) for t in model.trees])
    votes = np.zeros((X.shape[0], len(model.classes)))
    for pred in preds:
        votes[np.arange(X.shape[0]), pred] += 1
    return votes / len(model.trees)


def predict_rf(model: RfModel, X) -> np.ndarray:
    X = as_matrix(X, model.n_features)
    preds = np.array([predict_index(t.root, X) for t in model.trees]).reshape(len(model.trees), X.shape[0])
    return model.classes[vote(preds, len(model.classes))]
