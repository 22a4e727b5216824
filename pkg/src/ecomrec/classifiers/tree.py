"""ID3-style decision tree with multiway categorical and binary numeric splits."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import BadPartition, DimensionMismatch, EmptySet
from . import _backend
from ._common import as_matrix, encode_labels, validate_Xy


def entropy(labels: Sequence) -> float:
    """Shannon entropy in bits of a label multiset."""
    n = len(labels)
    if n == 0:
        raise EmptySet("entropy of an empty set is undefined")
    h = 0.0
    for count in Counter(labels).values():
        p = count / n
        h -= p * math.log2(p)
    return h


def information_gain(labels: Sequence, partition: Sequence[Sequence]) -> float:
    """Parent entropy minus the size-weighted entropy of the partition's subsets."""
    if Counter(labels) != Counter(v for subset in partition for v in subset):
        raise BadPartition("partition does not cover the labels exactly")
    if any(len(s) == 0 for s in partition):
        raise BadPartition("partition contains an empty subset")
    n = len(labels)
    return entropy(labels) - sum(len(s) / n * entropy(s) for s in partition)


class Leaf:
    __slots__ = ("label", "distribution")

    def __init__(self, label, distribution):
        self.label = label
        self.distribution = distribution


class Node:
    """Internal node. ``threshold`` is None for a multiway categorical split,
    in which case ``children`` maps feature value -> subtree; otherwise
    ``children`` is ``[left (x <= threshold), right]``."""

    __slots__ = ("feature", "threshold", "children", "label", "distribution")

    def __init__(self, feature, threshold, children, label, distribution):
        self.feature = feature
        self.threshold = threshold
        self.children = children
        self.label = label
        self.distribution = distribution


@dataclass
class DtModel:
    root: Leaf | Node
    classes: np.ndarray
    n_features: int
    categorical: tuple[bool, ...]
    max_depth: int | None = None
    min_samples: int = 2
    feature_sampler: object = field(default=None, repr=False, compare=False)

    def depth(self) -> int:
        def _depth(node):
            if isinstance(node, Leaf):
                return 0
            kids = node.children.values() if node.threshold is None else node.children
            return 1 + max(_depth(k) for k in kids)
        return _depth(self.root)

    def n_leaves(self) -> int:
        def _count(node):
            if isinstance(node, Leaf):
                return 1
            kids = node.children.values() if node.threshold is None else node.children
            return sum(_count(k) for k in kids)
        return _count(self.root)


def _majority(counts: np.ndarray) -> int:
    return int(np.argmax(counts))  # first max: smallest class index


def grow_tree(X, y_idx, idx, n_classes, categorical, max_depth, min_samples,
              choose_features=None, backend=None):
    """Grow a tree over rows ``idx`` of ``X`` with class indices ``y_idx``.

    ``choose_features(idx)`` returns the sorted candidate features for the
    node holding rows ``idx``; by default every feature is a candidate.
    """
    impl = backend or _backend.impl
    d = X.shape[1]
    all_features = np.arange(d, dtype=np.intp)
    cat = np.asarray(categorical, dtype=np.uint8)

    def build(idx, depth):
        counts = np.bincount(y_idx[idx], minlength=n_classes)
        label = _majority(counts)
        dist = counts.tolist()
        if (
            np.count_nonzero(counts) <= 1
            or (max_depth is not None and depth >= max_depth)
            or len(idx) < min_samples
        ):
            return Leaf(label, dist)
        feats = all_features if choose_features is None else choose_features(idx)
        f, thr, gain = impl.best_split(X, y_idx, idx, feats, cat, n_classes)
        if f < 0:
            return Leaf(label, dist)
        col = X[idx, f]
        if cat[f]:
            children = {}
            for v in np.unique(col):
                children[float(v)] = build(idx[col == v], depth + 1)
            return Node(int(f), None, children, label, dist)
        mask = col <= thr
        return Node(int(f), float(thr),
                    [build(idx[mask], depth + 1), build(idx[~mask], depth + 1)],
                    label, dist)

    return build(np.ascontiguousarray(idx, dtype=np.intp), 0)


def root_split(X, y, categorical=None):
    """``(feature, threshold, gain)`` that :func:`train_dt` would choose at the
    root; feature is -1 when every feature is constant."""
    X, y = validate_Xy(X, y)
    classes, y_idx = encode_labels(y)
    d = X.shape[1]
    cat = np.asarray(categorical if categorical is not None else [False] * d, dtype=np.uint8)
    return _backend.impl.best_split(X, y_idx, np.arange(len(y), dtype=np.intp),
                                    np.arange(d, dtype=np.intp), cat, len(classes))


def train_dt(X, y, max_depth=None, min_samples=2, categorical=None) -> DtModel:
    """Fit a decision tree by greedy information-gain splitting.

    ``categorical`` flags the columns split multiway by distinct value; all
    other columns get binary midpoint thresholds.
    """
    X, y = validate_Xy(X, y)
    if max_depth is not None and max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    classes, y_idx = encode_labels(y)
    d = X.shape[1]
    categorical = tuple(bool(c) for c in (categorical if categorical is not None else [False] * d))
    if len(categorical) != d:
        raise DimensionMismatch(f"categorical mask has {len(categorical)} entries, X has {d} columns")
    root = grow_tree(X, y_idx, np.arange(len(y)), len(classes), categorical, max_depth, min_samples)
    return DtModel(root, classes, d, categorical, max_depth, min_samples)


def terminal_nodes(root, X) -> list:
    """The node each row stops at: its leaf, or the categorical node whose
    branches do not cover the row's value."""
    out = [None] * X.shape[0]

    def route(node, idx):
        if idx.size == 0:
            return
        if isinstance(node, Leaf):
            for i in idx:
                out[i] = node
            return
        col = X[idx, node.feature]
        if node.threshold is None:
            seen = np.zeros(idx.size, dtype=bool)
            for v, child in node.children.items():
                m = col == v
                seen |= m
                route(child, idx[m])
            for i in idx[~seen]:
                out[i] = node
        else:
            m = col <= node.threshold
            route(node.children[0], idx[m])
            route(node.children[1], idx[~m])

    route(root, np.arange(X.shape[0]))
    return out


def predict_index(root, X) -> np.ndarray:
    """Class indices (into the model's ``classes``) for each row of X."""
    return np.fromiter((n.label for n in terminal_nodes(root, X)), dtype=np.intp, count=X.shape[0])


def predict_dt(model: DtModel, X) -> np.ndarray:
    X = as_matrix(X, model.n_features)
    return model.classes[predict_index(model.root, X)]


def predict_proba_dt(model: DtModel, X) -> np.ndarray:
    """Class frequencies at each row's terminal node."""
    X = as_matrix(X, model.n_features)
    dist = np.array([n.distribution for n in terminal_nodes(model.root, X)], dtype=float)
    dist = dist.reshape(X.shape[0], len(model.classes))
    return dist / dist.sum(axis=1, keepdims=True)
