import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ecomrec.classifiers import _backend
from ecomrec.classifiers import dumps
from ecomrec.classifiers.tree import (
    Leaf,
    Node,
    entropy,
    information_gain,
    predict_dt,
    predict_proba_dt,
    root_split,
    train_dt,
)
from ecomrec.errors import BadPartition, DimensionMismatch, EmptySet

ENTROPY_9_5 = 0.9402859586706311  # -(9/14)log2(9/14) - (5/14)log2(5/14)
GAIN_3_1 = 0.18872187554086717  # 1 - H(3/4, 1/4)


def test_entropy_fixtures():
    assert entropy([1, 1, 1, 1]) == 0.0
    assert entropy([0, 0, 1, 1]) == 1.0
    assert abs(entropy(["+"] * 9 + ["-"] * 5) - ENTROPY_9_5) <= 1e-9
    with pytest.raises(EmptySet):
        entropy([])


def test_gain_fixtures():
    s = [0, 0, 1, 1, 0, 1, 2, 2]
    pure = [[0, 0, 0], [1, 1, 1], [2, 2]]
    assert abs(information_gain(s, pure) - entropy(s)) <= 1e-9
    assert information_gain(s, [s]) == 0.0
    halves = [[0, 0, 0, 1], [1, 1, 1, 0]]
    assert abs(information_gain([0] * 4 + [1] * 4, halves) - GAIN_3_1) <= 1e-9


def test_gain_bad_partition():
    with pytest.raises(BadPartition):
        information_gain([0, 1, 1], [[0], [1]])
    with pytest.raises(BadPartition):
        information_gain([0, 1], [[0], [1], []])


@given(st.lists(st.integers(0, 5), min_size=1, max_size=60))
def test_entropy_bounds(labels):
    h = entropy(labels)
    k = len(set(labels))
    assert -1e-12 <= h <= math.log2(k) + 1e-12


@given(st.lists(st.integers(0, 3), min_size=1, max_size=40), st.integers(1, 5), st.randoms())
def test_gain_nonnegative(labels, parts, rnd):
    groups = [[] for _ in range(parts)]
    for v in labels:
        groups[rnd.randrange(parts)].append(v)
    groups = [g for g in groups if g]
    assert information_gain(labels, groups) >= -1e-12


def test_constant_target_is_single_leaf():
    m = train_dt(np.arange(10.0).reshape(5, 2), [3] * 5)
    assert isinstance(m.root, Leaf) and m.depth() == 0
    assert predict_dt(m, np.zeros((4, 2))).tolist() == [3] * 4


def test_xor_needs_depth_two():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 3, dtype=float)
    y = np.logical_xor(X[:, 0], X[:, 1]).astype(int)
    for cat in (None, (True, True)):
        m = train_dt(X, y, max_depth=2, categorical=cat)
        assert np.all(predict_dt(m, X) == y)
        assert m.depth() == 2
        # the zero-gain root split alone is no better than chance
        assert np.mean(predict_dt(train_dt(X, y, max_depth=1, categorical=cat), X) == y) == 0.5


def test_all_constant_features_give_leaf():
    m = train_dt([[1.0, 2.0]] * 4, [0, 1, 0, 1])
    assert isinstance(m.root, Leaf) and m.root.label == 0


def test_memorizes_training_set(noisy_ds):
    ds = noisy_ds
    # the noisy table has duplicate feature rows with different labels; keep one label per row
    _, first = np.unique(ds.features, axis=0, return_index=True)
    X, y = ds.features[first], ds.target[first]
    m = train_dt(X, y, categorical=ds.categorical)
    assert np.all(predict_dt(m, X) == y)


def test_unseen_category_uses_node_majority():
    X = np.array([[0], [0], [0], [1], [2]], dtype=float)
    y = np.array([5, 5, 5, 7, 8])
    m = train_dt(X, y, categorical=(True,))
    assert isinstance(m.root, Node) and m.root.threshold is None
    assert predict_dt(m, [[9.0]]).tolist() == [5]
    np.testing.assert_allclose(predict_proba_dt(m, [[9.0]]), [[0.6, 0.2, 0.2]])


def test_structure_invariants(noisy_ds):
    m = train_dt(noisy_ds.features, noisy_ds.target, max_depth=4, categorical=noisy_ds.categorical)
    assert m.depth() <= 4

    def walk(node):
        dist = np.asarray(node.distribution)
        assert node.label == int(np.argmax(dist))
        if isinstance(node, Node):
            if node.threshold is None:
                assert len(node.children) >= 2
                kids = list(node.children.values())
            else:
                assert len(node.children) == 2
                kids = node.children
            assert dist.sum() == sum(np.sum(k.distribution) for k in kids)
            for k in kids:
                walk(k)

    walk(m.root)


def test_min_samples_stops_growth():
    X = np.arange(8.0).reshape(-1, 1)
    y = [0, 1, 0, 1, 0, 1, 0, 1]
    assert isinstance(train_dt(X, y, min_samples=9).root, Leaf)
    assert isinstance(train_dt(X, y, min_samples=8).root, Node)


def test_deterministic(noisy_ds):
    a = train_dt(noisy_ds.features, noisy_ds.target, categorical=noisy_ds.categorical)
    b = train_dt(noisy_ds.features, noisy_ds.target, categorical=noisy_ds.categorical)
    assert dumps(a) == dumps(b)


def test_tie_breaks_to_smallest_feature_then_threshold():
    # both features separate the classes identically
    X = np.array([[0, 0], [1, 1], [2, 2], [3, 3]], dtype=float)
    y = [0, 0, 1, 1]
    m = train_dt(X, y)
    assert m.root.feature == 0 and m.root.threshold == 1.5
    # feature 0 has two equally good thresholds
    X = np.array([[0], [1], [2], [3], [4], [5]], dtype=float)
    f, thr, _ = root_split(X, [0, 1, 1, 0, 0, 1])
    assert (f, thr) == (0, 0.5)


def test_majority_tie_breaks_to_smallest_label():
    m = train_dt([[0.0], [0.0]], [4, 2])
    assert isinstance(m.root, Leaf) and predict_dt(m, [[0.0]]).tolist() == [2]


def test_dimension_mismatch():
    m = train_dt(np.zeros((3, 2)), [0, 1, 0])
    with pytest.raises(DimensionMismatch):
        predict_dt(m, np.zeros((2, 3)))


def _check_root(rows, labels, categorical):
    X = np.array(rows, dtype=float)
    f, thr, gain = root_split(X, labels, categorical)
    best = oracles.best_gain(rows, labels, categorical)
    if f < 0:
        assert not oracles.candidate_splits(rows, labels, categorical)
        return
    chosen = [g for ff, t, g in oracles.candidate_splits(rows, labels, categorical)
              if ff == f and (t is None or t == thr)]
    assert len(chosen) == 1
    assert oracles.partition_gain(labels, chosen[0]) == best


def test_root_split_matches_enumeration_numeric():
    for rows, labels in oracles.small_instances(5, 2, 3, 2):
        _check_root(rows, labels, (False, False))


def test_root_split_matches_enumeration_ternary_labels():
    for rows, labels in oracles.small_instances(4, 2, 2, 3):
        _check_root(rows, labels, (True, True))
        _check_root(rows, labels, (False, True))


def test_root_split_agrees_with_trained_tree():
    rnd = random.Random(0)
    for _ in range(300):
        n = rnd.randint(2, 8)
        rows = [(rnd.randint(0, 2), rnd.randint(0, 2)) for _ in range(n)]
        labels = [rnd.randint(0, 2) for _ in range(n)]
        for cat in ((True, True), (False, False), (True, False)):
            f, thr, _ = root_split(np.array(rows, float), labels, cat)
            m = train_dt(np.array(rows, float), labels, categorical=cat)
            if f < 0 or len(set(labels)) == 1:
                assert isinstance(m.root, Leaf)
            else:
                assert m.root.feature == f
                assert (m.root.threshold is None and math.isnan(thr)) or m.root.threshold == thr


@pytest.mark.skipif("cython" not in _backend.BACKENDS, reason="compiled kernel not built")
@pytest.mark.parametrize("seed", range(8))
def test_backends_grow_identical_trees(seed):
    rng = np.random.default_rng(seed)
    n, d = 300, 4
    X = np.column_stack([rng.integers(0, 4, n), rng.normal(size=n), rng.normal(size=n).round(1),
                         rng.integers(0, 3, n)]).astype(float)
    y = (X[:, 0] + (X[:, 1] > 0) + rng.integers(0, 2, n)) % 4
    cat = (True, False, False, True)
    trees = {}
    for name, impl in _backend.BACKENDS.items():
        old = _backend.impl
        _backend.impl = impl
        try:
            trees[name] = dumps(train_dt(X, y, categorical=cat))
        finally:
            _backend.impl = old
    assert trees["cython"] == trees["python"]


@pytest.mark.skipif("cython" not in _backend.BACKENDS, reason="compiled kernel not built")
def test_backends_agree_on_random_splits():
    rng = np.random.default_rng(7)
    py, cy = _backend.BACKENDS["python"], _backend.BACKENDS["cython"]
    for _ in range(300):
        n = int(rng.integers(2, 40))
        d = int(rng.integers(1, 4))
        X = np.ascontiguousarray(rng.integers(0, 4, size=(n, d)).astype(float))
        y = rng.integers(0, 3, size=n).astype(np.intp)
        idx = np.arange(n, dtype=np.intp)
        feats = np.arange(d, dtype=np.intp)
        cat = rng.integers(0, 2, size=d).astype(np.uint8)
        a, b = py.best_split(X, y, idx, feats, cat, 3), cy.best_split(X, y, idx, feats, cat, 3)
        assert a[0] == b[0]
        assert (math.isnan(a[1]) and math.isnan(b[1])) or a[1] == b[1]
        assert abs(a[2] - b[2]) <= 1e-12
        assert abs(py.node_entropy(y, idx, 3) - cy.node_entropy(y, idx, 3)) <= 1e-12
