import numpy as np
import pytest

from ecomrec.classifiers import dumps
from ecomrec.classifiers.forest import predict_proba_rf, predict_rf, train_rf, vote
from ecomrec.classifiers.tree import predict_dt, train_dt
from ecomrec.errors import BadHyperparameters, DimensionMismatch


def _random_dataset(seed):
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(10, 60)), int(rng.integers(1, 5))
    X = rng.integers(0, 4, size=(n, d)).astype(float)
    X[:, 0] += rng.normal(scale=0.5, size=n)
    y = rng.integers(0, 3, size=n)
    cat = (False,) + tuple(bool(b) for b in rng.integers(0, 2, size=d - 1))
    return X, y, cat


@pytest.mark.parametrize("seed", range(20))
def test_single_tree_without_resampling_is_a_decision_tree(seed):
    X, y, cat = _random_dataset(seed)
    rf = train_rf(X, y, n_trees=1, bootstrap=False, features_per_split=X.shape[1], categorical=cat)
    dt = train_dt(X, y, categorical=cat)
    probe = np.vstack([X, X + 0.25, np.full((3, X.shape[1]), 9.0)])
    assert np.array_equal(predict_rf(rf, probe), predict_dt(dt, probe))


def test_one_tree_forest_matches_its_tree(noisy_ds):
    rf = train_rf(noisy_ds.features, noisy_ds.target, n_trees=1, seed=5)
    assert np.array_equal(predict_rf(rf, noisy_ds.features), predict_dt(rf.trees[0], noisy_ds.features))


def test_vote_majority_and_tie_break():
    assert vote(np.array([[1], [2], [1]]), 3).tolist() == [1]
    assert vote(np.array([[0], [1]]), 2).tolist() == [0]
    assert vote(np.array([[2, 0], [1, 0], [2, 1]]), 3).tolist() == [2, 0]


def test_same_seed_same_forest(noisy_ds):
    a = train_rf(noisy_ds.features, noisy_ds.target, n_trees=15, seed=9, categorical=noisy_ds.categorical)
    b = train_rf(noisy_ds.features, noisy_ds.target, n_trees=15, seed=9, categorical=noisy_ds.categorical)
    assert dumps(a) == dumps(b)
    c = train_rf(noisy_ds.features, noisy_ds.target, n_trees=15, seed=10, categorical=noisy_ds.categorical)
    assert dumps(a) != dumps(c)


def test_trees_do_not_depend_on_forest_size(noisy_ds):
    # per-tree generators are spawned from the seed, so a prefix of a larger
    # forest equals the smaller forest
    small = train_rf(noisy_ds.features, noisy_ds.target, n_trees=4, seed=2)
    large = train_rf(noisy_ds.features, noisy_ds.target, n_trees=9, seed=2)
    for s, l in zip(small.trees, large.trees):
        assert dumps(s) == dumps(l)


def test_proba_rows_are_vote_shares(noisy_ds):
    rf = train_rf(noisy_ds.features, noisy_ds.target, n_trees=7, seed=1)
    p = predict_proba_rf(rf, noisy_ds.features)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(p * 7, np.round(p * 7))
    assert np.array_equal(rf.classes[np.argmax(p, axis=1)], predict_rf(rf, noisy_ds.features))


def test_clean_data_is_fitted_exactly(clean_ds):
    rf = train_rf(clean_ds.features, clean_ds.target, n_trees=25, seed=0, categorical=clean_ds.categorical)
    assert np.mean(predict_rf(rf, clean_ds.features) == clean_ds.target) == 1.0


@pytest.mark.parametrize("hp", [{"n_trees": 0}, {"n_trees": 2.5}, {"features_per_split": 0},
                                {"features_per_split": 4}])
def test_bad_hyperparameters(hp):
    with pytest.raises(BadHyperparameters):
        train_rf(np.zeros((5, 3)), [0, 1, 0, 1, 0], **hp)


def test_needs_two_rows():
    with pytest.raises(BadHyperparameters):
        train_rf([[1.0]], [0])


def test_dimension_mismatch():
    rf = train_rf(np.eye(4), [0, 1, 0, 1], n_trees=2)
    with pytest.raises(DimensionMismatch):
        predict_rf(rf, np.zeros((1, 3)))
