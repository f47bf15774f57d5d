import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_best_split
from tweetsift.labels import Label
from tweetsift.random_forest import (
    RandomForestModel,
    Tree,
    best_split,
    forest_proportions,
    gini_impurity,
    predict_forest,
    predict_forest_many,
    train_forest,
    tree_rng,
)
from tweetsift.sparse import SparseVector, to_csr


def leaf_tree(c_inf, c_uninf):
    return Tree(np.array([-1]), np.array([0.0]), np.array([-1]), np.array([[c_inf, c_uninf]]))


def xor_data():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] * 25)
    y = np.array([-1, 1, 1, -1] * 25)
    return pts, y


# ---------------------------------------------------------------- gini

@pytest.mark.parametrize("counts, expected", [((5, 0), 0.0), ((0, 3), 0.0), ((1, 1), 0.5), ((3, 1), 0.375)])
def test_gini_values(counts, expected):
    assert gini_impurity(counts) == expected


def test_gini_rejects_empty_node():
    with pytest.raises(ValueError):
        gini_impurity((0, 0))


@given(st.integers(0, 1000), st.integers(0, 1000))
def test_gini_range(a, b):
    if a + b == 0:
        return
    g = gini_impurity((a, b))
    assert 0.0 <= g <= 0.5
    assert (g == 0.0) == (a == 0 or b == 0)


# ---------------------------------------------------------------- best split

def test_best_split_examples():
    X = np.array([[0.0], [1.0]])
    f, thr, gain = best_split([0, 1], X, [-1, 1], [0])
    assert (f, thr, gain) == (0, 0.5, 0.5)
    assert best_split([0, 1], X, [1, 1], [0]) is None
    X4 = np.array([[0.0], [1.0], [2.0], [3.0]])
    assert best_split(range(4), X4, [-1, -1, 1, 1], [0])[:2] == (0, 1.5)


def test_best_split_tie_prefers_lowest_feature_then_threshold():
    # feature 1 and 2 separate equally well; feature 1 must win
    X = np.array([[5.0, 0.0, 0.0], [5.0, 1.0, 1.0]])
    assert best_split([0, 1], X, [-1, 1], [2, 1, 0])[:2] == (1, 0.5)
    # two equally good thresholds on one feature: the lower one wins
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = [1, -1, -1, 1]
    f, thr, _ = best_split(range(4), X, y, [0])
    brute = brute_best_split(X, [0, 1, 1, 0], range(4), [0])
    assert (f, thr) == brute[:2] == (0, 0.5)


def test_best_split_sparse_zero_handling():
    X = [SparseVector(2, [1], [2.0]), SparseVector(2), SparseVector(2, [1], [3.0])]
    f, thr, _ = best_split([0, 1, 2], to_csr(X), [1, -1, 1], [0, 1])
    assert (f, thr) == (1, 1.0)


def test_best_split_respects_min_leaf():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    assert best_split(range(4), X, [-1, 1, 1, 1], [0], min_leaf=2)[:2] == (0, 1.5)
    assert best_split(range(4), X, [-1, 1, 1, 1], [0], min_leaf=3) is None


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_best_split_matches_exhaustive_search(data):
    n = data.draw(st.integers(2, 30))
    d = data.draw(st.integers(1, 5))
    Xd = np.array(data.draw(st.lists(st.lists(st.sampled_from([0.0, 0.0, 1.0, 2.0, 2.5, 4.0]), min_size=d, max_size=d), min_size=n, max_size=n)))
    signs = np.array(data.draw(st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n)))
    samples = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2 * n))
    feats = data.draw(st.lists(st.integers(0, d - 1), min_size=1, max_size=d, unique=True))
    min_leaf = data.draw(st.integers(1, 3))
    got = best_split(samples, to_csr([SparseVector.from_dense(r) for r in Xd], d), signs, feats, min_leaf)
    want = brute_best_split(Xd, (signs == -1).astype(int), samples, feats, min_leaf)
    if want is None:
        assert got is None
    else:
        assert got is not None
        assert got[:2] == want[:2]
        assert got[2] == pytest.approx(want[2], abs=1e-12)


# ---------------------------------------------------------------- training

def test_depth_zero_single_tree_is_bootstrap_majority():
    rng = np.random.default_rng(3)
    X = rng.random((40, 3))
    y = np.where(rng.random(40) < 0.3, 1, -1)
    m = train_forest(X, y, n_trees=1, max_depth=0, seed=11)
    boot = tree_rng(11, 0).integers(0, 40, size=40)
    share = np.mean(y[boot] == 1)
    assert m.trees[0].n_nodes == 1
    expected = Label.INFORMATIVE if share >= 0.5 else Label.UNINFORMATIVE
    assert set(predict_forest_many(m, X)) == {expected}
    assert forest_proportions(m, X[:1])[0] == pytest.approx(share, abs=1e-15)


def test_xor_is_learned():
    X, y = xor_data()
    m = train_forest(X, y, n_trees=50, max_depth=26, seed=42)
    preds = predict_forest_many(m, X)
    assert [p.sign for p in preds] == y.tolist()


def test_forest_is_deterministic_and_thread_stable():
    rng = np.random.default_rng(5)
    X = rng.random((60, 8)) * (rng.random((60, 8)) < 0.4)
    y = np.where(X[:, 0] + X[:, 3] > 0.4, 1, -1)
    a = train_forest(X, y, n_trees=20, seed=9)
    b = train_forest(X, y, n_trees=20, seed=9)
    c = train_forest(X, y, n_trees=20, seed=9, threads=4)
    for ta, tb, tc in zip(a.trees, b.trees, c.trees):
        for field in ("feature", "threshold", "right", "counts"):
            assert np.array_equal(getattr(ta, field), getattr(tb, field))
            assert np.array_equal(getattr(ta, field), getattr(tc, field))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 5), st.integers(0, 10_000))
def test_depth_bound_and_leaf_sizes(max_depth, seed):
    rng = np.random.default_rng(seed)
    X = rng.random((50, 6))
    y = np.where(rng.random(50) < 0.5, 1, -1)
    min_leaf = int(rng.integers(1, 4))
    m = train_forest(X, y, n_trees=5, max_depth=max_depth, min_leaf=min_leaf, seed=seed)
    assert len(m.trees) == m.n_trees == 5
    for t in m.trees:
        assert t.depth() <= max_depth
        leaves = t.feature < 0
        assert np.all(t.counts[leaves].sum(axis=1) >= min_leaf)


def test_depth_bound_at_default_depth():
    rng = np.random.default_rng(1)
    X = rng.random((300, 10))
    y = np.where(rng.random(300) < 0.5, 1, -1)  # pure noise forces deep trees
    m = train_forest(X, y, n_trees=10, seed=1)
    depths = [t.depth() for t in m.trees]
    assert max(depths) <= 26
    shallow = train_forest(X, y, n_trees=10, max_depth=3, seed=1)
    assert max(t.depth() for t in shallow.trees) <= 3


def test_unbounded_tree_fits_its_bootstrap_sample():
    rng = np.random.default_rng(2)
    X = rng.random((80, 4))
    y = np.where(rng.random(80) < 0.5, 1, -1)
    m = train_forest(X, y, n_trees=1, max_depth=10_000, features_per_split=4, seed=4)
    boot = np.unique(tree_rng(4, 0).integers(0, 80, size=80))
    preds = predict_forest_many(m, X[boot])
    assert [p.sign for p in preds] == y[boot].tolist()


def test_default_features_per_split_is_ceil_sqrt():
    X = np.random.default_rng(0).random((10, 10))
    y = [1, -1] * 5
    assert train_forest(X, y, n_trees=1).features_per_split == 4
    with pytest.raises(ValueError):
        train_forest(X, y, n_trees=1, features_per_split=11)


def test_training_errors():
    with pytest.raises(ValueError):
        train_forest([], [])
    with pytest.raises(ValueError):
        train_forest(np.zeros((2, 2)), [1])


# ---------------------------------------------------------------- prediction

def test_soft_vote_tie_goes_to_informative():
    m = RandomForestModel((leaf_tree(1, 1),), dim=2, n_trees=1, features_per_split=1)
    assert predict_forest(m, SparseVector(2)) is Label.INFORMATIVE
    m = RandomForestModel((leaf_tree(3, 0), leaf_tree(0, 3)), dim=2, n_trees=2, features_per_split=1)
    assert predict_forest(m, SparseVector(2)) is Label.INFORMATIVE
    m = RandomForestModel((leaf_tree(2, 3),), dim=2, n_trees=1, features_per_split=1)
    assert predict_forest(m, SparseVector(2)) is Label.UNINFORMATIVE


def test_pure_informative_leaves_vote_informative():
    m = RandomForestModel(tuple(leaf_tree(4, 0) for _ in range(3)), dim=1, n_trees=3, features_per_split=1)
    assert predict_forest(m, SparseVector(1, [0], [7.0])) is Label.INFORMATIVE


def test_prediction_dimension_mismatch():
    X, y = xor_data()
    m = train_forest(X, y, n_trees=2)
    with pytest.raises(ValueError):
        predict_forest(m, SparseVector(3))
    with pytest.raises(ValueError):
        forest_proportions(m, np.zeros((1, 5)))


def test_model_invariants():
    with pytest.raises(ValueError):
        RandomForestModel((leaf_tree(1, 0),), dim=2, n_trees=2)
    with pytest.raises(ValueError):
        RandomForestModel((leaf_tree(1, 0),), dim=2, n_trees=1, features_per_split=3)
