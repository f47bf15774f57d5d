"""Random forest of Gini decision trees over sparse feature vectors.

Trees are stored as flat pre-order arrays: node ``i``'s left child is
``i + 1`` and its right child is ``right[i]``. Leaves carry ``feature == -1``
and the (bootstrap-weighted) class counts that reached them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .labels import Label
from .sparse import SparseVector, check_same_dim, to_csr

# gains closer than this count as ties
_TIE_EPS = 1e-12

INFORMATIVE_CLASS = 0
UNINFORMATIVE_CLASS = 1


def gini_impurity(counts) -> float:
    """1 - sum of squared class proportions."""
    c = [float(v) for v in counts]
    if any(v < 0 for v in c):
        raise ValueError("class counts must be non-negative")
    total = sum(c)
    if total <= 0:
        raise ValueError("gini impurity of an empty node is undefined")
    return 1.0 - sum((v / total) ** 2 for v in c)


def _gini_arrays(c0, c1):
    n = c0 + c1
    with np.errstate(invalid="ignore", divide="ignore"):
        p0 = c0 / n
        p1 = c1 / n
    return 1.0 - (p0 * p0 + p1 * p1)


def _as_csr(X) -> sp.csr_matrix:
    if sp.issparse(X):
        return sp.csr_matrix(X)
    if isinstance(X, np.ndarray):
        return sp.csr_matrix(X.astype(np.float64))
    return to_csr(list(X))


def _class_indices(y) -> np.ndarray:
    """Class index per label: 0 = INFORMATIVE, 1 = UNINFORMATIVE.

    Accepts Label values, label strings or +1 / -1 signs.
    """
    out = []
    for v in y:
        if isinstance(v, (str, Label)):
            out.append(Label(v).index)
        elif v == 1:
            out.append(INFORMATIVE_CLASS)
        elif v == -1:
            out.append(UNINFORMATIVE_CLASS)
        else:
            raise ValueError(f"unrecognised label {v!r}")
    return np.asarray(out, dtype=np.int64)


def best_split(samples, X, y, feature_subset, min_leaf: int = 1):
    """Best Gini split of ``samples`` over ``feature_subset``.

    ``samples`` may repeat indices (bootstrap multiplicity). ``y`` holds
    labels or +1 / -1 signs for every row of ``X``. Candidate
    thresholds are midpoints between consecutive distinct values; absent
    sparse entries are 0.0. Values ``<= threshold`` go left.

    Returns ``(feature_index, threshold, impurity_decrease)`` or ``None`` when
    no admissible split lowers the impurity. Ties go to the lowest feature
    index, then the lowest threshold.
    """
    Xc = X if isinstance(X, sp.csr_matrix) else _as_csr(X)
    cls_all = _class_indices(y)
    uniq, weight = np.unique(np.asarray(samples, dtype=np.int64), return_counts=True)
    feats = np.unique(np.asarray(feature_subset, dtype=np.int64))
    if uniq.size == 0 or feats.size == 0:
        return None
    return _best_split(Xc, cls_all, uniq, weight.astype(np.float64), feats, min_leaf)


def _best_split(Xc, cls_all, uniq, weight, feats, min_leaf):
    cls = cls_all[uniq]
    w0 = weight * (cls == 0)
    w1 = weight * (cls == 1)
    tot0, tot1 = w0.sum(), w1.sum()
    n = tot0 + tot1
    if n < 2 * min_leaf or tot0 == 0 or tot1 == 0:
        return None
    parent = 1.0 - ((tot0 / n) ** 2 + (tot1 / n) ** 2)

    sub = Xc[uniq][:, feats].tocoo()
    keep = sub.data != 0
    rows, cols, vals = sub.row[keep], sub.col[keep], sub.data[keep]
    nf = feats.size
    p0 = np.bincount(cols, weights=w0[rows], minlength=nf)
    p1 = np.bincount(cols, weights=w1[rows], minlength=nf)
    z0, z1 = tot0 - p0, tot1 - p1
    has_zero = (z0 + z1) > 0
    zcols = np.flatnonzero(has_zero)

    col = np.concatenate([cols, zcols])
    val = np.concatenate([vals, np.zeros(zcols.size)])
    c0 = np.concatenate([w0[rows], z0[zcols]])
    c1 = np.concatenate([w1[rows], z1[zcols]])
    if col.size == 0:
        return None

    order = np.lexsort((val, col))
    col, val, c0, c1 = col[order], val[order], c0[order], c1[order]
    new_group = np.ones(col.size, dtype=bool)
    new_group[1:] = (col[1:] != col[:-1]) | (val[1:] != val[:-1])
    starts = np.flatnonzero(new_group)
    gcol, gval = col[starts], val[starts]
    g0 = np.add.reduceat(c0, starts)
    g1 = np.add.reduceat(c1, starts)

    # candidate boundary after group k when group k+1 has the same feature
    if gcol.size < 2:
        return None
    cand = np.flatnonzero(gcol[1:] == gcol[:-1])
    if cand.size == 0:
        return None
    cum0 = np.cumsum(g0)
    cum1 = np.cumsum(g1)
    first = np.flatnonzero(np.r_[True, gcol[1:] != gcol[:-1]])
    base_idx = first[np.searchsorted(first, np.arange(gcol.size), side="right") - 1]
    base0 = cum0[base_idx] - g0[base_idx]
    base1 = cum1[base_idx] - g1[base_idx]
    l0 = (cum0 - base0)[cand]
    l1 = (cum1 - base1)[cand]
    r0, r1 = tot0 - l0, tot1 - l1
    nl, nr = l0 + l1, r0 + r1
    ok = (nl >= min_leaf) & (nr >= min_leaf)
    if not ok.any():
        return None
    cand, l0, l1, r0, r1, nl, nr = (a[ok] for a in (cand, l0, l1, r0, r1, nl, nr))
    gain = parent - (nl / n) * _gini_arrays(l0, l1) - (nr / n) * _gini_arrays(r0, r1)
    best = gain.max()
    if best <= _TIE_EPS:
        return None
    lo, hi = gval[cand], gval[cand + 1]
    thr = (lo + hi) / 2.0
    thr = np.where(thr >= hi, lo, thr)
    tied = np.flatnonzero(gain >= best - _TIE_EPS)
    fidx = feats[gcol[cand[tied]]]
    pick = tied[np.lexsort((thr[tied], fidx))[0]]
    return int(feats[gcol[cand[pick]]]), float(thr[pick]), float(gain[pick])


@dataclass(frozen=True, eq=False)
class Tree:
    feature: np.ndarray     # int64, -1 marks a leaf
    threshold: np.ndarray   # float64
    right: np.ndarray       # int64, right-child node id (-1 for leaves)
    counts: np.ndarray      # (n_nodes, 2) int64 class counts

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    def depth(self) -> int:
        """Longest root-to-leaf path length, found by exhaustive traversal."""
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] < 0:
                best = max(best, d)
            else:
                stack.append((node + 1, d + 1))
                stack.append((int(self.right[node]), d + 1))
        return best

    def leaf_proportions(self, Xc: sp.csr_matrix) -> np.ndarray:
        """INFORMATIVE share of the leaf each row of ``Xc`` lands in."""
        node = np.zeros(Xc.shape[0], dtype=np.int64)
        rows = np.arange(Xc.shape[0])
        active = self.feature[node] >= 0
        while active.any():
            r = rows[active]
            f = self.feature[node[r]]
            vals = np.asarray(Xc[r, f]).ravel()
            go_left = vals <= self.threshold[node[r]]
            node[r] = np.where(go_left, node[r] + 1, self.right[node[r]])
            active = self.feature[node] >= 0
        c = self.counts[node].astype(np.float64)
        return c[:, 0] / c.sum(axis=1)


def _grow_tree(Xc, cls, samples, rng, max_depth, min_leaf, features_per_split):
    dim = Xc.shape[1]
    feature, threshold, right, counts = [], [], [], []

    def grow(uniq, weight, depth):
        node = len(feature)
        c = np.array(
            [weight[cls[uniq] == 0].sum(), weight[cls[uniq] == 1].sum()], dtype=np.int64
        )
        feature.append(-1)
        threshold.append(0.0)
        right.append(-1)
        counts.append(c)
        if depth >= max_depth or c[0] == 0 or c[1] == 0 or c.sum() < 2 * min_leaf:
            return
        feats = np.sort(rng.choice(dim, size=features_per_split, replace=False))
        split = _best_split(Xc, cls, uniq, weight.astype(np.float64), feats, min_leaf)
        if split is None:
            return
        f, thr, _ = split
        vals = np.asarray(Xc[uniq, np.full(uniq.size, f)]).ravel()
        left = vals <= thr
        feature[node] = f
        threshold[node] = thr
        grow(uniq[left], weight[left], depth + 1)
        right[node] = len(feature)
        grow(uniq[~left], weight[~left], depth + 1)

    uniq, weight = np.unique(samples, return_counts=True)
    grow(uniq, weight.astype(np.int64), 0)
    return Tree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(right, dtype=np.int64),
        np.array(counts, dtype=np.int64).reshape(-1, 2),
    )


@dataclass(frozen=True, eq=False)
class RandomForestModel:
    trees: tuple
    dim: int
    n_trees: int = 500
    max_depth: int = 26
    min_leaf: int = 1
    features_per_split: int = 1
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        if len(self.trees) != self.n_trees:
            raise ValueError(f"expected {self.n_trees} trees, got {len(self.trees)}")
        if not 1 <= self.features_per_split <= max(self.dim, 1):
            raise ValueError("features_per_split must lie in [1, dim]")


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    """Random stream for one tree, a function of (seed, tree_index) only."""
    return np.random.default_rng([seed, tree_index])


def train_forest(
    X,
    y,
    n_trees: int = 500,
    max_depth: int = 26,
    min_leaf: int = 1,
    features_per_split: int | None = None,
    seed: int = 42,
    threads: int = 1,
) -> RandomForestModel:
    """Bootstrap-aggregated Gini trees; parallel and serial runs give identical forests."""
    if isinstance(X, (list, tuple)):
        if len(X) == 0:
            raise ValueError("no training data")
        dim = check_same_dim(X)
    Xc = _as_csr(X)
    n, dim = Xc.shape
    if n == 0:
        raise ValueError("no training data")
    if n != len(y):
        raise ValueError(f"{n} vectors but {len(y)} labels")
    if max_depth < 0 or min_leaf < 1 or n_trees < 1:
        raise ValueError("invalid forest hyperparameters")
    if features_per_split is None:
        features_per_split = max(1, math.ceil(math.sqrt(dim)))
    if not 1 <= features_per_split <= dim:
        raise ValueError("features_per_split must lie in [1, dim]")
    cls = _class_indices(y)

    def build(i):
        rng = tree_rng(seed, i)
        samples = rng.integers(0, n, size=n)
        return _grow_tree(Xc, cls, samples, rng, max_depth, min_leaf, features_per_split)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(build, range(n_trees)))
    else:
        trees = [build(i) for i in range(n_trees)]
    return RandomForestModel(tuple(trees), dim, n_trees, max_depth, min_leaf, features_per_split, seed)


def forest_proportions(model: RandomForestModel, X) -> np.ndarray:
    """Tree-averaged INFORMATIVE proportion for each row of ``X``."""
    Xc = _as_csr(X)
    if Xc.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: model {model.dim}, input {Xc.shape[1]}")
    total = np.zeros(Xc.shape[0])
    for tree in model.trees:
        total += tree.leaf_proportions(Xc)
    return total / len(model.trees)


def predict_forest(model: RandomForestModel, x: SparseVector) -> Label:
    """Soft vote: INFORMATIVE when the averaged INFORMATIVE proportion is >= 0.5."""
    if x.dim != model.dim:
        raise ValueError(f"dimension mismatch: model {model.dim}, input {x.dim}")
    return predict_forest_many(model, [x])[0]


def predict_forest_many(model: RandomForestModel, X) -> list[Label]:
    return [Label.INFORMATIVE if p >= 0.5 else Label.UNINFORMATIVE for p in forest_proportions(model, X)]
