"""Sorted-index sparse vectors."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class SparseVector:
    """Immutable sparse vector with strictly increasing indices and no stored zeros."""

    __slots__ = ("dim", "indices", "values")

    def __init__(self, dim: int, indices=(), values=(), *, _trusted: bool = False):
        idx = np.asarray(indices, dtype=np.int64)
        val = np.asarray(values, dtype=np.float64)
        if not _trusted:
            if idx.shape != val.shape or idx.ndim != 1:
                raise ValueError("indices and values must be 1-D and equal length")
            if idx.size:
                if np.any(np.diff(idx) <= 0):
                    raise ValueError("indices must be strictly increasing")
                if idx[0] < 0 or idx[-1] >= dim:
                    raise ValueError(f"index out of range for dim {dim}")
            keep = val != 0.0
            if not keep.all():
                idx, val = idx[keep], val[keep]
        idx.flags.writeable = False
        val.flags.writeable = False
        self.dim = int(dim)
        self.indices = idx
        self.values = val

    @classmethod
    def from_pairs(cls, dim: int, pairs: Iterable[tuple[int, float]]) -> "SparseVector":
        """Build from unordered (index, value) pairs; duplicate indices are summed."""
        pairs = list(pairs)
        if not pairs:
            return cls(dim)
        idx = np.array([p[0] for p in pairs], dtype=np.int64)
        val = np.array([p[1] for p in pairs], dtype=np.float64)
        uniq, inv = np.unique(idx, return_inverse=True)
        summed = np.zeros(len(uniq))
        np.add.at(summed, inv, val)
        return cls(dim, uniq, summed)

    @classmethod
    def from_dense(cls, x) -> "SparseVector":
        x = np.asarray(x, dtype=np.float64)
        nz = np.flatnonzero(x)
        return cls(x.size, nz, x[nz], _trusted=True)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def dot(self, other) -> float:
        """Dot product with another SparseVector or a dense array of matching length."""
        if isinstance(other, SparseVector):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            common, ia, ib = np.intersect1d(
                self.indices, other.indices, assume_unique=True, return_indices=True
            )
            return float(np.dot(self.values[ia], other.values[ib]))
        w = np.asarray(other)
        if w.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: {self.dim} vs {w.shape}")
        return float(np.dot(w[self.indices], self.values))

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def scale(self, c: float) -> "SparseVector":
        return SparseVector(self.dim, self.indices, self.values * c)

    def concat(self, other: "SparseVector") -> "SparseVector":
        """Append ``other``'s coordinates after this vector's block."""
        return SparseVector(
            self.dim + other.dim,
            np.concatenate([self.indices, other.indices + self.dim]),
            np.concatenate([self.values, other.values]),
            _trusted=True,
        )

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"SparseVector(dim={self.dim}, entries={self.entries})"


def check_same_dim(X: Sequence[SparseVector]) -> int:
    """Return the shared dimension of ``X`` or raise ``ValueError``."""
    if not X:
        raise ValueError("no vectors given")
    dim = X[0].dim
    for i, x in enumerate(X):
        if x.dim != dim:
            raise ValueError(f"vector {i} has dim {x.dim}, expected {dim}")
    return dim


def to_csr(X: Sequence[SparseVector], dim: int | None = None) -> sp.csr_matrix:
    """Stack sparse vectors into a CSR matrix (rows = vectors)."""
    if dim is None:
        dim = check_same_dim(X)
    indptr = np.zeros(len(X) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([x.nnz for x in X])
    if len(X):
        indices = np.concatenate([x.indices for x in X])
        data = np.concatenate([x.values for x in X])
    else:
        indices = np.zeros(0, dtype=np.int64)
        data = np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(X), dim))
