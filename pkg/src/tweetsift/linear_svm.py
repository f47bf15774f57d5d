"""L2-regularised linear SVM trained with Pegasos-style stochastic sub-gradient steps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .labels import Label
from .sparse import SparseVector, check_same_dim


class TrainingError(ValueError):
    """Training data cannot produce a model (e.g. only one class present)."""


@dataclass(frozen=True, eq=False)
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    lam: float = 1e-4
    epochs: int = 50
    seed: int = 42

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or not np.all(np.isfinite(w)) or not np.isfinite(self.bias):
            raise ValueError("weights must be a finite 1-D vector")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def dim(self) -> int:
        return self.weights.size


def _signs(y) -> np.ndarray:
    out = np.array([Label(v).sign if isinstance(v, (str, Label)) else int(v) for v in y], dtype=np.float64)
    if not np.all(np.isin(out, (-1.0, 1.0))):
        raise ValueError("labels must be +1/-1 or Label values")
    return out


def svm_objective(w: np.ndarray, b: float, X: Sequence[SparseVector], y, lam: float) -> float:
    """(lam / 2) * ||w||^2 + mean hinge loss."""
    ys = _signs(y)
    margins = np.array([x.dot(w) + b for x in X]) * ys
    return 0.5 * lam * float(np.dot(w, w)) + float(np.mean(np.maximum(0.0, 1.0 - margins)))


def train_svm(
    X: Sequence[SparseVector],
    y,
    lam: float = 1e-4,
    epochs: int = 50,
    seed: int = 42,
    callback=None,
) -> LinearSvmModel:
    """Fit by per-example sub-gradient steps with learning rate ``1 / (lam * t)``.

    The weight vector is stored as ``scale * v`` so the ``(1 - eta * lam)``
    shrink costs O(1) and each step touches only the example's nonzeros.
    ``callback(epoch, weights, bias)`` is called after every epoch.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if len(X) != len(y):
        raise ValueError(f"{len(X)} vectors but {len(y)} labels")
    if len(X) < 2:
        raise TrainingError("need at least two training examples")
    dim = check_same_dim(X)
    ys = _signs(y)
    if np.all(ys == ys[0]):
        raise TrainingError("training data contains a single class")

    rng = np.random.default_rng(seed)
    v = np.zeros(dim)
    scale = 1.0
    b = 0.0
    t = 0
    n = len(X)
    for epoch in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            x = X[i]
            margin = ys[i] * (scale * np.dot(v[x.indices], x.values) + b)
            shrink = 1.0 - eta * lam
            if shrink == 0.0:
                v[:] = 0.0
                scale = 1.0
            else:
                scale *= shrink
            if margin < 1.0:
                v[x.indices] += (eta * ys[i] / scale) * x.values
                b += eta * ys[i]
            if scale < 1e-9:
                v *= scale
                scale = 1.0
        if callback is not None:
            callback(epoch, scale * v, b)
    return LinearSvmModel(scale * v, b, lam, epochs, seed)


def decision_function(model: LinearSvmModel, x: SparseVector) -> float:
    if x.dim != model.dim:
        raise ValueError(f"dimension mismatch: model {model.dim}, input {x.dim}")
    return x.dot(model.weights) + model.bias


def predict_svm(model: LinearSvmModel, x: SparseVector) -> Label:
    """INFORMATIVE when the decision value is >= 0."""
    return Label.from_sign(decision_function(model, x))
