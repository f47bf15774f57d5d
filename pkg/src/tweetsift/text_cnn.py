"""Convolutional text classifier with hand-written forward and backward passes.

embedding -> per-width valid 1-D convolution -> ReLU -> global max-pool ->
concatenate -> dense -> softmax over (INFORMATIVE, UNINFORMATIVE).
Everything runs in float64.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .labels import Label
from .linear_svm import TrainingError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CnnConfig:
    embed_dim: int = 128
    filter_widths: tuple = (3, 4, 5)
    filters_per_width: int = 100
    max_len: int = 143
    epochs: int = 25
    batch_size: int = 32
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "filter_widths", tuple(int(w) for w in self.filter_widths))
        if self.embed_dim < 1 or self.filters_per_width < 1 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("embed_dim, filters_per_width, epochs and batch_size must be >= 1")
        if not self.filter_widths or any(w < 1 or w > self.max_len for w in self.filter_widths):
            raise ValueError("every filter width must lie in [1, max_len]")


@dataclass(eq=False)
class CnnModel:
    """Parameters. ``embedding`` row 0 is padding and stays zero."""

    embedding: np.ndarray          # (V + 2, D)
    conv_kernels: list             # per width: (F, w * D)
    conv_biases: list              # per width: (F,)
    dense: np.ndarray              # (sum F, 2)
    dense_bias: np.ndarray         # (2,)
    config: CnnConfig = field(default_factory=CnnConfig)
    loss_history: list = field(default_factory=list)

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0] - 2

    def parameters(self) -> list[np.ndarray]:
        """All parameter tensors in a fixed order (shared with gradients and Adam state)."""
        return [self.embedding, *self.conv_kernels, *self.conv_biases, self.dense, self.dense_bias]

    def set_parameters(self, params: Sequence[np.ndarray]) -> None:
        k = len(self.conv_kernels)
        self.embedding = params[0]
        self.conv_kernels = list(params[1:1 + k])
        self.conv_biases = list(params[1 + k:1 + 2 * k])
        self.dense = params[1 + 2 * k]
        self.dense_bias = params[2 + 2 * k]

    def n_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def copy(self) -> "CnnModel":
        m = CnnModel(
            self.embedding.copy(),
            [k.copy() for k in self.conv_kernels],
            [b.copy() for b in self.conv_biases],
            self.dense.copy(),
            self.dense_bias.copy(),
            self.config,
            list(self.loss_history),
        )
        return m


def _glorot(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_cnn(vocab_size: int, config: CnnConfig | None = None) -> CnnModel:
    """Glorot-uniform weights, zero biases, zero padding row; seeded by ``config.seed``."""
    config = config or CnnConfig()
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    rng = np.random.default_rng(config.seed)
    D, F = config.embed_dim, config.filters_per_width
    rows = vocab_size + 2
    emb = _glorot(rng, (rows, D), rows, D)
    emb[0] = 0.0
    kernels, biases = [], []
    for w in config.filter_widths:
        kernels.append(_glorot(rng, (F, w * D), w * D, F))
        biases.append(np.zeros(F))
    total = F * len(config.filter_widths)
    dense = _glorot(rng, (total, 2), total, 2)
    return CnnModel(emb, kernels, biases, dense, np.zeros(2), config)


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _check_batch(model: CnnModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    if X.ndim == 1:
        X = X[None, :]
    L = model.config.max_len
    if X.shape[1] != L:
        raise ValueError(f"sequence length {X.shape[1]} does not match max_len {L}")
    if X.size and (X.min() < 0 or X.max() >= model.embedding.shape[0]):
        raise ValueError("token index out of range")
    return X


def _conv(E: np.ndarray, K: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Valid 1-D convolution, one matmul per kernel offset: (B, L, D) -> (B, P, F)."""
    B, L, D = E.shape
    w = K.shape[1] // D
    P = L - w + 1
    z = np.broadcast_to(b, (B, P, K.shape[0])).copy()
    for j in range(w):
        z += E[:, j:j + P, :] @ K[:, j * D:(j + 1) * D].T
    return z


def _forward(model: CnnModel, X: np.ndarray):
    E = model.embedding[X]                         # (B, L, D)
    pooled, cache = [], []
    for K, b in zip(model.conv_kernels, model.conv_biases):
        z = _conv(E, K, b)                         # (B, P, F)
        pos = z.argmax(axis=1)                     # (B, F)
        zmax = np.take_along_axis(z, pos[:, None, :], axis=1)[:, 0, :]
        pooled.append(np.maximum(zmax, 0.0))
        cache.append((z.shape[1], pos, zmax))
    h = np.concatenate(pooled, axis=1)             # (B, sum F)
    logits = h @ model.dense + model.dense_bias
    return _softmax(logits), h, (E, cache)


def forward(model: CnnModel, x) -> np.ndarray:
    """Class probabilities (INFORMATIVE, UNINFORMATIVE); a batch gives shape (B, 2)."""
    X = _check_batch(model, x)
    probs, _, _ = _forward(model, X)
    return probs[0] if np.asarray(x).ndim == 1 else probs


def loss(probs, gold) -> float:
    """Cross-entropy of the gold class, probability clamped at 1e-12."""
    p = float(np.asarray(probs)[Label(gold).index])
    return float(-np.log(max(p, 1e-12)))


def _gold_indices(labels) -> np.ndarray:
    return np.array([Label(l).index for l in labels], dtype=np.int64)


def batch_loss(model: CnnModel, X, labels) -> float:
    X = _check_batch(model, X)
    probs, _, _ = _forward(model, X)
    gold = _gold_indices(labels)
    return float(np.mean(-np.log(np.maximum(probs[np.arange(len(gold)), gold], 1e-12))))


def backward(model: CnnModel, X, labels) -> list[np.ndarray]:
    """Exact gradient of the mean batch cross-entropy, in ``model.parameters()`` order."""
    return loss_and_gradients(model, X, labels)[1]


def loss_and_gradients(model: CnnModel, X, labels):
    X = _check_batch(model, X)
    gold = _gold_indices(labels)
    if len(gold) == 0 or len(gold) != X.shape[0]:
        raise ValueError("batch must be non-empty with one label per sequence")
    B, L = X.shape
    D = model.embedding.shape[1]
    probs, h, cache = _forward(model, X)

    dlogits = probs.copy()
    dlogits[np.arange(B), gold] -= 1.0
    dlogits /= B
    d_dense = h.T @ dlogits
    d_dense_bias = dlogits.sum(axis=0)
    dh = dlogits @ model.dense.T

    E, cache = cache
    dE = np.zeros((B, L, D))
    d_kernels, d_biases = [], []
    offset = 0
    bidx = np.arange(B)[:, None]
    for K, (P, pos, zmax) in zip(model.conv_kernels, cache):
        F = K.shape[0]
        w = K.shape[1] // D
        # ReLU then max-pool: each pooled unit routes to its argmax position
        g = dh[:, offset:offset + F] * (zmax > 0)
        offset += F
        dz = np.zeros((B, P, F))
        dz[bidx, pos, np.arange(F)] = g
        dz2 = dz.reshape(B * P, F)
        dK = np.empty_like(K)
        for j in range(w):
            Ej = E[:, j:j + P, :].reshape(B * P, D)
            dK[:, j * D:(j + 1) * D] = dz2.T @ Ej
            dE[:, j:j + P, :] += dz @ K[:, j * D:(j + 1) * D]
        d_kernels.append(dK)
        d_biases.append(g.sum(axis=0))
    d_emb = np.zeros_like(model.embedding)
    np.add.at(d_emb, X.ravel(), dE.reshape(B * L, D))
    d_emb[0] = 0.0
    mean_loss = float(np.mean(-np.log(np.maximum(probs[np.arange(B), gold], 1e-12))))
    return mean_loss, [d_emb, *d_kernels, *d_biases, d_dense, d_dense_bias]


@dataclass
class AdamState:
    m: list
    v: list
    t: int = 0

    @classmethod
    def zeros_like(cls, params: Sequence[np.ndarray]) -> "AdamState":
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], 0)


def adam_update(params, grads, state: AdamState, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
    """One bias-corrected Adam step on a list of arrays; returns (new_params, new_state)."""
    t = state.t + 1
    new_p, new_m, new_v = [], [], []
    c1 = 1.0 - beta1 ** t
    c2 = 1.0 - beta2 ** t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        new_p.append(p - lr * (m / c1) / (np.sqrt(v / c2) + eps))
        new_m.append(m)
        new_v.append(v)
    return new_p, AdamState(new_m, new_v, t)


def adam_step(model: CnnModel, grads, state: AdamState, lr=None, beta1=None, beta2=None, eps=None):
    """Adam update of every model tensor; returns ``(new_model, new_state)``."""
    cfg = model.config
    params, state = adam_update(
        model.parameters(),
        grads,
        state,
        cfg.learning_rate if lr is None else lr,
        cfg.adam_beta1 if beta1 is None else beta1,
        cfg.adam_beta2 if beta2 is None else beta2,
        cfg.adam_eps if eps is None else eps,
    )
    out = model.copy()
    out.set_parameters(params)
    return out, state


def train_cnn(X, labels, config: CnnConfig | None = None, vocab_size: int | None = None) -> CnnModel:
    """Mini-batch Adam over seeded per-epoch shuffles; records mean loss per epoch."""
    config = config or CnnConfig()
    X = np.asarray(X, dtype=np.int64)
    gold = [Label(l) for l in labels]
    if X.ndim != 2 or X.shape[0] != len(gold):
        raise ValueError("need one index sequence per label")
    if len(set(gold)) < 2:
        raise TrainingError("training data contains a single class")
    if vocab_size is None:
        vocab_size = max(int(X.max()) - 1, 1)
    model = init_cnn(vocab_size, config)
    _check_batch(model, X)
    state = AdamState.zeros_like(model.parameters())
    rng = np.random.default_rng([config.seed, 1])
    gold_arr = np.array(gold, dtype=object)
    n = X.shape[0]
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch_mean, grads = loss_and_gradients(model, X[idx], gold_arr[idx])
            total += batch_mean * len(idx)
            model, state = adam_step(model, grads, state)
        model.loss_history.append(total / n)
        log.info("epoch %d loss %.6f", epoch + 1, total / n)
    return model


def predict_cnn(model: CnnModel, x) -> Label:
    """Argmax class; an exact tie goes to INFORMATIVE."""
    p = forward(model, x)
    return Label.INFORMATIVE if p[0] >= p[1] else Label.UNINFORMATIVE


def predict_cnn_many(model: CnnModel, X, batch_size: int = 256) -> list[Label]:
    X = np.asarray(X, dtype=np.int64)
    out = []
    for start in range(0, X.shape[0], batch_size):
        p = forward(model, X[start:start + batch_size].reshape(-1, model.config.max_len))
        out.extend(Label.INFORMATIVE if a >= b else Label.UNINFORMATIVE for a, b in p)
    return out
