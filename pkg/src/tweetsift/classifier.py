"""A trained model bundled with the exact preprocessing and features it was fit on."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .features import FeatureConfig, Featurizer, IndexEncoder, build_vocabulary, fit_featurizer
from .labels import Label
from .linear_svm import LinearSvmModel, TrainingError, decision_function, train_svm
from .random_forest import RandomForestModel, predict_forest_many, train_forest
from .sparse import to_csr
from .text_cnn import CnnConfig, CnnModel, predict_cnn_many, train_cnn
from .text_pipeline import PipelineConfig, run_pipeline

MODEL_KINDS = ("svm", "rf", "cnn")


@dataclass(eq=False)
class TrainedModel:
    kind: str
    pipeline: PipelineConfig
    featurizer: Union[Featurizer, IndexEncoder]
    model: Union[LinearSvmModel, RandomForestModel, CnnModel]

    def tokens(self, texts: Sequence[str]) -> list[list[str]]:
        return [run_pipeline(t, self.pipeline) for t in texts]

    def predict_tokens(self, docs: Sequence[Sequence[str]]) -> list[Label]:
        if not docs:
            return []
        if self.kind == "cnn":
            X = np.stack([self.featurizer.encode(d) for d in docs])
            return predict_cnn_many(self.model, X)
        vecs = self.featurizer.transform_many(docs)
        if self.kind == "svm":
            return [Label.from_sign(decision_function(self.model, v)) for v in vecs]
        return predict_forest_many(self.model, to_csr(vecs, self.featurizer.dim))

    def predict(self, texts: Sequence[str]) -> list[Label]:
        return self.predict_tokens(self.tokens(texts))


def train_model(
    kind: str,
    texts: Sequence[str],
    labels: Sequence,
    pipeline: PipelineConfig | None = None,
    features: FeatureConfig | None = None,
    *,
    seed: int = 42,
    svm_lambda: float = 1e-4,
    svm_epochs: int = 50,
    n_trees: int = 500,
    max_depth: int = 26,
    min_leaf: int = 1,
    features_per_split: int | None = None,
    threads: int = 1,
    cnn_config: CnnConfig | None = None,
) -> TrainedModel:
    """Preprocess, featurize and fit one model kind (``svm``, ``rf`` or ``cnn``)."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    labels = [Label(l) for l in labels]
    if len(set(labels)) < 2:
        raise TrainingError("training data contains a single class")
    pipeline = pipeline or PipelineConfig()
    docs = [run_pipeline(t, pipeline) for t in texts]

    if kind == "cnn":
        cfg = cnn_config or CnnConfig(seed=seed)
        vocab = build_vocabulary(docs, 1, 1, 1)
        enc = IndexEncoder(vocab, cfg.max_len)
        X = np.stack([enc.encode(d) for d in docs])
        model = train_cnn(X, labels, cfg, vocab_size=max(len(vocab), 1))
        return TrainedModel(kind, pipeline, enc, model)

    feat = fit_featurizer(docs, features or FeatureConfig())
    X = feat.transform_many(docs)
    if kind == "svm":
        model = train_svm(X, labels, svm_lambda, svm_epochs, seed)
    else:
        model = train_forest(
            to_csr(X, feat.dim), labels, n_trees, max_depth, min_leaf, features_per_split, seed, threads
        )
    return TrainedModel(kind, pipeline, feat, model)
