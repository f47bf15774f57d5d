"""Word n-gram vocabularies, count/TF-IDF sparse vectors and padded index sequences."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .sparse import SparseVector

PAD_INDEX = 0
UNK_INDEX = 1


def _check_range(nmin: int, nmax: int) -> None:
    if not (1 <= nmin <= nmax):
        raise ValueError(f"invalid n-gram range ({nmin}, {nmax})")


def extract_ngrams(tokens: Sequence[str], nmin: int = 1, nmax: int = 1) -> list[str]:
    """All contiguous n-grams of orders ``nmin..nmax`` joined by single spaces.

    Lower orders come first, each order in document order.
    """
    _check_range(nmin, nmax)
    tokens = list(tokens)
    out = []
    for n in range(nmin, nmax + 1):
        for i in range(len(tokens) - n + 1):
            out.append(" ".join(tokens[i:i + n]))
    return out


def extract_char_ngrams(tokens: Sequence[str], nmin: int = 2, nmax: int = 5) -> list[str]:
    """Character n-grams over the space-joined token string."""
    _check_range(nmin, nmax)
    text = " ".join(tokens)
    return [text[i:i + n] for n in range(nmin, nmax + 1) for i in range(len(text) - n + 1)]


@dataclass(frozen=True)
class Vocabulary:
    """Term to column map; indices follow lexicographic term order."""

    term_to_index: dict
    document_frequency: tuple
    ngram_min: int
    ngram_max: int
    corpus_size: int
    analyzer: str = "word"

    def __post_init__(self):
        _check_range(self.ngram_min, self.ngram_max)
        if sorted(self.term_to_index.values()) != list(range(len(self.term_to_index))):
            raise ValueError("vocabulary indices must be 0..V-1")
        if len(self.document_frequency) != len(self.term_to_index):
            raise ValueError("document_frequency length mismatch")
        for df in self.document_frequency:
            if not 1 <= df <= self.corpus_size:
                raise ValueError(f"document frequency {df} outside [1, {self.corpus_size}]")

    def __len__(self) -> int:
        return len(self.term_to_index)

    @property
    def terms(self) -> list[str]:
        out = [""] * len(self.term_to_index)
        for t, i in self.term_to_index.items():
            out[i] = t
        return out

    def grams(self, tokens: Sequence[str]) -> list[str]:
        if self.analyzer == "char":
            return extract_char_ngrams(tokens, self.ngram_min, self.ngram_max)
        return extract_ngrams(tokens, self.ngram_min, self.ngram_max)


def build_vocabulary(
    corpus: Sequence[Sequence[str]],
    nmin: int = 1,
    nmax: int = 1,
    min_df: int = 1,
    min_df_ngram: int | None = None,
    analyzer: str = "word",
) -> Vocabulary:
    """Collect every n-gram whose document frequency reaches ``min_df``.

    ``min_df_ngram``, when given, replaces ``min_df`` for word n-grams of
    order two and above.
    """
    if len(corpus) == 0:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if min_df < 1 or (min_df_ngram is not None and min_df_ngram < 1):
        raise ValueError("min_df must be >= 1")
    _check_range(nmin, nmax)
    if analyzer not in ("word", "char"):
        raise ValueError(f"unknown analyzer {analyzer!r}")
    grams = extract_char_ngrams if analyzer == "char" else extract_ngrams
    df: Counter = Counter()
    for doc in corpus:
        df.update(set(grams(doc, nmin, nmax)))

    def threshold(term: str) -> int:
        if analyzer == "word" and min_df_ngram is not None and " " in term:
            return min_df_ngram
        return min_df

    kept = sorted(t for t, c in df.items() if c >= threshold(t))
    return Vocabulary(
        term_to_index={t: i for i, t in enumerate(kept)},
        document_frequency=tuple(df[t] for t in kept),
        ngram_min=nmin,
        ngram_max=nmax,
        corpus_size=len(corpus),
        analyzer=analyzer,
    )


def count_vector(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """Raw in-vocabulary n-gram counts; out-of-vocabulary grams are ignored."""
    lookup = vocab.term_to_index
    counts = Counter(lookup[g] for g in vocab.grams(tokens) if g in lookup)
    if not counts:
        return SparseVector(len(vocab))
    idx = np.array(sorted(counts), dtype=np.int64)
    val = np.array([counts[i] for i in idx.tolist()], dtype=np.float64)
    return SparseVector(len(vocab), idx, val, _trusted=True)


@dataclass(frozen=True)
class TfIdfModel:
    vocab: Vocabulary
    idf: np.ndarray
    l2_normalize: bool = True

    def __post_init__(self):
        idf = np.asarray(self.idf, dtype=np.float64)
        if idf.shape != (len(self.vocab),):
            raise ValueError("idf length must equal vocabulary size")
        idf.flags.writeable = False
        object.__setattr__(self, "idf", idf)

    @property
    def dim(self) -> int:
        return len(self.vocab)

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        return transform_tfidf(tokens, self)


def smoothed_idf(df: np.ndarray, n_docs: int) -> np.ndarray:
    """ln((1 + N) / (1 + df)) + 1."""
    df = np.asarray(df, dtype=np.float64)
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def fit_tfidf(
    corpus: Sequence[Sequence[str]],
    nmin: int = 1,
    nmax: int = 1,
    min_df: int = 1,
    min_df_ngram: int | None = None,
    l2_normalize: bool = True,
) -> TfIdfModel:
    vocab = build_vocabulary(corpus, nmin, nmax, min_df, min_df_ngram)
    idf = smoothed_idf(np.array(vocab.document_frequency), vocab.corpus_size)
    return TfIdfModel(vocab, idf, l2_normalize)


def transform_tfidf(tokens: Sequence[str], model: TfIdfModel) -> SparseVector:
    counts = count_vector(tokens, model.vocab)
    if counts.nnz == 0:
        return counts
    vals = counts.values * model.idf[counts.indices]
    if model.l2_normalize:
        vals = vals / math.sqrt(float(np.dot(vals, vals)))
    return SparseVector(counts.dim, counts.indices, vals, _trusted=True)


@dataclass(frozen=True)
class Featurizer:
    """Word TF-IDF block, optionally followed by a character n-gram count block."""

    tfidf: TfIdfModel
    char_vocab: Vocabulary | None = None

    @property
    def dim(self) -> int:
        return self.tfidf.dim + (len(self.char_vocab) if self.char_vocab is not None else 0)

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        v = transform_tfidf(tokens, self.tfidf)
        if self.char_vocab is not None:
            v = v.concat(count_vector(tokens, self.char_vocab))
        return v

    def transform_many(self, corpus: Iterable[Sequence[str]]) -> list[SparseVector]:
        return [self.transform(doc) for doc in corpus]


@dataclass(frozen=True)
class FeatureConfig:
    ngram_min: int = 1
    ngram_max: int = 3
    min_df: int = 1
    min_df_ngram: int = 2
    char_ngrams: bool = False
    char_min: int = 2
    char_max: int = 5
    char_min_df: int = 2


def fit_featurizer(corpus: Sequence[Sequence[str]], config: FeatureConfig | None = None) -> Featurizer:
    config = config or FeatureConfig()
    tfidf = fit_tfidf(corpus, config.ngram_min, config.ngram_max, config.min_df, config.min_df_ngram)
    char_vocab = None
    if config.char_ngrams:
        char_vocab = build_vocabulary(
            corpus, config.char_min, config.char_max, config.char_min_df, analyzer="char"
        )
    return Featurizer(tfidf, char_vocab)


@dataclass(frozen=True)
class IndexEncoder:
    """Maps unigrams to ``vocab index + 2``; 0 pads, 1 marks unknown terms."""

    vocab: Vocabulary
    max_len: int = 143

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        return encode_sequence(tokens, self.vocab, self.max_len)


def encode_sequence(tokens: Sequence[str], vocab: Vocabulary, max_len: int = 143) -> np.ndarray:
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    lookup = vocab.term_to_index
    out = np.full(max_len, PAD_INDEX, dtype=np.int64)
    for i, tok in enumerate(list(tokens)[:max_len]):
        j = lookup.get(tok)
        out[i] = UNK_INDEX if j is None else j + 2
    return out


def dump_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Write ``index<TAB>term<TAB>document_frequency`` lines sorted by index."""
    lines = [
        f"{i}\t{t}\t{df}\n"
        for i, (t, df) in enumerate(zip(vocab.terms, vocab.document_frequency))
    ]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_vocabulary(path: str | Path, ngram_min: int, ngram_max: int, corpus_size: int) -> Vocabulary:
    term_to_index, dfs = {}, []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        parts = line.split("\t")
        if len(parts) != 3 or int(parts[0]) != lineno - 1:
            raise ValueError(f"line {lineno}: malformed vocabulary entry")
        term_to_index[parts[1]] = int(parts[0])
        dfs.append(int(parts[2]))
    return Vocabulary(term_to_index, tuple(dfs), ngram_min, ngram_max, corpus_size)
