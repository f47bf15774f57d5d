"""Dataset TSV files, prediction files and the binary ``TWSF`` model format.

Dataset rows are ``Id<TAB>Text[<TAB>Label]``. Tabs, newlines, carriage
returns and backslashes inside tweet text are written as ``\\t``, ``\\n``,
``\\r`` and ``\\\\``.

Model files: ``b"TWSF"``, uint16 version, uint8 model tag, then three
uint64-length-prefixed sections (pipeline, features, model payload). All
integers are little-endian, all reals float64.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .classifier import TrainedModel
from .features import Featurizer, IndexEncoder, TfIdfModel, Vocabulary
from .labels import Label
from .linear_svm import LinearSvmModel
from .random_forest import RandomForestModel, Tree
from .text_cnn import CnnConfig, CnnModel
from .text_pipeline import PipelineConfig


class DataFormatError(ValueError):
    """Malformed dataset or prediction file."""


class ModelFormatError(ValueError):
    """Base class for unreadable model files."""


class NotAModelFileError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


# ---------------------------------------------------------------- datasets

@dataclass(frozen=True)
class LabeledTweet:
    id: str
    text: str
    label: Optional[Label] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("tweet id must be non-empty")


@dataclass(frozen=True)
class DatasetSplit:
    name: str
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def texts(self) -> list[str]:
        return [r.text for r in self.rows]

    @property
    def labels(self) -> list:
        return [r.label for r in self.rows]


_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "\\": "\\"}


def escape_text(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")
    )


def unescape_text(text: str) -> str:
    """Decode the four escapes; any other backslash is kept literally."""
    if "\\" not in text:
        return text
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text) and text[i + 1] in _ESCAPES:
            out.append(_ESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        data = fh.read()
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [l[:-1] if l.endswith("\r") else l for l in lines]


def load_tsv(path, name: str | None = None) -> DatasetSplit:
    """Read a 2-column (unlabeled) or 3-column (labeled) TSV, skipping an ``Id`` header."""
    rows, seen = [], set()
    for lineno, line in enumerate(_read_lines(path), 1):
        cells = line.split("\t")
        if lineno == 1 and cells[0].strip().lower() == "id":
            continue
        if not line.strip():
            continue
        if len(cells) not in (2, 3):
            raise DataFormatError(f"{path}:{lineno}: expected 2 or 3 columns, found {len(cells)}")
        rid = cells[0]
        if not rid:
            raise DataFormatError(f"{path}:{lineno}: empty id")
        if rid in seen:
            raise DataFormatError(f"{path}:{lineno}: duplicate id {rid!r}")
        seen.add(rid)
        label = None
        if len(cells) == 3:
            try:
                label = Label.parse(cells[2])
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: unknown label {cells[2]!r}") from None
        rows.append(LabeledTweet(rid, unescape_text(cells[1]), label))
    return DatasetSplit(name or Path(path).stem, rows)


def write_tsv(path, split: DatasetSplit, header: bool = True) -> None:
    lines = []
    labeled = any(r.label is not None for r in split.rows)
    if header:
        lines.append("Id\tText\tLabel" if labeled else "Id\tText")
    for r in split.rows:
        cells = [r.id, escape_text(r.text)]
        if r.label is not None:
            cells.append(r.label.value)
        lines.append("\t".join(cells))
    Path(path).write_text("".join(l + "\n" for l in lines), encoding="utf-8")


def class_counts(split: DatasetSplit) -> tuple[int, int, int]:
    """(INFORMATIVE, UNINFORMATIVE, unlabeled) tallies."""
    inf = sum(1 for r in split.rows if r.label is Label.INFORMATIVE)
    uninf = sum(1 for r in split.rows if r.label is Label.UNINFORMATIVE)
    return inf, uninf, len(split.rows) - inf - uninf


def merge_splits(a: DatasetSplit, b: DatasetSplit, name: str | None = None) -> DatasetSplit:
    """Concatenate ``a`` then ``b``; ids must not collide."""
    ids = {r.id for r in a.rows}
    for r in b.rows:
        if r.id in ids:
            raise DataFormatError(f"id {r.id!r} appears in both {a.name} and {b.name}")
    return DatasetSplit(name or f"{a.name}+{b.name}", a.rows + b.rows)


def write_predictions(path, rows: Iterable[tuple[str, Label]]) -> None:
    """``Id<TAB>Label`` header, one row per prediction in input order."""
    out = ["Id\tLabel\n"]
    seen = set()
    for rid, label in rows:
        if rid in seen:
            raise ValueError(f"duplicate id {rid!r}")
        seen.add(rid)
        out.append(f"{rid}\t{Label(label).value}\n")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("".join(out))


def read_prediction_rows(path) -> list[tuple[int, tuple[str, Label]]]:
    """``(line_number, (id, label))`` pairs; the label is the last column."""
    out = []
    for lineno, line in enumerate(_read_lines(path), 1):
        cells = line.split("\t")
        if lineno == 1 and cells[0].strip().lower() == "id":
            continue
        if not line.strip():
            continue
        if len(cells) < 2:
            raise DataFormatError(f"{path}:{lineno}: expected id and label columns")
        try:
            label = Label.parse(cells[-1].strip())
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: unknown label {cells[-1]!r} for id {cells[0]!r}") from None
        out.append((lineno, (cells[0], label)))
    return out


# ---------------------------------------------------------------- model files

MAGIC = b"TWSF"
FORMAT_VERSION = 1
_TAGS = {"svm": 1, "rf": 2, "cnn": 3}
_KINDS = {v: k for k, v in _TAGS.items()}


class _Writer:
    def __init__(self):
        self.parts: list[bytes] = []

    def u8(self, v):
        self.parts.append(struct.pack("<B", v))

    def u32(self, v):
        self.parts.append(struct.pack("<I", v))

    def u64(self, v):
        self.parts.append(struct.pack("<Q", v))

    def i64(self, v):
        self.parts.append(struct.pack("<q", v))

    def f64(self, v):
        self.parts.append(struct.pack("<d", v))

    def str(self, s: str):
        b = s.encode("utf-8")
        self.u32(len(b))
        self.parts.append(b)

    def array(self, a: np.ndarray, dtype: str):
        a = np.ascontiguousarray(a, dtype=dtype)
        self.u8(a.ndim)
        for d in a.shape:
            self.u64(d)
        self.parts.append(a.tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedModelError("model file is truncated")
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def _unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))[0]

    def u8(self):
        return self._unpack("<B")

    def u16(self):
        return self._unpack("<H")

    def u32(self):
        return self._unpack("<I")

    def u64(self):
        return self._unpack("<Q")

    def i64(self):
        return self._unpack("<q")

    def f64(self):
        return self._unpack("<d")

    def str(self):
        try:
            return self.take(self.u32()).decode("utf-8")
        except UnicodeDecodeError:
            raise ModelFormatError("corrupt string in model file") from None

    def array(self, dtype: str) -> np.ndarray:
        ndim = self.u8()
        shape = tuple(self.u64() for _ in range(ndim))
        n = int(np.prod(shape)) if shape else 1
        raw = self.take(n * np.dtype(dtype).itemsize)
        return np.frombuffer(raw, dtype=dtype).reshape(shape).astype(dtype[1:] if dtype[0] == "<" else dtype)

    def done(self):
        if self.pos != len(self.data):
            raise ModelFormatError("trailing bytes in model section")


def _write_pipeline(w: _Writer, p: PipelineConfig):
    for flag in (p.lowercase, p.strip_punctuation, p.remove_stopwords, p.stem, p.drop_urls, p.drop_mentions):
        w.u8(int(flag))
    words = sorted(p.stopword_list)
    w.u32(len(words))
    for s in words:
        w.str(s)


def _read_pipeline(r: _Reader) -> PipelineConfig:
    flags = [bool(r.u8()) for _ in range(6)]
    words = frozenset(r.str() for _ in range(r.u32()))
    return PipelineConfig(
        lowercase=flags[0], strip_punctuation=flags[1], remove_stopwords=flags[2], stem=flags[3],
        stopword_list=words, drop_urls=flags[4], drop_mentions=flags[5],
    )


def _write_vocab(w: _Writer, v: Vocabulary):
    w.str(v.analyzer)
    w.u32(v.ngram_min)
    w.u32(v.ngram_max)
    w.u64(v.corpus_size)
    w.u32(len(v))
    for term, df in zip(v.terms, v.document_frequency):
        w.str(term)
        w.u64(df)


def _read_vocab(r: _Reader) -> Vocabulary:
    analyzer = r.str()
    nmin, nmax, corpus = r.u32(), r.u32(), r.u64()
    n = r.u32()
    terms, dfs = {}, []
    for i in range(n):
        terms[r.str()] = i
        dfs.append(r.u64())
    return Vocabulary(terms, tuple(dfs), nmin, nmax, corpus, analyzer)


def _write_features(w: _Writer, f):
    if isinstance(f, IndexEncoder):
        w.u8(2)
        _write_vocab(w, f.vocab)
        w.u32(f.max_len)
        return
    w.u8(1)
    _write_vocab(w, f.tfidf.vocab)
    w.array(f.tfidf.idf, "<f8")
    w.u8(int(f.tfidf.l2_normalize))
    w.u8(int(f.char_vocab is not None))
    if f.char_vocab is not None:
        _write_vocab(w, f.char_vocab)


def _read_features(r: _Reader):
    kind = r.u8()
    if kind == 2:
        vocab = _read_vocab(r)
        return IndexEncoder(vocab, r.u32())
    if kind != 1:
        raise ModelFormatError(f"unknown feature block {kind}")
    vocab = _read_vocab(r)
    idf = r.array("<f8")
    l2 = bool(r.u8())
    char_vocab = _read_vocab(r) if r.u8() else None
    return Featurizer(TfIdfModel(vocab, idf, l2), char_vocab)


def _write_payload(w: _Writer, kind: str, m):
    if kind == "svm":
        w.array(m.weights, "<f8")
        w.f64(m.bias)
        w.f64(m.lam)
        w.u32(m.epochs)
        w.i64(m.seed)
    elif kind == "rf":
        for v in (m.dim, m.n_trees, m.max_depth, m.min_leaf, m.features_per_split):
            w.u64(v)
        w.i64(m.seed)
        for t in m.trees:
            w.array(t.feature, "<i8")
            w.array(t.threshold, "<f8")
            w.array(t.right, "<i8")
            w.array(t.counts, "<i8")
    else:
        c = m.config
        for v in (c.embed_dim, c.filters_per_width, c.max_len, c.epochs, c.batch_size):
            w.u64(v)
        w.array(np.array(c.filter_widths), "<i8")
        for v in (c.learning_rate, c.adam_beta1, c.adam_beta2, c.adam_eps):
            w.f64(v)
        w.i64(c.seed)
        params = m.parameters()
        w.u32(len(params))
        for p in params:
            w.array(p, "<f8")
        w.array(np.array(m.loss_history, dtype=np.float64), "<f8")


def _read_payload(r: _Reader, kind: str):
    if kind == "svm":
        weights = r.array("<f8")
        return LinearSvmModel(weights, r.f64(), r.f64(), r.u32(), r.i64())
    if kind == "rf":
        dim, n_trees, max_depth, min_leaf, fps = (r.u64() for _ in range(5))
        seed = r.i64()
        trees = []
        for _ in range(n_trees):
            feature = r.array("<i8")
            threshold = r.array("<f8")
            right = r.array("<i8")
            counts = r.array("<i8")
            trees.append(Tree(feature, threshold, right, counts))
        return RandomForestModel(tuple(trees), dim, n_trees, max_depth, min_leaf, fps, seed)
    embed, fpw, max_len, epochs, batch = (r.u64() for _ in range(5))
    widths = tuple(int(x) for x in r.array("<i8"))
    lr, b1, b2, eps = (r.f64() for _ in range(4))
    cfg = CnnConfig(embed, widths, fpw, max_len, epochs, batch, lr, b1, b2, eps, r.i64())
    params = [r.array("<f8") for _ in range(r.u32())]
    k = len(widths)
    if len(params) != 3 + 2 * k:
        raise ModelFormatError("wrong number of CNN tensors")
    history = r.array("<f8").tolist()
    return CnnModel(params[0], params[1:1 + k], params[1 + k:1 + 2 * k], params[1 + 2 * k], params[2 + 2 * k], cfg, history)


def model_to_bytes(tm: TrainedModel) -> bytes:
    sections = []
    for fn, arg in ((_write_pipeline, tm.pipeline), (_write_features, tm.featurizer)):
        w = _Writer()
        fn(w, arg)
        sections.append(w.getvalue())
    w = _Writer()
    _write_payload(w, tm.kind, tm.model)
    sections.append(w.getvalue())
    head = MAGIC + struct.pack("<HB", FORMAT_VERSION, _TAGS[tm.kind])
    return head + b"".join(struct.pack("<Q", len(s)) + s for s in sections)


def model_from_bytes(data: bytes) -> TrainedModel:
    if data[:4] != MAGIC:
        raise NotAModelFileError("not a model file (bad magic bytes)")
    r = _Reader(data)
    r.take(4)
    version = r.u16()
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported model format version {version}")
    tag = r.u8()
    if tag not in _KINDS:
        raise ModelFormatError(f"unknown model type tag {tag}")
    kind = _KINDS[tag]
    sections = [_Reader(r.take(r.u64())) for _ in range(3)]
    r.done()
    try:
        pipeline = _read_pipeline(sections[0])
        featurizer = _read_features(sections[1])
        model = _read_payload(sections[2], kind)
    except (ValueError, struct.error) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"corrupt model file: {exc}") from None
    for s in sections:
        s.done()
    return TrainedModel(kind, pipeline, featurizer, model)


def save_model(path, tm: TrainedModel) -> None:
    Path(path).write_bytes(model_to_bytes(tm))


def load_model(path) -> TrainedModel:
    return model_from_bytes(Path(path).read_bytes())
