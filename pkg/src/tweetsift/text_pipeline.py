"""Tweet preprocessing: tokenize, lowercase, drop punctuation, drop stop words, stem.

Each stage is a plain function over a list of tokens so it can be tested and
reused alone; :func:`run_pipeline` chains them in that fixed order.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .porter import porter_stem

__all__ = [
    "PipelineConfig",
    "default_stopwords",
    "load_stopwords",
    "is_punct_char",
    "tokenize",
    "to_lowercase",
    "filter_punctuation",
    "filter_stopwords",
    "filter_urls_mentions",
    "stem_token",
    "stem_tokens",
    "run_pipeline",
]

_EXTRA_PUNCT = frozenset("$+<=>^|~")


@lru_cache(maxsize=4096)
def is_punct_char(ch: str) -> bool:
    """Unicode punctuation (categories P*) plus a few ASCII math/currency symbols."""
    return ch in _EXTRA_PUNCT or unicodedata.category(ch).startswith("P")


def parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if any(c.isspace() for c in line) or line != line.lower():
            raise ValueError(f"stop word must be lowercase without whitespace: {line!r}")
        words.add(line)
    return frozenset(words)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: UTF-8, one word per line, ``#`` comments ignored."""
    return parse_stopwords(Path(path).read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled 179-word English list."""
    text = resources.files("tweetsift").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return parse_stopwords(text)


@dataclass(frozen=True)
class PipelineConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    remove_stopwords: bool = True
    stem: bool = True
    stopword_list: frozenset = field(default_factory=default_stopwords)
    # URLs and @mentions are kept unless asked otherwise.
    drop_urls: bool = False
    drop_mentions: bool = False

    def __post_init__(self):
        words = frozenset(self.stopword_list)
        for w in words:
            if not w or w != w.lower() or any(c.isspace() for c in w):
                raise ValueError(f"invalid stop word {w!r}")
        object.__setattr__(self, "stopword_list", words)

    @classmethod
    def tokenize_only(cls) -> "PipelineConfig":
        return cls(lowercase=False, strip_punctuation=False, remove_stopwords=False, stem=False)


def _is_url(chunk: str) -> bool:
    return "://" in chunk


def _split_chunk(chunk: str) -> list[str]:
    if _is_url(chunk):
        return [chunk]
    start, end = 0, len(chunk)
    while start < end and is_punct_char(chunk[start]):
        # a '#' or '@' glued to the word body belongs to the token
        if chunk[start] in "#@" and start + 1 < end and not is_punct_char(chunk[start + 1]):
            break
        start += 1
    while end > start and is_punct_char(chunk[end - 1]):
        end -= 1
    out = list(chunk[:start])
    if start < end:
        out.append(chunk[start:end])
    out.extend(chunk[end:])
    return out


def tokenize(text: str) -> list[str]:
    """Split on whitespace, then peel leading/trailing punctuation into one-character tokens.

    Hashtags, mentions, URLs and tokens with internal hyphens or digits stay whole.

    >>> tokenize("Stay safe, stay home!")
    ['Stay', 'safe', ',', 'stay', 'home', '!']
    """
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return tokens


def to_lowercase(tokens: Iterable[str]) -> list[str]:
    return [t.lower() for t in tokens]


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and is_punct_char(token[start]):
        start += 1
    while end > start and is_punct_char(token[end - 1]):
        end -= 1
    return token[start:end]


def filter_punctuation(tokens: Iterable[str]) -> list[str]:
    """Drop all-punctuation tokens and strip punctuation from token edges."""
    out = []
    for t in tokens:
        s = _strip_punct(t)
        if s:
            out.append(s)
    return out


def filter_stopwords(tokens: Iterable[str], stopwords: Iterable[str] | None = None) -> list[str]:
    stop = default_stopwords() if stopwords is None else frozenset(stopwords)
    return [t for t in tokens if t not in stop]


# the shared-task files replace every link with this placeholder
URL_PLACEHOLDER = "httpurl"


def filter_urls_mentions(tokens: Iterable[str], urls: bool = True, mentions: bool = True) -> list[str]:
    out = []
    for t in tokens:
        if urls and (_is_url(t) or t.lower() == URL_PLACEHOLDER):
            continue
        if mentions and len(t) > 1 and t[0] == "@":
            continue
        out.append(t)
    return out


def stem_token(token: str) -> str:
    """Porter stem of a lowercase ASCII word; anything else is returned unchanged."""
    if token.isascii() and token.isalpha() and token.islower():
        return porter_stem(token)
    return token


def stem_tokens(tokens: Iterable[str]) -> list[str]:
    return [stem_token(t) for t in tokens]


def run_pipeline(text: str, config: PipelineConfig | None = None) -> list[str]:
    """Apply the enabled stages in order: tokenize, lowercase, punctuation, stop words, stem.

    >>> run_pipeline("Waiting for the results!")
    ['wait', 'result']
    """
    if config is None:
        config = PipelineConfig()
    tokens = tokenize(text)
    if config.drop_urls or config.drop_mentions:
        tokens = filter_urls_mentions(tokens, config.drop_urls, config.drop_mentions)
    if config.lowercase:
        tokens = to_lowercase(tokens)
    if config.strip_punctuation:
        tokens = filter_punctuation(tokens)
    if config.remove_stopwords:
        tokens = filter_stopwords(tokens, config.stopword_list)
    if config.stem:
        tokens = stem_tokens(tokens)
    return tokens
