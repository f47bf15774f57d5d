"""The two task labels and their numeric encodings."""

from __future__ import annotations

import enum


class Label(str, enum.Enum):
    INFORMATIVE = "INFORMATIVE"
    UNINFORMATIVE = "UNINFORMATIVE"

    @property
    def sign(self) -> int:
        """+1 for INFORMATIVE, -1 for UNINFORMATIVE (linear models)."""
        return 1 if self is Label.INFORMATIVE else -1

    @property
    def index(self) -> int:
        """Class index: 0 for INFORMATIVE, 1 for UNINFORMATIVE."""
        return 0 if self is Label.INFORMATIVE else 1

    @classmethod
    def from_sign(cls, s: float) -> "Label":
        return cls.INFORMATIVE if s >= 0 else cls.UNINFORMATIVE

    @classmethod
    def from_index(cls, i: int) -> "Label":
        return cls.INFORMATIVE if i == 0 else cls.UNINFORMATIVE

    @classmethod
    def parse(cls, text: str) -> "Label":
        """Parse an exact label string; raises ``ValueError`` otherwise."""
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown label {text!r}") from None

    def __str__(self) -> str:
        return self.value


INFORMATIVE = Label.INFORMATIVE
UNINFORMATIVE = Label.UNINFORMATIVE


def as_signs(labels) -> "list[int]":
    return [Label(l).sign for l in labels]
