"""Character index coding for the sequence model.

An Alphabet assigns dense indices to reserved markers plus the observed
content characters. Words become fixed-length index sequences (right-padded),
and index sequences become one-hot matrices. The target side wraps words in
explicit start/end markers so the decoder has a begin symbol and a stop
condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

SOURCE = "source"
TARGET = "target"

PAD_MARKER = "<pad>"
START_MARKER = "<s>"
END_MARKER = "</s>"

_ASCII_LOWER = "abcdefghijklmnopqrstuvwxyz"


class EncodingError(ValueError):
    """Raised when a word cannot be encoded with a given alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """Index mapping for one side of the model.

    Index layout: pad at 0 (plus start at 1 and end at 2 on the target side),
    then content characters. `content` order is fixed at construction;
    build_alphabet always sorts it by code point.
    """

    side: str
    content: tuple[str, ...]

    def __post_init__(self):
        if self.side not in (SOURCE, TARGET):
            raise ValueError(f"side must be {SOURCE!r} or {TARGET!r}, got {self.side!r}")
        if not self.content:
            raise ValueError("alphabet needs at least one content character")
        if any(len(ch) != 1 for ch in self.content):
            raise ValueError("content symbols must be single characters")
        if len(set(self.content)) != len(self.content):
            raise ValueError("duplicate content characters")

    @property
    def reserved(self) -> tuple[str, ...]:
        if self.side == SOURCE:
            return (PAD_MARKER,)
        return (PAD_MARKER, START_MARKER, END_MARKER)

    @property
    def pad_index(self) -> int:
        return 0

    @property
    def start_index(self) -> int | None:
        return 1 if self.side == TARGET else None

    @property
    def end_index(self) -> int | None:
        return 2 if self.side == TARGET else None

    @property
    def size(self) -> int:
        return len(self.reserved) + len(self.content)

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.reserved + self.content

    @cached_property
    def _content_index(self) -> dict[str, int]:
        offset = len(self.reserved)
        return {ch: offset + pos for pos, ch in enumerate(self.content)}

    def __contains__(self, ch: str) -> bool:
        return ch in self._content_index

    def index_of(self, ch: str) -> int:
        try:
            return self._content_index[ch]
        except KeyError:
            raise EncodingError(f"character {ch!r} is not in the {self.side} alphabet") from None

    def is_content(self, index: int) -> bool:
        return len(self.reserved) <= index < self.size

    def char_at(self, index: int) -> str:
        if not self.is_content(index):
            raise EncodingError(f"index {index} is not a content character")
        return self.content[index - len(self.reserved)]


@dataclass(frozen=True)
class EncodedSequence:
    """Fixed-length index sequence; mask flags the non-pad positions."""

    indices: tuple[int, ...]
    mask: tuple[bool, ...]


def build_alphabet(corpora: Iterable[str], side: str) -> Alphabet:
    """Build an alphabet from every character observed in `corpora`.

    The source side snaps to the full 26 lowercase ASCII letters whenever the
    corpus stays within them, so typical models share one stable input
    alphabet. Symbol order is sorted by code point, which makes builds from
    the same corpus identical.
    """
    words = list(corpora)
    if not words:
        raise ValueError("cannot build an alphabet from an empty corpus")
    observed = {ch for word in words for ch in word}
    if not observed:
        raise ValueError("corpus contains no characters")
    if side == SOURCE and observed <= set(_ASCII_LOWER):
        content = tuple(_ASCII_LOWER)
    else:
        content = tuple(sorted(observed))
    return Alphabet(side=side, content=content)


def encode(word: str, alphabet: Alphabet, max_len: int) -> EncodedSequence:
    """Encode a word as indices padded to the model length.

    Source words become max_len indices; target words are wrapped in
    start/end and become max_len + 2. Unknown characters and overlong words
    are errors.
    """
    if len(word) > max_len:
        raise EncodingError(f"word {word!r} has {len(word)} characters, max_len is {max_len}")
    body = [alphabet.index_of(ch) for ch in word]
    if alphabet.side == SOURCE:
        indices = body + [alphabet.pad_index] * (max_len - len(body))
        mask = [True] * len(body) + [False] * (max_len - len(body))
    else:
        wrapped = [alphabet.start_index] + body + [alphabet.end_index]
        pad = max_len + 2 - len(wrapped)
        indices = wrapped + [alphabet.pad_index] * pad
        mask = [True] * len(wrapped) + [False] * pad
    return EncodedSequence(indices=tuple(indices), mask=tuple(mask))


def to_one_hot(encoded: EncodedSequence, alphabet: Alphabet) -> np.ndarray:
    """One-hot matrix (sequence length x alphabet size), float64."""
    n = len(encoded.indices)
    out = np.zeros((n, alphabet.size), dtype=np.float64)
    for row, index in enumerate(encoded.indices):
        if not 0 <= index < alphabet.size:
            raise EncodingError(f"index {index} out of range for alphabet of size {alphabet.size}")
        out[row, index] = 1.0
    return out


def decode(indices: Sequence[int], alphabet: Alphabet) -> str:
    """Inverse of encode: content characters up to the end marker.

    Pad (and the target-side start marker) are skipped; the end marker stops
    decoding. Out-of-range indices are errors.
    """
    chars = []
    for index in indices:
        i = int(index)
        if not 0 <= i < alphabet.size:
            raise EncodingError(f"index {i} out of range for alphabet of size {alphabet.size}")
        if i == alphabet.pad_index or i == alphabet.start_index:
            continue
        if i == alphabet.end_index:
            break
        chars.append(alphabet.char_at(i))
    return "".join(chars)
