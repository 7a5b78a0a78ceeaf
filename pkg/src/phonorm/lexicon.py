"""TSV-backed lexicons.

Three shapes share one file format (UTF-8, one `<col1>\\t<col2>\\n` pair per
line, no comments or blank lines):

* parallel lexicon: user transliteration -> canonical transliteration,
  training data for the character model;
* transliteration dictionary: native-script word -> canonical
  transliteration, scanned during matching and used in reverse for
  back-transliteration;
* test set: input word -> gold canonical transliteration.

Loading preserves file order exactly; several matching tie-breaks depend on
it. Serializing always terminates the last line with a newline, so a file
that lacked one round-trips with that single byte added.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path


class LexiconFormatError(ValueError):
    """Raised for files that do not follow the two-column TSV contract."""


def _parse_pairs(path, what: str) -> tuple[tuple[str, str], ...]:
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise LexiconFormatError(f"{path}: empty {what} file")
    pairs = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        cols = line.split("\t")
        if len(cols) != 2:
            raise LexiconFormatError(
                f"{path}:{lineno}: expected 2 tab-separated columns, got {len(cols)}"
            )
        first, second = cols
        if not first or not second:
            raise LexiconFormatError(f"{path}:{lineno}: empty field")
        pairs.append((first, second))
    return tuple(pairs)


def _write_pairs(entries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for first, second in entries:
            fh.write(f"{first}\t{second}\n")


def _check_entries(entries, what: str) -> None:
    for pos, (first, second) in enumerate(entries):
        if not first or not second:
            raise LexiconFormatError(f"{what} entry {pos} has an empty field")


@dataclass(frozen=True)
class ParallelLexicon:
    """Ordered (source, target) training pairs.

    Duplicate pairs and repeated sources with different targets are kept;
    the variation is the point of the data.
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        _check_entries(self.entries, "parallel lexicon")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    @property
    def targets(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.entries)


@dataclass(frozen=True)
class TransliterationDictionary:
    """Ordered (native, standard) entries; order matches the source file."""

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        _check_entries(self.entries, "dictionary")

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def standards(self) -> tuple[str, ...]:
        return tuple(std for _, std in self.entries)

    @cached_property
    def standard_set(self) -> frozenset[str]:
        return frozenset(self.standards)

    @cached_property
    def _natives_by_standard(self) -> dict[str, tuple[str, ...]]:
        by_standard: dict[str, list[str]] = {}
        for native, std in self.entries:
            by_standard.setdefault(std, []).append(native)
        return {std: tuple(natives) for std, natives in by_standard.items()}

    def reverse_lookup(self, standard: str) -> list[str]:
        """All native forms whose standard transliteration equals `standard` exactly.

        Matching is case-sensitive; results come back in file order, and an
        unknown standard yields an empty list.
        """
        return list(self._natives_by_standard.get(standard, ()))


@dataclass(frozen=True)
class TestSet:
    """Ordered (input, gold) evaluation pairs."""

    __test__ = False  # not a pytest class, despite the name

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        _check_entries(self.entries, "test set")

    def __len__(self) -> int:
        return len(self.entries)


def load_parallel_lexicon(path) -> ParallelLexicon:
    """Load a parallel lexicon, preserving entry order and duplicates."""
    return ParallelLexicon(_parse_pairs(path, "parallel lexicon"))


def load_dictionary(path) -> TransliterationDictionary:
    """Load a transliteration dictionary, preserving entry order."""
    return TransliterationDictionary(_parse_pairs(path, "dictionary"))


def load_test_set(path) -> TestSet:
    """Load a test set of (input, gold) pairs."""
    return TestSet(_parse_pairs(path, "test set"))


def reverse_lookup(dictionary: TransliterationDictionary, standard: str) -> list[str]:
    """Module-level alias for TransliterationDictionary.reverse_lookup."""
    return dictionary.reverse_lookup(standard)


def save_parallel_lexicon(lexicon: ParallelLexicon, path) -> None:
    _write_pairs(lexicon.entries, path)


def save_dictionary(dictionary: TransliterationDictionary, path) -> None:
    _write_pairs(dictionary.entries, path)


def save_test_set(testset: TestSet, path) -> None:
    _write_pairs(testset.entries, path)
