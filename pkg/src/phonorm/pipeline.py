"""End-to-end word normalization.

Stages: pre-normalization (digits, elongation, lowercasing), optional
first-degree correction by the trained encoder-decoder, then second-degree
matching against the transliteration dictionary. The matched standard form is
the final answer; its native-script spellings come from reverse lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import TransliterationDictionary
from .matcher import (
    DEFAULT_EQUIVALENCE_CLASSES,
    MODIFIED,
    EquivalenceClasses,
    best_match_pruned,
)
from .prenorm import prenormalize
from .seq2seq import ModelParams, infer

# (first degree applied?, matching mode) -> ablation setup label
_SETUP_LABELS = {
    (False, "standard"): "setup_1",
    (False, "modified"): "setup_2",
    (True, "standard"): "setup_3",
    (True, "modified"): "setup_4",
}


@dataclass(frozen=True)
class NormalizationResult:
    """Every intermediate stage of normalizing one word."""

    input: str
    prenormalized: str
    first_degree: str
    final: str
    distance: int
    back_transliterations: tuple[str, ...]
    mode: str
    setup: str


@dataclass(frozen=True)
class BatchError:
    """A word that could not be normalized, kept in batch order."""

    index: int
    word: str
    message: str


def normalize(
    word: str,
    dictionary: TransliterationDictionary,
    model: ModelParams | None = None,
    eq: EquivalenceClasses = DEFAULT_EQUIVALENCE_CLASSES,
    mode: str = MODIFIED,
    digit_table: dict[str, str] | None = None,
) -> NormalizationResult:
    """Normalize one word and report all intermediates.

    Without a model (the no-first-degree ablations) the matcher query is the
    pre-normalized word itself. If the model decodes to an empty string, the
    pre-normalized form is matched instead so the final answer is never
    driven by degenerate decoder output.
    """
    prenormalized = prenormalize(word, digit_table)
    if model is not None:
        first_degree = infer(model, prenormalized)
    else:
        first_degree = prenormalized
    query = first_degree if first_degree else prenormalized
    match = best_match_pruned(query, dictionary, mode=mode, eq=eq)
    return NormalizationResult(
        input=word,
        prenormalized=prenormalized,
        first_degree=first_degree,
        final=match.matched_standard,
        distance=match.distance,
        back_transliterations=tuple(dictionary.reverse_lookup(match.matched_standard)),
        mode=mode,
        setup=_SETUP_LABELS[(model is not None, mode)],
    )


def normalize_batch(
    words,
    dictionary: TransliterationDictionary,
    model: ModelParams | None = None,
    eq: EquivalenceClasses = DEFAULT_EQUIVALENCE_CLASSES,
    mode: str = MODIFIED,
    digit_table: dict[str, str] | None = None,
) -> list[NormalizationResult | BatchError]:
    """Normalize many words, in order.

    Per-word failures (e.g. characters outside the model's alphabet) become
    BatchError entries in their input position instead of aborting the batch.
    """
    out: list[NormalizationResult | BatchError] = []
    for index, word in enumerate(words):
        try:
            out.append(normalize(word, dictionary, model, eq, mode, digit_table))
        except (ValueError, KeyError) as exc:
            out.append(BatchError(index=index, word=word, message=str(exc)))
    return out
