"""Normalization of phonetically transliterated code-mixed words.

Pipeline: rule-based pre-normalization, an optional character-level
encoder-decoder correction (first degree), and dictionary matching by
(equivalence-class-modified) edit distance (second degree), with reverse
lookup back to native script.
"""

from .charcodec import Alphabet, EncodingError, build_alphabet, decode, encode, to_one_hot
from .evaluation import (
    EvalReport,
    NoiseModel,
    SetupId,
    SyntheticBenchmark,
    error_analysis,
    evaluate,
    generate_benchmark,
)
from .lexicon import (
    LexiconFormatError,
    ParallelLexicon,
    TestSet,
    TransliterationDictionary,
    load_dictionary,
    load_parallel_lexicon,
    load_test_set,
    reverse_lookup,
)
from .matcher import (
    DEFAULT_EQUIVALENCE_CLASSES,
    MODIFIED,
    STANDARD,
    EquivalenceClasses,
    MatchResult,
    best_match,
    best_match_pruned,
    canonicalize,
    levenshtein,
    modified_levenshtein,
    tie_break_score,
)
from .pipeline import NormalizationResult, normalize, normalize_batch
from .prenorm import expand_digits, prenormalize, trim_elongation
from .seq2seq import (
    CheckpointError,
    ModelParams,
    TrainingConfig,
    TrainingTrace,
    infer,
    load_checkpoint,
    save_checkpoint,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CheckpointError",
    "DEFAULT_EQUIVALENCE_CLASSES",
    "EncodingError",
    "EquivalenceClasses",
    "EvalReport",
    "LexiconFormatError",
    "MODIFIED",
    "MatchResult",
    "ModelParams",
    "NoiseModel",
    "NormalizationResult",
    "ParallelLexicon",
    "STANDARD",
    "SetupId",
    "SyntheticBenchmark",
    "TestSet",
    "TrainingConfig",
    "TrainingTrace",
    "TransliterationDictionary",
    "best_match",
    "best_match_pruned",
    "build_alphabet",
    "canonicalize",
    "decode",
    "encode",
    "error_analysis",
    "evaluate",
    "expand_digits",
    "generate_benchmark",
    "infer",
    "levenshtein",
    "load_checkpoint",
    "load_dictionary",
    "load_parallel_lexicon",
    "load_test_set",
    "modified_levenshtein",
    "normalize",
    "normalize_batch",
    "prenormalize",
    "reverse_lookup",
    "save_checkpoint",
    "tie_break_score",
    "to_one_hot",
    "train",
    "trim_elongation",
]
