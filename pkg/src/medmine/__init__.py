"""Deterministic corpus engineering for medication-mention detection in tweets.

Load and validate annotated tweet corpora, clean text without losing
offsets, augment positive examples span-consistently, mix and split
datasets, and score span predictions strictly and by overlap. Every
stage is seed-deterministic and stamps provenance on its outputs.
"""

__version__ = "0.1.0"

from medmine.augment import AugmentationPlan, PlanStep, derive_seed, run_plan
from medmine.baseline import Gazetteer
from medmine.corpus import (
    AnnotatedTweet,
    Corpus,
    CorpusStats,
    Mention,
    Tweet,
    corpus_stats,
    is_positive,
    load_corpus,
    read_interchange,
    write_corpus_tsv,
    write_interchange,
)
from medmine.datamix import MixRecipe, merge, split
from medmine.errors import MedmineError
from medmine.evaluate import EvalReport, PredictionSet, Span, evaluate, f1, match_spans
from medmine.normalize import (
    CleanedTweet,
    OffsetMap,
    Projection,
    clean_text,
    project_to_cleaned,
    project_to_original,
    tokenize_text,
)
from medmine.pool import EntityPool, TermList, build_pool, fetch_corpus, merge_terms

__all__ = [
    "AnnotatedTweet",
    "AugmentationPlan",
    "CleanedTweet",
    "Corpus",
    "CorpusStats",
    "EntityPool",
    "EvalReport",
    "Gazetteer",
    "MedmineError",
    "Mention",
    "MixRecipe",
    "OffsetMap",
    "PlanStep",
    "PredictionSet",
    "Projection",
    "Span",
    "TermList",
    "Tweet",
    "__version__",
    "build_pool",
    "clean_text",
    "corpus_stats",
    "derive_seed",
    "evaluate",
    "f1",
    "fetch_corpus",
    "is_positive",
    "load_corpus",
    "match_spans",
    "merge",
    "merge_terms",
    "project_to_cleaned",
    "project_to_original",
    "read_interchange",
    "run_plan",
    "split",
    "tokenize_text",
    "write_corpus_tsv",
    "write_interchange",
]
