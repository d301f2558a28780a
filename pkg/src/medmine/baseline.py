"""Dictionary-lookup span predictor.

A model-free floor for the pipeline: compile a pool into case-insensitive
patterns and report every occurrence that sits on non-letter boundaries,
longest match winning where candidates overlap. Useful as an end-to-end
smoke path and as a comparison point for trained models.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from medmine.corpus import Corpus
from medmine.errors import EmptyPool
from medmine.evaluate import PredictionSet, Span
from medmine.pool import EntityPool


@dataclass
class Gazetteer:
    """Pool surfaces compiled for case-insensitive overlapping search."""

    entries: list[str]
    patterns: list[re.Pattern[str]]

    @classmethod
    def from_pool(cls, pool: EntityPool) -> "Gazetteer":
        entries = [e.surface for e in pool.entries if e.surface.strip()]
        if not entries:
            raise EmptyPool("cannot build a gazetteer from an empty pool")
        # Lookahead so a match at i doesn't hide another starting inside it.
        patterns = [re.compile(f"(?=({re.escape(entry)}))", re.IGNORECASE)
                    for entry in entries]
        return cls(entries=entries, patterns=patterns)

    def predict(self, corpus: Corpus) -> PredictionSet:
        """Predict mention spans for every tweet in the corpus."""
        spans = {at.tweet.id: _find_spans(self, at.tweet.text)
                 for at in corpus.tweets}
        return PredictionSet(spans=spans)


def _find_spans(g: Gazetteer, text: str) -> list[Span]:
    n = len(text)
    candidates: list[tuple[int, int]] = []
    for pattern in g.patterns:
        for m in pattern.finditer(text):
            start, end = m.start(1), m.end(1)
            if start > 0 and text[start - 1].isalpha():
                continue
            if end < n and text[end].isalpha():
                continue
            candidates.append((start, end))
    candidates.sort(key=lambda se: (-(se[1] - se[0]), se[0], se[1]))
    chosen: list[tuple[int, int]] = []
    for start, end in candidates:
        if all(min(end, e) <= max(start, s) for s, e in chosen):
            chosen.append((start, end))
    chosen.sort()
    return [Span(start, end, text[start:end]) for start, end in chosen]
