"""Corpus merging with dedupe policies, and the stratified train/val split.

Merging concatenates corpora in recipe order. Two dedupe policies are
offered because sources overlap in different ways: ``id`` drops later
tweets that repeat an (id, text) pair, ``text`` drops later tweets whose
case-folded whitespace-collapsed text was already seen. Id collisions
between genuinely different tweets are repaired by prefixing the source
corpus name.

Splitting shuffles each class independently with a seeded rng and gives
validation round-half-up(class_size * val_parts / total_parts) tweets of
each class, so a rare positive class cannot silently vanish from
validation; when a non-empty class still ends up entirely on one side a
DegenerateSplitWarning is emitted and the split proceeds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from random import Random

from medmine.corpus import AnnotatedTweet, Corpus, Tweet, is_positive
from medmine.errors import DegenerateSplitWarning

DEDUPE_POLICIES = ("id", "text", "none")


@dataclass(frozen=True)
class MixRecipe:
    inputs: tuple[Corpus, ...]
    dedupe: str = "id"
    split_ratio: tuple[int, int] = (8, 2)
    stratify: bool = True
    seed: int = 42

    def __post_init__(self) -> None:
        if not self.inputs:
            raise ValueError("recipe needs at least one input corpus")
        if self.dedupe not in DEDUPE_POLICIES:
            raise ValueError(f"unknown dedupe policy {self.dedupe!r}; "
                             f"expected one of {', '.join(DEDUPE_POLICIES)}")
        train_parts, val_parts = self.split_ratio
        if train_parts <= 0 or val_parts <= 0:
            raise ValueError("split ratio parts must be positive")


def _normalized_text(text: str) -> str:
    return " ".join(text.casefold().split())


def _with_id(at: AnnotatedTweet, new_id: str) -> AnnotatedTweet:
    tweet = Tweet(id=new_id, user_id=at.tweet.user_id,
                  created_at=at.tweet.created_at, text=at.tweet.text)
    return AnnotatedTweet(tweet=tweet, mentions=list(at.mentions),
                          provenance=at.provenance)


def merge(recipe: MixRecipe, name: str = "mixed") -> Corpus:
    """Concatenate the recipe's corpora, deduplicating per its policy.

    Duplicates keep the first occurrence (including its annotations).
    A repeated id with different text is treated as a distinct tweet and
    renamed ``<corpus name>:<id>`` (then ``#2``, ``#3``, ... if needed).
    """
    kept: list[AnnotatedTweet] = []
    by_id: dict[str, str] = {}
    seen_texts: set[str] = set()
    for corpus in recipe.inputs:
        for at in corpus.tweets:
            if recipe.dedupe == "text":
                key = _normalized_text(at.tweet.text)
                if key in seen_texts:
                    continue
            tid = at.tweet.id
            existing_text = by_id.get(tid)
            if existing_text is not None:
                if recipe.dedupe == "id" and existing_text == at.tweet.text:
                    continue
                candidate = f"{corpus.name}:{tid}"
                suffix = 2
                while candidate in by_id:
                    candidate = f"{corpus.name}:{tid}#{suffix}"
                    suffix += 1
                at = _with_id(at, candidate)
                tid = candidate
            by_id[tid] = at.tweet.text
            if recipe.dedupe == "text":
                seen_texts.add(_normalized_text(at.tweet.text))
            kept.append(at)
    return Corpus(name=name, tweets=kept)


def _val_size(n: int, val_parts: int, total_parts: int) -> int:
    """round-half-up(n * val_parts / total_parts) in exact integer math."""
    return (2 * n * val_parts + total_parts) // (2 * total_parts)


def split(corpus: Corpus, ratio: tuple[int, int] = (8, 2),
          stratify: bool = True, seed: int = 42) -> tuple[Corpus, Corpus]:
    """Partition a corpus into train and validation halves.

    Membership is decided by seeded shuffles; both outputs keep the input
    corpus's original tweet order. Same seed, same membership.
    """
    train_parts, val_parts = ratio
    if train_parts <= 0 or val_parts <= 0:
        raise ValueError("split ratio parts must be positive")
    total_parts = train_parts + val_parts
    rng = Random(seed)

    if stratify:
        classes = [[at for at in corpus.tweets if is_positive(at)],
                   [at for at in corpus.tweets if not is_positive(at)]]
    else:
        classes = [list(corpus.tweets)]

    val_ids: set[str] = set()
    for members in classes:
        n = len(members)
        if n == 0:
            continue
        n_val = _val_size(n, val_parts, total_parts)
        if n_val == 0 or n_val == n:
            side = "validation" if n_val == 0 else "train"
            warnings.warn(
                f"corpus {corpus.name!r}: a class of {n} tweet(s) contributes "
                f"nothing to the {side} side at ratio "
                f"{train_parts}:{val_parts}",
                DegenerateSplitWarning, stacklevel=2)
        shuffled = list(members)
        rng.shuffle(shuffled)
        val_ids.update(at.tweet.id for at in shuffled[:n_val])

    train = [at for at in corpus.tweets if at.tweet.id not in val_ids]
    val = [at for at in corpus.tweets if at.tweet.id in val_ids]
    return (Corpus(name=f"{corpus.name}-train", tweets=train),
            Corpus(name=f"{corpus.name}-val", tweets=val))
