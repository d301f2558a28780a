"""Span-consistent augmentation of positive tweets.

Three strategies, selected by code string:

``replace``  swap each mention for a random pool surface
``randstr``  swap each mention for a random 3-10 letter string
``drop``     delete one random word that touches no mention

Augmented tweets are new tweets: id ``<source_id>#aug-<code><round>``,
provenance recording the source, strategy, round and plan seed. Offsets
are recomputed exactly, never searched for, so every output satisfies
the same span invariants as gold data.

Randomness is deterministic per (plan seed, source id, strategy, round)
via :func:`derive_seed`, which makes results independent of execution
order and lets any single augmentation be replayed in isolation.
"""

from __future__ import annotations

import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from hashlib import blake2b
from random import Random

from medmine.corpus import AnnotatedTweet, Corpus, Mention, Tweet
from medmine.errors import EmptyPool, NotPositive
from medmine.normalize import tokenize_text
from medmine.pool import EntityPool

STRATEGY_CODES = ("replace", "randstr", "drop")

# An augmented tweet is a plain AnnotatedTweet; the alias marks intent.
AugmentedTweet = AnnotatedTweet

Rng = Random


def derive_seed(global_seed: int, tweet_id: str, strategy: str,
                round_no: int) -> int:
    """Mix the four inputs into a stable 64-bit seed.

    blake2b (8-byte digest) over the length-prefixed UTF-8 encodings of
    the inputs; the length prefixes keep distinct tuples from colliding
    by concatenation.
    """
    h = blake2b(digest_size=8)
    for part in (str(global_seed), tweet_id, strategy, str(round_no)):
        data = part.encode("utf-8")
        h.update(len(data).to_bytes(4, "big"))
        h.update(data)
    return int.from_bytes(h.digest(), "big")


def _require_positive(t: AnnotatedTweet) -> None:
    if not t.mentions:
        raise NotPositive(f"tweet {t.tweet.id!r} has no mentions to augment")


def _derived_tweet(t: AnnotatedTweet, code: str, round_no: int,
                   new_text: str, new_mentions: list[Mention],
                   plan_seed: int | None) -> AugmentedTweet:
    prov = f"aug:{code}:round{round_no}:src={t.tweet.id}"
    if plan_seed is not None:
        prov += f":seed={plan_seed}"
    tweet = Tweet(id=f"{t.tweet.id}#aug-{code}{round_no}",
                  user_id=t.tweet.user_id, created_at=t.tweet.created_at,
                  text=new_text)
    return AnnotatedTweet(tweet=tweet, mentions=new_mentions, provenance=prov)


def _rebuild_with_surfaces(t: AnnotatedTweet,
                           new_surfaces: list[str]) -> tuple[str, list[Mention]]:
    """Splice replacement surfaces in left to right, shifting offsets."""
    text = t.tweet.text
    parts: list[str] = []
    mentions: list[Mention] = []
    cursor = 0
    delta = 0
    for m, surface in zip(t.mentions, new_surfaces):
        parts.append(text[cursor:m.start])
        parts.append(surface)
        start = m.start + delta
        mentions.append(Mention(start, start + len(surface), surface))
        delta += len(surface) - (m.end - m.start)
        cursor = m.end
    parts.append(text[cursor:])
    return "".join(parts), mentions


def augment_replace_entity(t: AnnotatedTweet, pool: EntityPool, rng: Rng,
                           round_no: int = 1,
                           plan_seed: int | None = None) -> AugmentedTweet:
    """Replace every mention with a random pool surface.

    Sampling excludes case-folded equals of the original surface; when the
    pool offers nothing else, any entry may be drawn (the surface can then
    equal the original).
    """
    _require_positive(t)
    if not pool.entries:
        raise EmptyPool("replacement pool is empty")
    surfaces = pool.surfaces()
    chosen: list[str] = []
    for m in t.mentions:
        key = m.surface.casefold()
        candidates = [s for s in surfaces if s.casefold() != key]
        chosen.append(rng.choice(candidates if candidates else surfaces))
    new_text, new_mentions = _rebuild_with_surfaces(t, chosen)
    return _derived_tweet(t, "replace", round_no, new_text, new_mentions,
                          plan_seed)


def augment_random_string(t: AnnotatedTweet, rng: Rng, round_no: int = 1,
                          plan_seed: int | None = None) -> AugmentedTweet:
    """Replace every mention with a fresh random string of 3 to 10 letters."""
    _require_positive(t)
    chosen: list[str] = []
    for _ in t.mentions:
        length = rng.randint(3, 10)
        chosen.append("".join(rng.choice(string.ascii_letters)
                              for _ in range(length)))
    new_text, new_mentions = _rebuild_with_surfaces(t, chosen)
    return _derived_tweet(t, "randstr", round_no, new_text, new_mentions,
                          plan_seed)


def _overlaps_any(start: int, end: int, mentions: list[Mention]) -> bool:
    return any(max(start, m.start) < min(end, m.end) for m in mentions)


def augment_word_drop(t: AnnotatedTweet, rng: Rng, round_no: int = 1,
                      plan_seed: int | None = None) -> AugmentedTweet | None:
    """Drop one random word that overlaps no mention; None when impossible.

    The word is removed together with one adjacent separator (the text gap
    after it when present, else the gap before it) so the result reads
    naturally; a gap that would clip a mention is left alone.
    """
    _require_positive(t)
    text = t.tweet.text
    tokens = tokenize_text(text)
    candidates = [(i, tok) for i, tok in enumerate(tokens)
                  if not _overlaps_any(tok.start, tok.end, t.mentions)]
    if not candidates:
        return None
    idx, tok = rng.choice(candidates)

    after_end = tokens[idx + 1].start if idx + 1 < len(tokens) else len(text)
    before_start = tokens[idx - 1].end if idx > 0 else 0
    region = (tok.start, tok.end)
    if after_end > tok.end and not _overlaps_any(tok.end, after_end, t.mentions):
        region = (tok.start, after_end)
    elif before_start < tok.start and not _overlaps_any(before_start, tok.start,
                                                        t.mentions):
        region = (before_start, tok.end)

    rs, re_ = region
    width = re_ - rs
    new_text = text[:rs] + text[re_:]
    new_mentions = [Mention(m.start - width, m.end - width, m.surface)
                    if m.start >= re_ else m
                    for m in t.mentions]
    return _derived_tweet(t, "drop", round_no, new_text, new_mentions,
                          plan_seed)


@dataclass(frozen=True)
class PlanStep:
    """One strategy applied for a number of rounds."""

    strategy: str
    rounds: int
    pool: EntityPool | None = None

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGY_CODES:
            raise ValueError(f"unknown strategy {self.strategy!r}; "
                             f"expected one of {', '.join(STRATEGY_CODES)}")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.strategy == "replace" and (self.pool is None
                                           or not self.pool.entries):
            raise EmptyPool("'replace' steps need a non-empty pool")


@dataclass(frozen=True)
class AugmentationPlan:
    steps: tuple[PlanStep, ...]
    seed: int

    def __post_init__(self) -> None:
        if not self.steps:
            raise ValueError("plan must contain at least one step")


def run_plan(corpus: Corpus, plan: AugmentationPlan, name: str | None = None,
             threads: int = 1) -> Corpus:
    """Apply every plan step to every positive tweet.

    Returns only the augmented tweets (combine with originals downstream).
    Round numbers accumulate per strategy across steps so ids stay unique
    when a plan repeats a strategy. Output order is (source id, strategy,
    round), independent of the number of worker threads.
    """
    positives = corpus.positives()
    round_base: dict[str, int] = {code: 0 for code in STRATEGY_CODES}
    tasks: list[tuple[AnnotatedTweet, str, EntityPool | None, int]] = []
    for step in plan.steps:
        base = round_base[step.strategy]
        for offset in range(1, step.rounds + 1):
            for at in positives:
                tasks.append((at, step.strategy, step.pool, base + offset))
        round_base[step.strategy] = base + step.rounds

    def run_one(task: tuple[AnnotatedTweet, str, EntityPool | None, int]
                ) -> tuple[tuple[str, str, int], AugmentedTweet | None]:
        at, code, pool, round_no = task
        rng = Random(derive_seed(plan.seed, at.tweet.id, code, round_no))
        if code == "replace":
            out = augment_replace_entity(at, pool, rng, round_no, plan.seed)
        elif code == "randstr":
            out = augment_random_string(at, rng, round_no, plan.seed)
        else:
            out = augment_word_drop(at, rng, round_no, plan.seed)
        return (at.tweet.id, code, round_no), out

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run_one, tasks))
    else:
        results = [run_one(task) for task in tasks]

    results.sort(key=lambda pair: pair[0])
    augmented = [out for _, out in results if out is not None]
    return Corpus(name=name or f"{corpus.name}-aug", tweets=augmented)
