"""Mention pool, curated term lists, and the tweet-fetcher interface.

The pool collects the distinct mention surfaces found in gold corpora
(case-folded dedupe, first-seen casing kept) and records which corpora
each surface came from. Pools seed both the replacement augmentation
strategy and the search terms used to fetch additional tweets.

Fetching is an interface; the bundled implementation replays canned
fixture files so nothing here ever touches a network.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from medmine.corpus import (
    AnnotatedTweet,
    Corpus,
    Mention,
    Tweet,
    escape_field,
    read_data_lines,
    unescape_field,
)
from medmine.errors import EmptyPool, FetchError, MalformedRow


@dataclass
class PoolEntry:
    """One distinct mention surface and the corpora it was seen in."""

    surface: str
    sources: set[str] = field(default_factory=set)


@dataclass
class EntityPool:
    """Mention surfaces unique under case-folding, in first-seen order."""

    entries: list[PoolEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def surfaces(self) -> list[str]:
        return [e.surface for e in self.entries]


def build_pool(corpora: list[Corpus]) -> EntityPool:
    """Collect distinct mention surfaces across corpora with their sources.

    Case-folded duplicates merge into the first-seen entry; empty or
    whitespace-only surfaces are skipped. Order-independent as a set: the
    entries differ only in casing/order when inputs are permuted.
    """
    by_key: dict[str, PoolEntry] = {}
    for corpus in corpora:
        for at in corpus.tweets:
            for m in at.mentions:
                if not m.surface.strip():
                    continue
                key = m.surface.casefold()
                entry = by_key.get(key)
                if entry is None:
                    entry = PoolEntry(surface=m.surface)
                    by_key[key] = entry
                entry.sources.add(corpus.name)
    if not by_key:
        raise EmptyPool("no mentions found in any input corpus")
    return EntityPool(entries=list(by_key.values()))


def write_pool_tsv(pool: EntityPool, path: str | Path,
                   header: str | None = None) -> None:
    """Write ``surface<TAB>comma-separated sorted sources`` per entry."""
    lines: list[str] = [header] if header else []
    for entry in pool.entries:
        lines.append(escape_field(entry.surface) + "\t" +
                     ",".join(sorted(entry.sources)))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def read_pool_tsv(path: str | Path) -> EntityPool:
    """Load a pool written by :func:`write_pool_tsv`."""
    spath = str(path)
    entries: list[PoolEntry] = []
    seen: set[str] = set()
    for line_no, line in read_data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise MalformedRow(spath, line_no,
                               f"expected 2 tab-separated fields, got {len(fields)}")
        surface = unescape_field(fields[0], path=spath, line_no=line_no)
        if not surface.strip():
            raise MalformedRow(spath, line_no, "empty pool surface")
        key = surface.casefold()
        if key in seen:
            raise MalformedRow(spath, line_no,
                               f"case-folded duplicate surface {surface!r}")
        seen.add(key)
        sources = {s for s in fields[1].split(",") if s}
        entries.append(PoolEntry(surface=surface, sources=sources))
    if not entries:
        raise EmptyPool(f"{spath}: pool file contains no entries")
    return EntityPool(entries=entries)


@dataclass
class TermList:
    """Case-folded, deduplicated, lexicographically sorted search terms."""

    terms: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def merge_terms(pool: EntityPool | None,
                curated_files: list[str | Path]) -> TermList:
    """Union pool surfaces with curated term files into a sorted term list.

    Curated files hold one term per line; blank lines and ``#``-prefixed
    comment lines are skipped, surrounding whitespace is stripped.
    """
    terms: set[str] = set()
    if pool is not None:
        terms.update(e.surface.casefold() for e in pool.entries)
    for fpath in curated_files:
        with open(fpath, encoding="utf-8") as fh:
            for line in fh:
                term = line.strip()
                if not term or term.startswith("#"):
                    continue
                terms.add(term.casefold())
    return TermList(terms=sorted(terms))


def write_term_list(terms: TermList, path: str | Path,
                    header: str | None = None) -> None:
    lines: list[str] = [header] if header else []
    lines.extend(terms.terms)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


class Fetcher(Protocol):
    """Anything that can return tweets for a search term."""

    def fetch(self, term: str, limit: int) -> list[Tweet]:
        ...


class FixtureFetcher:
    """Offline fetcher replaying canned tweets from a TSV fixture.

    Fixture rows: ``term<TAB>id<TAB>user_id<TAB>created_at<TAB>text``,
    text escaped as in tweet TSVs. A row with term ``!error`` marks the
    id field's term as permanently failing, for exercising error paths.
    """

    def __init__(self, path: str | Path):
        spath = str(path)
        self._by_term: dict[str, list[Tweet]] = {}
        self._failing: set[str] = set()
        for line_no, line in read_data_lines(path):
            fields = line.split("\t")
            if len(fields) == 2 and fields[0] == "!error":
                self._failing.add(fields[1].casefold())
                continue
            if len(fields) != 5:
                raise MalformedRow(spath, line_no,
                                   f"expected 5 tab-separated fields, got {len(fields)}")
            term, tid, user_id, created_at, raw_text = fields
            text = unescape_field(raw_text, path=spath, line_no=line_no)
            try:
                tweet = Tweet(id=tid, user_id=user_id or None,
                              created_at=created_at or None, text=text)
            except ValueError as exc:
                raise MalformedRow(spath, line_no, str(exc)) from None
            self._by_term.setdefault(term.casefold(), []).append(tweet)

    def fetch(self, term: str, limit: int) -> list[Tweet]:
        key = term.casefold()
        if key in self._failing:
            raise FetchError(term, "fixture marks this term as failing")
        return self._by_term.get(key, [])[:limit]


@dataclass(frozen=True)
class FetchReportRow:
    term: str
    requested: int
    returned: int
    status: str


@dataclass
class FetchResult:
    corpus: Corpus
    report: list[FetchReportRow]


def _term_pattern(term: str) -> re.Pattern[str]:
    return re.compile(re.escape(term), re.IGNORECASE)


def fetch_corpus(client: Fetcher, terms: TermList, limit_per_term: int,
                 name: str = "fetched", assume_positive: bool = False,
                 threads: int = 1) -> FetchResult:
    """Fetch tweets for every term, keeping only valid ones.

    A tweet is valid for a term when its text contains the term
    case-insensitively. Results merge deterministically (terms in sorted
    order, tweets sorted by id within a term, duplicates by id dropped
    keep-first) regardless of request completion order. A failing term is
    recorded in the report and skipped.

    With ``assume_positive`` each kept tweet gets a synthetic mention at
    the first case-insensitive occurrence of its term; otherwise tweets
    enter the pipeline unannotated.
    """
    ordered = sorted(set(terms.terms))

    def pull(term: str) -> tuple[str, list[Tweet] | None, str]:
        try:
            return term, client.fetch(term, limit_per_term), "ok"
        except FetchError as exc:
            return term, None, exc.reason

    if threads > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            raw = list(ex.map(pull, ordered))
    else:
        raw = [pull(t) for t in ordered]

    report: list[FetchReportRow] = []
    annotated: list[AnnotatedTweet] = []
    seen_ids: set[str] = set()
    for term, tweets, status in raw:
        if tweets is None:
            report.append(FetchReportRow(term, limit_per_term, 0, status))
            continue
        pattern = _term_pattern(term)
        valid = [t for t in tweets if pattern.search(t.text)]
        report.append(FetchReportRow(term, limit_per_term, len(valid), "ok"))
        for tweet in sorted(valid, key=lambda t: t.id):
            if tweet.id in seen_ids:
                continue
            seen_ids.add(tweet.id)
            mentions: list[Mention] = []
            if assume_positive:
                m = pattern.search(tweet.text)
                assert m is not None
                mentions = [Mention(m.start(), m.end(),
                                    tweet.text[m.start():m.end()])]
            annotated.append(AnnotatedTweet(tweet=tweet, mentions=mentions,
                                            provenance=f"fetch:term={term}"))
    return FetchResult(corpus=Corpus(name=name, tweets=annotated), report=report)


def write_fetch_report(report: list[FetchReportRow], path: str | Path,
                       header: str | None = None) -> None:
    """Write the per-term fetch report TSV."""
    lines: list[str] = [header] if header else []
    for row in report:
        lines.append("\t".join([row.term, str(row.requested),
                                str(row.returned), row.status]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
