"""Core data model and corpus file IO.

All offsets are Unicode code-point indices into the owning tweet's text
(plain Python string indices), never bytes. Corpora are treated as
immutable after load; every operation here is pure.

File formats
------------
Tweet TSV        one row per tweet: ``id<TAB>user_id<TAB>created_at<TAB>text``
Annotation TSV   one row per mention: ``tweet_id<TAB>start<TAB>end<TAB>surface``
Interchange      one JSON object per line with fields ``id``, ``text``,
                 ``spans`` (array of ``{start, end, text}``) and ``label``
                 (0 or 1); ``user_id``/``created_at``/``provenance`` are
                 optional extras so the format round-trips losslessly.

In TSV files a literal tab/newline inside ``text`` (and ``surface``) is
encoded as ``\\t``/``\\n`` and a backslash as ``\\\\``. Leading lines
starting with ``#`` are header comments (provenance) and are skipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from medmine.errors import (
    MalformedRow,
    OverlappingMentions,
    SpanOutOfBounds,
    SurfaceMismatch,
    UnknownTweetId,
)


def escape_field(value: str) -> str:
    """Encode backslash, tab and newline so the value fits in one TSV field."""
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_field(value: str, *, path: str = "<string>", line_no: int = 0) -> str:
    """Invert :func:`escape_field`; rejects unknown escapes."""
    if "\\" not in value:
        return value
    out: list[str] = []
    i = 0
    n = len(value)
    while i < n:
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= n:
            raise MalformedRow(path, line_no, "dangling backslash at end of field")
        nxt = value[i + 1]
        if nxt == "t":
            out.append("\t")
        elif nxt == "n":
            out.append("\n")
        elif nxt == "\\":
            out.append("\\")
        else:
            raise MalformedRow(path, line_no, f"unsupported escape sequence \\{nxt}")
        i += 2
    return "".join(out)


def read_data_lines(path: str | Path) -> list[tuple[int, str]]:
    """Read a text file into (line_no, line) pairs, skipping header comments.

    Only the leading block of ``#``-prefixed lines is treated as comments;
    newline translation is disabled so tweet text containing ``\\r``
    survives verbatim.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        content = fh.read()
    raw = content.split("\n")
    if raw and raw[-1] == "":
        raw.pop()
    rows: list[tuple[int, str]] = []
    in_header = True
    for line_no, line in enumerate(raw, start=1):
        if in_header and line.startswith("#"):
            continue
        in_header = False
        rows.append((line_no, line))
    return rows


@dataclass(frozen=True)
class Tweet:
    """One tweet with its original, unmodified text."""

    id: str
    user_id: str | None = None
    created_at: str | None = None
    text: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("tweet id must be non-empty")
        if self.id.startswith("#"):
            raise ValueError(f"tweet id must not start with '#': {self.id!r}")
        for name, value in (("id", self.id), ("user_id", self.user_id),
                            ("created_at", self.created_at)):
            if value and ("\t" in value or "\n" in value):
                raise ValueError(f"tweet {name} must not contain tab/newline")


@dataclass(frozen=True)
class Mention:
    """A medication mention span; ``surface`` must equal ``text[start:end]``."""

    start: int
    end: int
    surface: str


@dataclass
class AnnotatedTweet:
    """A tweet plus its validated, sorted, non-overlapping gold mentions."""

    tweet: Tweet
    mentions: list[Mention] = field(default_factory=list)
    provenance: str | None = None

    def __post_init__(self) -> None:
        mentions = sorted(self.mentions, key=lambda m: (m.start, m.end))
        text = self.tweet.text
        n = len(text)
        for m in mentions:
            if not (0 <= m.start < m.end <= n):
                raise SpanOutOfBounds(
                    f"tweet {self.tweet.id!r}: span ({m.start},{m.end}) outside "
                    f"text of length {n}")
            if text[m.start:m.end] != m.surface:
                raise SurfaceMismatch(
                    f"tweet {self.tweet.id!r}: surface {m.surface!r} != text slice "
                    f"{text[m.start:m.end]!r} at ({m.start},{m.end})")
        for a, b in zip(mentions, mentions[1:]):
            if b.start < a.end:
                raise OverlappingMentions(
                    f"tweet {self.tweet.id!r}: spans ({a.start},{a.end}) and "
                    f"({b.start},{b.end}) overlap")
        self.mentions = mentions


def is_positive(annotated: AnnotatedTweet) -> bool:
    """True iff the tweet has at least one gold mention."""
    return len(annotated.mentions) > 0


@dataclass
class Corpus:
    """A named list of annotated tweets with unique ids."""

    name: str
    tweets: list[AnnotatedTweet] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for at in self.tweets:
            tid = at.tweet.id
            if tid in seen:
                raise ValueError(f"duplicate tweet id in corpus {self.name!r}: {tid!r}")
            seen.add(tid)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    def positives(self) -> list[AnnotatedTweet]:
        return [at for at in self.tweets if is_positive(at)]


@dataclass(frozen=True)
class CorpusStats:
    """Counts over one corpus; ``total = positive + negative`` always holds."""

    total: int
    positive: int
    negative: int
    multi_mention: int

    @property
    def positive_pct(self) -> float:
        return self.positive / self.total if self.total else 0.0

    def positive_pct_display(self) -> str:
        """Percent rounded to 2 decimal places, trailing zeros stripped."""
        pct = self.positive_pct * 100
        return f"{pct:.2f}".rstrip("0").rstrip(".") + "%"


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Count total/positive/negative/multi-mention tweets."""
    total = len(corpus.tweets)
    positive = sum(1 for at in corpus.tweets if is_positive(at))
    multi = sum(1 for at in corpus.tweets if len(at.mentions) >= 2)
    return CorpusStats(total=total, positive=positive,
                       negative=total - positive, multi_mention=multi)


def _default_name(path: str | Path) -> str:
    return Path(path).stem


def load_corpus(tweets_path: str | Path,
                annotations_path: str | Path | None = None,
                name: str | None = None) -> Corpus:
    """Load a corpus from a tweet TSV file plus an optional annotation TSV.

    Every annotation is validated against the owning tweet: offsets in
    bounds, surface identical to the text slice, mentions disjoint. Any
    violation is a hard error, never a silent repair.
    """
    if name is None:
        name = _default_name(tweets_path)
    tpath = str(tweets_path)
    tweets: dict[str, Tweet] = {}
    order: list[str] = []
    for line_no, line in read_data_lines(tweets_path):
        fields = line.split("\t")
        if len(fields) != 4:
            raise MalformedRow(tpath, line_no,
                               f"expected 4 tab-separated fields, got {len(fields)}")
        tid, user_id, created_at, raw_text = fields
        text = unescape_field(raw_text, path=tpath, line_no=line_no)
        try:
            tweet = Tweet(id=tid, user_id=user_id or None,
                          created_at=created_at or None, text=text)
        except ValueError as exc:
            raise MalformedRow(tpath, line_no, str(exc)) from None
        if tid in tweets:
            raise MalformedRow(tpath, line_no, f"duplicate tweet id {tid!r}")
        tweets[tid] = tweet
        order.append(tid)

    mentions: dict[str, list[Mention]] = {tid: [] for tid in order}
    if annotations_path is not None:
        apath = str(annotations_path)
        for line_no, line in read_data_lines(annotations_path):
            fields = line.split("\t")
            if len(fields) != 4:
                raise MalformedRow(apath, line_no,
                                   f"expected 4 tab-separated fields, got {len(fields)}")
            tid, raw_start, raw_end, raw_surface = fields
            try:
                start, end = int(raw_start), int(raw_end)
            except ValueError:
                raise MalformedRow(apath, line_no,
                                   "start/end must be integers") from None
            surface = unescape_field(raw_surface, path=apath, line_no=line_no)
            if tid not in tweets:
                raise UnknownTweetId(f"{apath}:{line_no}: unknown tweet id {tid!r}")
            text = tweets[tid].text
            if not (0 <= start < end <= len(text)):
                raise SpanOutOfBounds(
                    f"{apath}:{line_no}: span ({start},{end}) outside text of "
                    f"length {len(text)} for tweet {tid!r}")
            if text[start:end] != surface:
                raise SurfaceMismatch(
                    f"{apath}:{line_no}: surface {surface!r} != text slice "
                    f"{text[start:end]!r} for tweet {tid!r}")
            mentions[tid].append(Mention(start, end, surface))

    annotated = [AnnotatedTweet(tweet=tweets[tid], mentions=mentions[tid])
                 for tid in order]
    return Corpus(name=name, tweets=annotated)


def write_corpus_tsv(corpus: Corpus,
                     tweets_path: str | Path,
                     annotations_path: str | Path | None = None,
                     header: str | None = None) -> None:
    """Write a corpus as a tweet TSV plus (optionally) an annotation TSV."""
    tlines: list[str] = [header] if header else []
    for at in corpus.tweets:
        t = at.tweet
        tlines.append("\t".join([t.id, t.user_id or "", t.created_at or "",
                                 escape_field(t.text)]))
    _write_lines(tweets_path, tlines)
    if annotations_path is not None:
        alines: list[str] = [header] if header else []
        for at in corpus.tweets:
            for m in at.mentions:
                alines.append("\t".join([at.tweet.id, str(m.start), str(m.end),
                                         escape_field(m.surface)]))
        _write_lines(annotations_path, alines)


def write_interchange(corpus: Corpus, path: str | Path,
                      header: str | None = None) -> None:
    """Write one JSON record per tweet; provenance goes to a ``.prov`` sidecar."""
    lines: list[str] = []
    for at in corpus.tweets:
        record: dict = {
            "id": at.tweet.id,
            "text": at.tweet.text,
            "spans": [{"start": m.start, "end": m.end, "text": m.surface}
                      for m in at.mentions],
            "label": 1 if at.mentions else 0,
        }
        if at.tweet.user_id is not None:
            record["user_id"] = at.tweet.user_id
        if at.tweet.created_at is not None:
            record["created_at"] = at.tweet.created_at
        if at.provenance is not None:
            record["provenance"] = at.provenance
        lines.append(json.dumps(record, ensure_ascii=False))
    _write_lines(path, lines)
    if header:
        _write_lines(str(path) + ".prov", [header])


def read_interchange(path: str | Path, name: str | None = None) -> Corpus:
    """Load a corpus from an interchange file, validating every record."""
    if name is None:
        name = _default_name(path)
    spath = str(path)
    annotated: list[AnnotatedTweet] = []
    seen: set[str] = set()
    for line_no, line in read_data_lines(path):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRow(spath, line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise MalformedRow(spath, line_no, "record is not an object")
        for key, typ in (("id", str), ("text", str), ("spans", list)):
            if not isinstance(record.get(key), typ):
                raise MalformedRow(spath, line_no, f"missing or invalid field {key!r}")
        if record.get("label") not in (0, 1):
            raise MalformedRow(spath, line_no, "field 'label' must be 0 or 1")
        tid = record["id"]
        if tid in seen:
            raise MalformedRow(spath, line_no, f"duplicate tweet id {tid!r}")
        seen.add(tid)
        text = record["text"]
        spans: list[Mention] = []
        for raw in record["spans"]:
            if (not isinstance(raw, dict)
                    or not isinstance(raw.get("start"), int)
                    or not isinstance(raw.get("end"), int)
                    or not isinstance(raw.get("text"), str)):
                raise MalformedRow(spath, line_no,
                                   "span must be {start: int, end: int, text: str}")
            start, end, surface = raw["start"], raw["end"], raw["text"]
            if not (0 <= start < end <= len(text)):
                raise SpanOutOfBounds(
                    f"{spath}:{line_no}: span ({start},{end}) outside text of "
                    f"length {len(text)} for tweet {tid!r}")
            if text[start:end] != surface:
                raise SurfaceMismatch(
                    f"{spath}:{line_no}: surface {surface!r} != text slice "
                    f"{text[start:end]!r} for tweet {tid!r}")
            spans.append(Mention(start, end, surface))
        if record["label"] != (1 if spans else 0):
            raise MalformedRow(spath, line_no,
                               "label inconsistent with spans")
        try:
            tweet = Tweet(id=tid, user_id=record.get("user_id"),
                          created_at=record.get("created_at"), text=text)
            at = AnnotatedTweet(tweet=tweet, mentions=spans,
                                provenance=record.get("provenance"))
        except (ValueError, OverlappingMentions) as exc:
            if isinstance(exc, OverlappingMentions):
                raise OverlappingMentions(f"{spath}:{line_no}: {exc}") from None
            raise MalformedRow(spath, line_no, str(exc)) from None
        annotated.append(at)
    return Corpus(name=name, tweets=annotated)


def _write_lines(path: str | Path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
