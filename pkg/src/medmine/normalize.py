"""Offset-preserving text cleaning and span projection.

Cleaning removes non-ASCII characters (emoji, smart quotes, anything with
a code point >= 0x80) and then standalone symbol characters. Every kept
character remembers its index in the original text through an
:class:`OffsetMap`, so spans can be projected in either direction
without guessing.

A symbol counts as standalone when both neighbours in the intermediate
(ASCII-only) text are whitespace or the string edge; symbols glued to a
word, like the ``#`` of a hashtag, stay.
"""

from __future__ import annotations

import string
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path

from medmine.errors import MalformedRow, SpanOutOfBounds

SYMBOLS = frozenset("#$%&@+*^`|~")

_PUNCT = frozenset(string.punctuation)


@dataclass(frozen=True)
class OffsetMap:
    """Monotone map from cleaned-text indices to original-text indices.

    ``entries[i]`` is the original index of cleaned character ``i``.
    ``original_length`` is kept when known so reverse projections can be
    bounds-checked; maps loaded from a sidecar file don't have it.
    """

    entries: tuple[int, ...]
    original_length: int | None = None

    def __post_init__(self) -> None:
        for a, b in zip(self.entries, self.entries[1:]):
            if b <= a:
                raise ValueError("offset map entries must be strictly increasing")
        if self.original_length is not None and self.entries:
            if self.entries[-1] >= self.original_length:
                raise ValueError("offset map entry beyond original text length")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CleanedTweet:
    """Cleaned text for one tweet plus the map back to its original text."""

    source_id: str
    cleaned_text: str
    map: OffsetMap


@dataclass(frozen=True)
class Projection:
    """Result of mapping a span into cleaned coordinates.

    ``tag`` is ``"exact"`` when every original character survived,
    ``"partial"`` when only some did, ``"empty"`` when none did (then
    ``start == end`` marks the insertion point).
    """

    start: int
    end: int
    tag: str


def clean_text(text: str, source_id: str = "") -> CleanedTweet:
    """Remove non-ASCII characters, then standalone symbols.

    The symbol pass judges neighbours on the intermediate ASCII-only text,
    all positions at once, so the result is idempotent: cleaning a cleaned
    text changes nothing.
    """
    inter: list[str] = []
    inter_map: list[int] = []
    for i, ch in enumerate(text):
        if ord(ch) < 0x80:
            inter.append(ch)
            inter_map.append(i)

    n = len(inter)
    out: list[str] = []
    out_map: list[int] = []
    for j, ch in enumerate(inter):
        if ch in SYMBOLS:
            left_ok = j == 0 or inter[j - 1].isspace()
            right_ok = j == n - 1 or inter[j + 1].isspace()
            if left_ok and right_ok:
                continue
        out.append(ch)
        out_map.append(inter_map[j])

    return CleanedTweet(source_id=source_id, cleaned_text="".join(out),
                        map=OffsetMap(tuple(out_map), original_length=len(text)))


def project_to_original(offset_map: OffsetMap, start: int, end: int) -> tuple[int, int]:
    """Map a non-empty cleaned-text span back to original coordinates."""
    if not (0 <= start < end <= len(offset_map.entries)):
        raise SpanOutOfBounds(
            f"span ({start},{end}) invalid for cleaned text of length "
            f"{len(offset_map.entries)}")
    return offset_map.entries[start], offset_map.entries[end - 1] + 1


def project_to_cleaned(offset_map: OffsetMap, start: int, end: int) -> Projection:
    """Map an original-text span into cleaned coordinates, tagging survival.

    The result is the minimal cleaned span covering the original span's
    survivors. Tag "exact" means neither boundary eroded (both the first
    and last character of the original span survived), so projecting the
    result back yields the original span; "partial" means at least one
    boundary character was removed.
    """
    if start < 0 or end <= start:
        raise SpanOutOfBounds(f"span ({start},{end}) is not a valid span")
    if (offset_map.original_length is not None
            and end > offset_map.original_length):
        raise SpanOutOfBounds(
            f"span ({start},{end}) outside original text of length "
            f"{offset_map.original_length}")
    entries = offset_map.entries
    lo = bisect_left(entries, start)
    hi = bisect_left(entries, end)
    if hi == lo:
        return Projection(lo, lo, "empty")
    exact = entries[lo] == start and entries[hi - 1] == end - 1
    return Projection(lo, hi, "exact" if exact else "partial")


@dataclass(frozen=True)
class Token:
    """A token with its span in the text it was cut from."""

    start: int
    end: int
    text: str


def tokenize_text(text: str) -> list[Token]:
    """Whitespace-split, with each ASCII punctuation character its own token."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(i, i + 1, ch))
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in _PUNCT:
            j += 1
        tokens.append(Token(i, j, text[i:j]))
        i = j
    return tokens


def tokenize(cleaned: CleanedTweet) -> list[Token]:
    """Tokenize a cleaned tweet's text."""
    return tokenize_text(cleaned.cleaned_text)


def clean_corpus(tweets: list) -> list[CleanedTweet]:
    """Clean each annotated tweet's text, pairing it with its id."""
    return [clean_text(at.tweet.text, source_id=at.tweet.id) for at in tweets]


def write_offset_sidecar(cleaned: list[CleanedTweet], path: str | Path,
                         header: str | None = None) -> None:
    """Write ``id<TAB>comma-separated original indices`` per cleaned tweet."""
    lines: list[str] = [header] if header else []
    for ct in cleaned:
        lines.append(ct.source_id + "\t" + ",".join(str(i) for i in ct.map.entries))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def read_offset_sidecar(path: str | Path) -> dict[str, OffsetMap]:
    """Load a sidecar back into per-tweet offset maps (original length unknown)."""
    from medmine.corpus import read_data_lines

    spath = str(path)
    maps: dict[str, OffsetMap] = {}
    for line_no, line in read_data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise MalformedRow(spath, line_no,
                               f"expected 2 tab-separated fields, got {len(fields)}")
        tid, raw = fields
        if tid in maps:
            raise MalformedRow(spath, line_no, f"duplicate tweet id {tid!r}")
        if raw == "":
            entries: tuple[int, ...] = ()
        else:
            try:
                entries = tuple(int(tok) for tok in raw.split(","))
            except ValueError:
                raise MalformedRow(spath, line_no,
                                   "offsets must be comma-separated integers") from None
        try:
            maps[tid] = OffsetMap(entries)
        except ValueError as exc:
            raise MalformedRow(spath, line_no, str(exc)) from None
    return maps
