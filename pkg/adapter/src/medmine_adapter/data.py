"""Readers and writers for the pipeline's file formats.

The adapter talks to the corpus tooling through files only: interchange
JSONL and offset sidecars in, prediction TSV out. The contracts are
reimplemented here from their byte-level definitions so the two packages
share no code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from medmine_adapter.errors import FormatError


@dataclass
class Example:
    """One interchange row, validated as far as the task needs."""

    id: str
    text: str
    label: int | None = None
    spans: list[tuple[int, int]] | None = None
    line_no: int = 0


def _data_lines(path: str | Path):
    with open(path, encoding="utf-8", newline="") as fh:
        content = fh.read()
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    in_header = True
    for i, line in enumerate(lines, start=1):
        if in_header and line.startswith("#"):
            continue
        in_header = False
        yield i, line


def read_interchange(path: str | Path, *, require_label: bool = False,
                     require_spans: bool = False) -> list[Example]:
    """Parse interchange JSONL, enforcing only task-relevant fields."""
    spath = str(path)
    out: list[Example] = []
    seen: set[str] = set()
    for line_no, line in _data_lines(path):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(spath, line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise FormatError(spath, line_no, "row is not a JSON object")
        tid = record.get("id")
        text = record.get("text")
        if not isinstance(tid, str) or not tid:
            raise FormatError(spath, line_no, "missing or empty 'id'")
        if not isinstance(text, str):
            raise FormatError(spath, line_no, "missing 'text'")
        if tid in seen:
            raise FormatError(spath, line_no, f"duplicate id {tid!r}")
        seen.add(tid)

        label = record.get("label")
        if require_label and label is None:
            raise FormatError(spath, line_no, "missing 'label'")
        if label is not None and label not in (0, 1):
            raise FormatError(spath, line_no, f"label must be 0 or 1, got {label!r}")

        spans = None
        raw_spans = record.get("spans")
        if require_spans and raw_spans is None:
            raise FormatError(spath, line_no, "missing 'spans'")
        if raw_spans is not None:
            if not isinstance(raw_spans, list):
                raise FormatError(spath, line_no, "'spans' is not a list")
            spans = []
            for s in raw_spans:
                if (not isinstance(s, dict)
                        or not isinstance(s.get("start"), int)
                        or not isinstance(s.get("end"), int)):
                    raise FormatError(spath, line_no, "malformed span object")
                start, end = s["start"], s["end"]
                if not (0 <= start < end <= len(text)):
                    raise FormatError(
                        spath, line_no,
                        f"span [{start}, {end}) out of bounds for text "
                        f"of length {len(text)}")
                spans.append((start, end))
        out.append(Example(id=tid, text=text, label=label, spans=spans,
                           line_no=line_no))
    return out


def read_offset_sidecar(path: str | Path) -> dict[str, list[int]]:
    """Parse ``id<TAB>comma-separated original indices`` rows."""
    spath = str(path)
    maps: dict[str, list[int]] = {}
    for line_no, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(spath, line_no,
                              f"expected 2 tab-separated fields, got {len(fields)}")
        tid, csv = fields
        if tid in maps:
            raise FormatError(spath, line_no, f"duplicate id {tid!r}")
        entries: list[int] = []
        if csv:
            for part in csv.split(","):
                try:
                    entries.append(int(part))
                except ValueError:
                    raise FormatError(spath, line_no,
                                      f"non-integer offset {part!r}") from None
        if any(b <= a for a, b in zip(entries, entries[1:])):
            raise FormatError(spath, line_no, "offsets must strictly increase")
        maps[tid] = entries
    return maps


def escape_field(value: str) -> str:
    return (value.replace("\\", "\\\\").replace("\t", "\\t")
            .replace("\n", "\\n"))


@dataclass
class PredictionRow:
    id: str
    start: int
    end: int
    surface: str = ""


def write_prediction_tsv(rows: list[PredictionRow], path: str | Path,
                         header: str | None = None) -> None:
    lines: list[str] = [header] if header else []
    for row in rows:
        lines.append("\t".join([row.id, str(row.start), str(row.end),
                                escape_field(row.surface)]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


@dataclass
class FormatCheck:
    """Outcome of validating a prediction file against its contract."""

    rows: int = 0
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def check_prediction_tsv(path: str | Path) -> FormatCheck:
    """Validate a prediction TSV the way the evaluator will read it:
    four fields, integer half-open offsets, no overlaps within a tweet.
    """
    check = FormatCheck()
    by_tweet: dict[str, list[tuple[int, int]]] = {}
    for line_no, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 4:
            check.problems.append(f"line {line_no}: {len(fields)} fields")
            continue
        tid, raw_start, raw_end, _surface = fields
        try:
            start, end = int(raw_start), int(raw_end)
        except ValueError:
            check.problems.append(f"line {line_no}: non-integer offsets")
            continue
        if not (0 <= start < end):
            check.problems.append(f"line {line_no}: bad span [{start}, {end})")
            continue
        by_tweet.setdefault(tid, []).append((start, end))
        check.rows += 1
    for tid, spans in by_tweet.items():
        spans.sort()
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            if max(s1, s2) < min(e1, e2):
                check.problems.append(f"tweet {tid}: overlapping spans")
    return check
