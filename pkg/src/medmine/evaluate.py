"""Span-level and tweet-level scoring of predictions against gold.

Two span regimes are reported side by side: strict (endpoints equal) and
overlapping (at least one shared code point). In both, true positives
count a maximum-cardinality one-to-one matching between gold and
predicted spans, so the score never depends on input order and never
credits one prediction for two gold mentions.

Tweet-level metrics treat a tweet as predicted-positive when it has at
least one predicted span, scored against whether it has a gold mention.
All three regimes micro-average over the corpus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from medmine.corpus import Corpus, escape_field, is_positive, read_data_lines, unescape_field
from medmine.errors import MalformedRow, OverlappingMentions, UnknownTweetId

MODES = ("strict", "overlapping")


@dataclass(frozen=True, order=True)
class Span:
    """A predicted span in original-text coordinates."""

    start: int
    end: int
    surface: str | None = None

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid span ({self.start},{self.end})")


@dataclass
class PredictionSet:
    """Predicted spans per tweet id, kept sorted and non-overlapping."""

    spans: dict[str, list[Span]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for tid, spans in self.spans.items():
            spans.sort(key=lambda s: (s.start, s.end))
            for a, b in zip(spans, spans[1:]):
                if b.start < a.end:
                    raise OverlappingMentions(
                        f"tweet {tid!r}: predicted spans ({a.start},{a.end}) "
                        f"and ({b.start},{b.end}) overlap")

    def for_tweet(self, tweet_id: str) -> list[Span]:
        return self.spans.get(tweet_id, [])


def read_prediction_tsv(path: str) -> PredictionSet:
    """Load ``tweet_id<TAB>start<TAB>end<TAB>surface`` rows."""
    spans: dict[str, list[Span]] = {}
    spath = str(path)
    for line_no, line in read_data_lines(path):
        fields = line.split("\t")
        if len(fields) != 4:
            raise MalformedRow(spath, line_no,
                               f"expected 4 tab-separated fields, got {len(fields)}")
        tid, raw_start, raw_end, raw_surface = fields
        try:
            start, end = int(raw_start), int(raw_end)
        except ValueError:
            raise MalformedRow(spath, line_no, "start/end must be integers") from None
        try:
            span = Span(start, end,
                        unescape_field(raw_surface, path=spath, line_no=line_no) or None)
        except ValueError as exc:
            raise MalformedRow(spath, line_no, str(exc)) from None
        spans.setdefault(tid, []).append(span)
    return PredictionSet(spans=spans)


def write_prediction_tsv(pred: PredictionSet, path: str,
                         header: str | None = None) -> None:
    lines: list[str] = [header] if header else []
    for tid in pred.spans:
        for span in pred.spans[tid]:
            lines.append("\t".join([tid, str(span.start), str(span.end),
                                    escape_field(span.surface or "")]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    pairs: tuple[tuple[int, int], ...]


def _compatible(gs: int, ge: int, ps: int, pe: int, mode: str) -> bool:
    if mode == "strict":
        return gs == ps and ge == pe
    return max(gs, ps) < min(ge, pe)


def match_spans(gold: list, pred: list, mode: str) -> MatchResult:
    """Maximum one-to-one matching between gold and predicted spans.

    Accepts anything with start/end attributes. Kuhn's augmenting-path
    algorithm; instances here are tiny (a handful of spans per tweet), so
    the worst case is irrelevant.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    adj: list[list[int]] = []
    for g in gold:
        adj.append([pi for pi, p in enumerate(pred)
                    if _compatible(g.start, g.end, p.start, p.end, mode)])

    match_of_pred: list[int | None] = [None] * len(pred)

    def try_assign(gi: int, visited: set[int]) -> bool:
        for pi in adj[gi]:
            if pi in visited:
                continue
            visited.add(pi)
            if match_of_pred[pi] is None or try_assign(match_of_pred[pi], visited):
                match_of_pred[pi] = gi
                return True
        return False

    for gi in range(len(gold)):
        try_assign(gi, set())

    pairs = tuple(sorted((gi, pi) for pi, gi in enumerate(match_of_pred)
                         if gi is not None))
    tp = len(pairs)
    return MatchResult(tp=tp, fp=len(pred) - tp, fn=len(gold) - tp, pairs=pairs)


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def f1(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _metrics(tp: int, fp: int, fn: int) -> Metrics:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    return Metrics(precision=p, recall=r, f1=f1(p, r))


@dataclass(frozen=True)
class EvalReport:
    strict: Metrics
    overlapping: Metrics
    tweet_level: Metrics
    counts: dict[str, int]

    def to_text(self) -> str:
        rows = [("strict", self.strict), ("overlapping", self.overlapping),
                ("tweet_level", self.tweet_level)]
        lines = [f"{'regime':<12} {'precision':>9} {'recall':>9} {'f1':>9}"]
        for label, m in rows:
            lines.append(f"{label:<12} {m.precision:>9.4f} {m.recall:>9.4f} "
                         f"{m.f1:>9.4f}")
        counts = " ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))
        lines.append(counts)
        return "\n".join(lines)

    def to_record(self) -> str:
        record = {
            "strict": vars(self.strict),
            "overlapping": vars(self.overlapping),
            "tweet_level": vars(self.tweet_level),
            "counts": dict(sorted(self.counts.items())),
        }
        return json.dumps(record, ensure_ascii=False)


def evaluate(gold: Corpus, pred: PredictionSet) -> EvalReport:
    """Score a prediction set against a gold corpus in all three regimes."""
    known = {at.tweet.id for at in gold.tweets}
    unknown = sorted(set(pred.spans) - known)
    if unknown:
        raise UnknownTweetId(
            f"predictions reference unknown tweet id(s): {', '.join(unknown)}")

    totals = {mode: [0, 0, 0] for mode in MODES}
    tl_tp = tl_fp = tl_fn = 0
    gold_mentions = 0
    pred_mentions = 0
    for at in gold.tweets:
        spans = pred.for_tweet(at.tweet.id)
        gold_mentions += len(at.mentions)
        pred_mentions += len(spans)
        for mode in MODES:
            result = match_spans(at.mentions, spans, mode)
            totals[mode][0] += result.tp
            totals[mode][1] += result.fp
            totals[mode][2] += result.fn
        predicted_positive = len(spans) > 0
        if predicted_positive and is_positive(at):
            tl_tp += 1
        elif predicted_positive:
            tl_fp += 1
        elif is_positive(at):
            tl_fn += 1

    counts = {
        "tweets": len(gold.tweets),
        "gold_mentions": gold_mentions,
        "predicted_mentions": pred_mentions,
        "strict_tp": totals["strict"][0],
        "strict_fp": totals["strict"][1],
        "strict_fn": totals["strict"][2],
        "overlapping_tp": totals["overlapping"][0],
        "overlapping_fp": totals["overlapping"][1],
        "overlapping_fn": totals["overlapping"][2],
        "tweet_tp": tl_tp,
        "tweet_fp": tl_fp,
        "tweet_fn": tl_fn,
    }
    return EvalReport(strict=_metrics(*totals["strict"]),
                      overlapping=_metrics(*totals["overlapping"]),
                      tweet_level=_metrics(tl_tp, tl_fp, tl_fn),
                      counts=counts)
