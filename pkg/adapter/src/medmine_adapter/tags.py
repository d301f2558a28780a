"""Begin/inside/outside span coding over token slots."""

from __future__ import annotations

from medmine_adapter.model import TAG_B, TAG_I, TAG_O

Slots = list[tuple[int, tuple[int, int]]]


def assign_bio(slots: Slots, spans: list[tuple[int, int]]) -> dict[int, int]:
    """Label every token position; the first token of a span gets B."""
    labels = {pos: TAG_O for pos, _ in slots}
    for s, e in spans:
        hit = [pos for pos, (ts, te) in slots if max(ts, s) < min(te, e)]
        for k, pos in enumerate(hit):
            labels[pos] = TAG_B if k == 0 else TAG_I
    return labels


def decode_bio(slots: Slots, tags: dict[int, int]) -> list[tuple[int, int]]:
    """Greedy run decoding; a dangling I opens a new span."""
    spans: list[list[int]] = []
    current: list[int] | None = None
    for pos, (ts, te) in slots:
        tag = tags.get(pos, TAG_O)
        if tag == TAG_B or (tag == TAG_I and current is None):
            if current is not None:
                spans.append(current)
            current = [ts, te]
        elif tag == TAG_I:
            current[1] = te
        else:
            if current is not None:
                spans.append(current)
                current = None
    if current is not None:
        spans.append(current)
    return [(s, e) for s, e in spans]
