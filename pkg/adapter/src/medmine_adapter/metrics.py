"""Micro-averaged precision/recall/F1 over pooled counts."""

from __future__ import annotations


def micro_prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def binary_counts(gold: list[int], pred: list[int]) -> tuple[int, int, int]:
    tp = sum(1 for g, p in zip(gold, pred) if g == 1 and p == 1)
    fp = sum(1 for g, p in zip(gold, pred) if g == 0 and p == 1)
    fn = sum(1 for g, p in zip(gold, pred) if g == 1 and p == 0)
    return tp, fp, fn


def strict_span_counts(gold: list[set[tuple[int, int]]],
                       pred: list[set[tuple[int, int]]]) -> tuple[int, int, int]:
    """Strict matching of disjoint span sets reduces to intersection."""
    tp = fp = fn = 0
    for g, p in zip(gold, pred):
        hit = len(g & p)
        tp += hit
        fp += len(p) - hit
        fn += len(g) - hit
    return tp, fp, fn
