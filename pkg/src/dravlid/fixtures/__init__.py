"""Bundled desk-scale test assets and the brute-force metric oracle.

The oracle recomputes every headline metric by definition-level counting
with plain loops. It deliberately shares no aggregation code with
dravlid.metrics so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from dravlid.taxonomy import Category, TaskLanguage

_HERE = Path(__file__).parent


def smoke_corpus_path(task: TaskLanguage) -> Path:
    """Bundled 30-word labeled corpus covering all 7 categories."""
    return _HERE / f"smoke_{task.value}.tsv"


def replay_fixture_path(task: TaskLanguage) -> Path:
    """Recorded-response JSONL for the smoke corpus, cache-file format."""
    return _HERE / f"replay_{task.value}.jsonl"


def golden_report_path(task: TaskLanguage) -> Path:
    """Frozen end-to-end JSON report for the replay run at temperature 0.7."""
    return _HERE / f"golden_report_{task.value}.json"


@dataclass(frozen=True)
class OracleClassCounts:
    category: Category
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class OracleResult:
    per_class: tuple[OracleClassCounts, ...]
    macro_f1: float
    macro_precision: float
    macro_recall: float
    weighted_f1: float
    weighted_precision: float
    weighted_recall: float
    accuracy: float


def oracle_metrics(
    gold: Sequence[Category],
    pred: Sequence[Category],
    include_zero_support: bool = False,
    fixed_label_set: bool = False,
) -> OracleResult:
    """Recompute the full metric suite by direct counting."""
    if len(gold) != len(pred):
        raise ValueError("gold and pred must have the same length")
    if len(gold) == 0:
        raise ValueError("gold and pred must be non-empty")

    if fixed_label_set:
        classes = list(Category)
    else:
        classes = []
        for cat in Category:
            seen = False
            for g in gold:
                if g is cat:
                    seen = True
            for p in pred:
                if p is cat:
                    seen = True
            if seen:
                classes.append(cat)

    per_class = []
    for cat in classes:
        tp = 0
        fp = 0
        fn = 0
        for g, p in zip(gold, pred):
            if g is cat and p is cat:
                tp += 1
            elif p is cat:
                fp += 1
            elif g is cat:
                fn += 1
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / support if support > 0 else 0.0
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        per_class.append(
            OracleClassCounts(cat, tp, fp, fn, precision, recall, f1, support)
        )

    n = len(gold)
    macro_p = 0.0
    macro_r = 0.0
    macro_f = 0.0
    k = 0
    for m in per_class:
        if m.support > 0 or include_zero_support:
            macro_p += m.precision
            macro_r += m.recall
            macro_f += m.f1
            k += 1

    weighted_p = 0.0
    weighted_r = 0.0
    weighted_f = 0.0
    for m in per_class:
        weighted_p += m.support * m.precision
        weighted_r += m.support * m.recall
        weighted_f += m.support * m.f1

    correct = 0
    for g, p in zip(gold, pred):
        if g is p:
            correct += 1

    return OracleResult(
        per_class=tuple(per_class),
        macro_f1=macro_f / k,
        macro_precision=macro_p / k,
        macro_recall=macro_r / k,
        weighted_f1=weighted_f / n,
        weighted_precision=weighted_p / n,
        weighted_recall=weighted_r / n,
        accuracy=correct / n,
    )
