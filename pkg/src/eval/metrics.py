"""
Evaluation metrics and multi-seed aggregation.

in-scope accuracy  correct / total over rows whose gold label is an intent
OOS recall         rows with OOS gold predicted OOS / rows with OOS gold
top-k recall       rows whose gold is among the first k ranked intents
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.constants import OOS_LABEL

DEFAULT_TOP_K = 5


class MetricError(ValueError):
    """A metric is undefined for the given rows."""


@dataclass(frozen=True)
class RunResult:
    """
    Predictions of one method for one seed, in test split order.

    `rankings` holds (gold, ranked intent names) per row when the method
    produces a ranking; top-k recall is computed from it.
    """
    seed: int
    predictions: List[Tuple[str, str]]
    method: str
    rankings: Optional[List[Tuple[str, List[str]]]] = None

    def __post_init__(self):
        if self.rankings is not None and len(self.rankings) != len(self.predictions):
            raise MetricError(
                f"rankings cover {len(self.rankings)} rows, predictions {len(self.predictions)}"
            )


@dataclass(frozen=True)
class MetricsReport:
    in_scope_accuracy: float
    oos_recall: Optional[float]
    n_in_scope: int
    n_oos: int
    top_k_recall: Optional[float] = None

    def __post_init__(self):
        if (self.oos_recall is None) != (self.n_oos == 0):
            raise MetricError("oos_recall must be present exactly when there are OOS rows")

    def to_dict(self) -> dict:
        return {
            "in_scope_accuracy": self.in_scope_accuracy,
            "oos_recall": self.oos_recall,
            "top_k_recall": self.top_k_recall,
            "n_in_scope": self.n_in_scope,
            "n_oos": self.n_oos,
        }


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std}


@dataclass(frozen=True)
class AggregateReport:
    method: str
    seeds: List[int]
    in_scope_accuracy: MetricSummary
    oos_recall: Optional[MetricSummary] = None
    top_k_recall: Optional[MetricSummary] = None
    per_seed: Dict[int, MetricsReport] = field(default_factory=dict)


def _count_in_scope(run: RunResult) -> Tuple[int, int]:
    rows = [(gold, predicted) for gold, predicted in run.predictions if gold != OOS_LABEL]
    return sum(1 for gold, predicted in rows if gold == predicted), len(rows)


def _count_oos(run: RunResult) -> Tuple[int, int]:
    rows = [predicted for gold, predicted in run.predictions if gold == OOS_LABEL]
    return sum(1 for predicted in rows if predicted == OOS_LABEL), len(rows)


def in_scope_accuracy(run: RunResult) -> float:
    """
    Raises:
        MetricError: No row has an in-scope gold label
    """
    correct, total = _count_in_scope(run)
    if total == 0:
        raise MetricError(f"run {run.method}/{run.seed} has no in-scope samples")
    return correct / total


def oos_recall(run: RunResult) -> float:
    """
    Raises:
        MetricError: No row has an OOS gold label
    """
    rejected, total = _count_oos(run)
    if total == 0:
        raise MetricError(f"run {run.method}/{run.seed} has no out-of-scope samples")
    return rejected / total


def topk_recall(ranked_lists: Sequence[Tuple[str, Sequence[str]]], k: int) -> float:
    if k < 1:
        raise MetricError(f"k must be >= 1, got {k}")
    if not ranked_lists:
        raise MetricError("topk_recall needs at least one ranked list")
    hits = sum(1 for gold, ranked in ranked_lists if gold in list(ranked)[:k])
    return hits / len(ranked_lists)


def evaluate(run: RunResult, top_k: int = DEFAULT_TOP_K) -> MetricsReport:
    """
    One run to its metrics. Top-k recall is computed over in-scope rows and
    only when the run carries rankings.
    """
    _, n_oos = _count_oos(run)
    _, n_in_scope = _count_in_scope(run)
    top_k_value = None
    if run.rankings is not None:
        in_scope_rankings = [(gold, ranked) for gold, ranked in run.rankings if gold != OOS_LABEL]
        if in_scope_rankings:
            top_k_value = topk_recall(in_scope_rankings, top_k)
    return MetricsReport(
        in_scope_accuracy=in_scope_accuracy(run),
        oos_recall=oos_recall(run) if n_oos else None,
        n_in_scope=n_in_scope,
        n_oos=n_oos,
        top_k_recall=top_k_value,
    )


def summarize(values: Sequence[float]) -> MetricSummary:
    """Arithmetic mean and sample standard deviation (divisor n-1); one value has std 0."""
    if not values:
        raise MetricError("cannot summarize an empty list")
    array = np.asarray(values, dtype=np.float64)
    if np.all(array == array[0]):
        return MetricSummary(mean=float(array[0]), std=0.0)
    return MetricSummary(mean=float(np.mean(array)), std=float(np.std(array, ddof=1)))


def _optional_summary(reports: Sequence[MetricsReport], attribute: str) -> Optional[MetricSummary]:
    values = [getattr(report, attribute) for report in reports]
    if any(value is None for value in values):
        return None
    return summarize(values)


def aggregate(runs: Sequence[RunResult], top_k: int = DEFAULT_TOP_K) -> AggregateReport:
    """
    Raises:
        MetricError: Empty run list, or runs of different methods
    """
    if not runs:
        raise MetricError("aggregate needs at least one run")
    methods = {run.method for run in runs}
    if len(methods) != 1:
        raise MetricError(f"cannot aggregate runs of different methods: {sorted(methods)}")

    ordered = sorted(runs, key=lambda run: run.seed)
    reports = [evaluate(run, top_k) for run in ordered]
    return AggregateReport(
        method=ordered[0].method,
        seeds=[run.seed for run in ordered],
        in_scope_accuracy=summarize([r.in_scope_accuracy for r in reports]),
        oos_recall=_optional_summary(reports, "oos_recall"),
        top_k_recall=_optional_summary(reports, "top_k_recall"),
        per_seed={run.seed: report for run, report in zip(ordered, reports)},
    )
