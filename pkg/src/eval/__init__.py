# Metrics, aggregation and reports
from src.eval.metrics import (
    AggregateReport,
    MetricError,
    MetricSummary,
    MetricsReport,
    RunResult,
    aggregate,
    evaluate,
    in_scope_accuracy,
    oos_recall,
    summarize,
    topk_recall,
)
from src.eval.report import (
    build_report,
    compare_reports,
    format_cell,
    format_table,
    load_predictions,
    load_report,
    save_predictions,
    write_report,
)

__all__ = [
    "AggregateReport",
    "MetricError",
    "MetricSummary",
    "MetricsReport",
    "RunResult",
    "aggregate",
    "build_report",
    "compare_reports",
    "evaluate",
    "format_cell",
    "format_table",
    "in_scope_accuracy",
    "load_predictions",
    "load_report",
    "oos_recall",
    "save_predictions",
    "summarize",
    "topk_recall",
    "write_report",
]
