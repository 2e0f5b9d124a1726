"""
Report documents, aligned text tables and persisted prediction rows.
"""

import json
import os
from typing import Iterable, List, Optional, Sequence

from src.eval.metrics import AggregateReport, MetricError, RunResult

METRIC_KEYS = ("in_scope_accuracy", "oos_recall", "top_k_recall")
METRIC_HEADERS = {
    "in_scope_accuracy": "In-scope acc",
    "oos_recall": "OOS recall",
    "top_k_recall": "Top-k recall",
}

REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"
PREDICTIONS_FILE = "predictions.jsonl"


def build_report(aggregate: AggregateReport, dataset: str, k: int) -> dict:
    def summary(value):
        return value.to_dict() if value is not None else None

    return {
        "method": aggregate.method,
        "dataset": dataset,
        "k": k,
        "seeds": list(aggregate.seeds),
        "metrics": {
            "in_scope_accuracy": summary(aggregate.in_scope_accuracy),
            "oos_recall": summary(aggregate.oos_recall),
            "top_k_recall": summary(aggregate.top_k_recall),
        },
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def format_cell(summary: Optional[dict]) -> str:
    """
    Percent cell in the "63 (1.1)" style: mean as integer points, std with
    one decimal, both rounded half to even.
    """
    if summary is None:
        return "-"
    mean = round(summary["mean"] * 100)
    std = round(summary["std"] * 100, 1)
    return f"{mean} ({std:.1f})"


def format_table(reports: Sequence[dict]) -> str:
    """One row per report: method then one "mean (std)" cell per metric."""
    header = ["Method", *[METRIC_HEADERS[key] for key in METRIC_KEYS]]
    rows = [header]
    for report in reports:
        metrics = report.get("metrics", {})
        rows.append([report["method"], *[format_cell(metrics.get(key)) for key in METRIC_KEYS]])

    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = []
    for index, row in enumerate(rows):
        lines.append(" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if index == 0:
            lines.append("-+-".join("-" * width for width in widths))

    title = ""
    if reports:
        title = f"dataset: {reports[0]['dataset']}  k: {reports[0]['k']}\n"
    return title + "\n".join(lines) + "\n"


def write_report(report: dict, output_dir: str) -> List[str]:
    """Writes report.json and report.txt, returns both paths."""
    os.makedirs(output_dir, exist_ok=True)
    json_path = os.path.join(output_dir, REPORT_JSON)
    text_path = os.path.join(output_dir, REPORT_TEXT)
    with open(json_path, "w", encoding="utf-8") as f:
        f.write(report_to_json(report))
    with open(text_path, "w", encoding="utf-8") as f:
        f.write(format_table([report]))
    return [json_path, text_path]


def load_report(path: str) -> dict:
    """
    Raises:
        MetricError: The file is not a report document
    """
    if os.path.isdir(path):
        path = os.path.join(path, REPORT_JSON)
    try:
        with open(path, "r", encoding="utf-8") as f:
            report = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise MetricError(f"cannot read report {path}: {e}") from e
    missing = [key for key in ("method", "dataset", "k", "seeds", "metrics") if key not in report]
    if missing:
        raise MetricError(f"report {path} is missing {missing}")
    return report


def compare_reports(reports: Sequence[dict]) -> str:
    """
    Raises:
        MetricError: Fewer than two reports, or reports of different datasets
    """
    if len(reports) < 2:
        raise MetricError("compare needs at least two reports")
    datasets = {report["dataset"] for report in reports}
    if len(datasets) != 1:
        raise MetricError(f"reports cover different datasets: {sorted(datasets)}")
    return format_table(reports)


def save_predictions(run: RunResult, path: str, texts: Optional[Iterable[str]] = None):
    """One JSON row per test utterance: gold, predicted and the ranking when present."""
    texts = list(texts) if texts is not None else [None] * len(run.predictions)
    rankings = run.rankings or [None] * len(run.predictions)
    with open(path, "w", encoding="utf-8") as f:
        for text, (gold, predicted), ranking in zip(texts, run.predictions, rankings):
            row = {"text": text, "gold": gold, "predicted": predicted}
            if ranking is not None:
                row["ranking"] = list(ranking[1])
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_predictions(path: str, seed: int, method: str) -> RunResult:
    """
    Raises:
        MetricError: Malformed row
    """
    predictions = []
    rankings = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                gold, predicted = row["gold"], row["predicted"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise MetricError(f"{path}:{line_number}: malformed prediction row: {e}") from e
            predictions.append((gold, predicted))
            rankings.append((gold, row["ranking"]) if "ranking" in row else None)

    has_rankings = bool(rankings) and all(r is not None for r in rankings)
    return RunResult(
        seed=seed,
        predictions=predictions,
        method=method,
        rankings=rankings if has_rankings else None,
    )
