import json
import math
import os

import pytest

from src.constants import OOS_LABEL
from src.corpus.sampling import sample_few_shot
from src.embedding.providers import HashEmbeddingProvider
from src.eval.metrics import (
    MetricError,
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
from src.fewshot_head.head import TrainConfig, predict_batch
from src.fewshot_head.trainer import embed_utterances, train_head


def _run(rows, seed=1, method="fewshot", rankings=None):
    return RunResult(seed=seed, predictions=list(rows), method=method, rankings=rankings)


def test_in_scope_accuracy_examples():
    assert in_scope_accuracy(_run([("a", "a"), ("b", "b"), ("c", "c"), ("d", "a")])) == 0.75
    assert in_scope_accuracy(_run([("a", "a"), ("b", "b")])) == 1.0
    mixed = [("a", "a"), ("b", OOS_LABEL)] + [(OOS_LABEL, OOS_LABEL)] * 3
    assert in_scope_accuracy(_run(mixed)) == 0.5


def test_in_scope_accuracy_without_rows():
    with pytest.raises(MetricError):
        in_scope_accuracy(_run([(OOS_LABEL, OOS_LABEL)]))


def test_oos_recall_examples():
    rows = [(OOS_LABEL, OOS_LABEL)] * 7 + [(OOS_LABEL, "a")] * 3
    assert oos_recall(_run(rows)) == 0.7
    assert oos_recall(_run([(OOS_LABEL, "a")] * 4)) == 0.0
    assert oos_recall(_run([(OOS_LABEL, OOS_LABEL)] * 4)) == 1.0
    with pytest.raises(MetricError):
        oos_recall(_run([("a", "a")]))


def test_topk_recall_examples():
    assert topk_recall([("a", ["a", "b"]), ("b", ["b", "a"])], 1) == 1.0
    assert topk_recall([("a", ["b", "c"]), ("b", ["c"])], 2) == 0.0
    rows = [("a", ["a", "b", "c", "d", "e"])] * 17 + [("a", ["b", "c", "d", "e", "f", "a"])] * 3
    assert topk_recall(rows, 5) == 0.85
    with pytest.raises(MetricError):
        topk_recall(rows, 0)
    with pytest.raises(MetricError):
        topk_recall([], 5)


def test_evaluate_top_k_uses_in_scope_rankings():
    rows = [("a", "a"), ("b", "a"), (OOS_LABEL, OOS_LABEL)]
    rankings = [("a", ["a", "b"]), ("b", ["a", "b"]), (OOS_LABEL, ["a", "b"])]
    report = evaluate(_run(rows, rankings=rankings), top_k=1)
    assert report.top_k_recall == 0.5
    assert report.oos_recall == 1.0
    assert (report.n_in_scope, report.n_oos) == (2, 1)
    assert evaluate(_run(rows)).top_k_recall is None


def test_oos_recall_absent_without_oos_rows():
    assert evaluate(_run([("a", "a")])).oos_recall is None
    with pytest.raises(MetricError):
        MetricsReport(in_scope_accuracy=1.0, oos_recall=None, n_in_scope=1, n_oos=2)


def test_rankings_must_cover_predictions():
    with pytest.raises(MetricError):
        _run([("a", "a")], rankings=[])


def test_summarize_sample_std():
    summary = summarize([1.0, 2.0, 3.0])
    assert (summary.mean, summary.std) == (2.0, 1.0)
    assert summarize([0.7]).std == 0.0
    assert summarize([0.1, 0.1, 0.1]).mean == 0.1
    assert summarize([0.1, 0.1, 0.1]).std == 0.0


def test_aggregate_scaled_accuracies():
    runs = [
        _run([("a", "a")] * correct + [("a", "b")] * (4 - correct), seed=seed)
        for seed, correct in ((3, 3), (1, 1), (2, 2))
    ]
    result = aggregate(runs)
    assert result.seeds == [1, 2, 3]
    assert result.in_scope_accuracy.mean == pytest.approx(0.5)
    assert result.in_scope_accuracy.std == pytest.approx(0.25)
    assert result.oos_recall is None
    assert result.per_seed[1].in_scope_accuracy == 0.25


def test_aggregate_identical_runs_have_zero_std():
    rows = [("a", "a"), ("b", "a"), (OOS_LABEL, OOS_LABEL)]
    result = aggregate([_run(rows, seed=s) for s in range(5)])
    assert result.in_scope_accuracy.std == 0.0
    assert result.oos_recall.std == 0.0


def test_aggregate_errors():
    with pytest.raises(MetricError):
        aggregate([])
    with pytest.raises(MetricError):
        aggregate([_run([("a", "a")], method="fewshot"), _run([("a", "a")], method="zeroshot")])


def test_format_cell():
    assert format_cell({"mean": 0.63, "std": 0.011}) == "63 (1.1)"
    assert format_cell({"mean": 0.625, "std": 0.0}) == "62 (0.0)"
    assert format_cell({"mean": 1.0, "std": 0.0}) == "100 (0.0)"
    assert format_cell(None) == "-"


def _report(method, dataset="keywords", accuracy=0.63):
    return {
        "method": method,
        "dataset": dataset,
        "k": 5,
        "seeds": [1, 2],
        "metrics": {
            "in_scope_accuracy": {"mean": accuracy, "std": 0.011},
            "oos_recall": None,
            "top_k_recall": {"mean": 0.9, "std": 0.0},
        },
    }


def test_format_table_layout():
    table = format_table([_report("fewshot"), _report("zeroshot_filtered", accuracy=0.5)])
    lines = table.rstrip("\n").split("\n")
    assert lines[0] == "dataset: keywords  k: 5"
    assert lines[1].startswith("Method")
    assert set(lines[2]) <= {"-", "+"}
    assert lines[3].split(" | ")[1].strip() == "63 (1.1)"
    assert lines[4].split(" | ")[2].strip() == "-"


def test_compare_rejects_mismatched_datasets():
    with pytest.raises(MetricError):
        compare_reports([_report("fewshot"), _report("zeroshot", dataset="massive")])
    with pytest.raises(MetricError):
        compare_reports([_report("fewshot")])
    assert "zeroshot" in compare_reports([_report("fewshot"), _report("zeroshot")])


def test_write_and_load_report(tmp_path):
    result = aggregate([_run([("a", "a"), ("b", "a")], seed=s) for s in (1, 2)])
    report = build_report(result, "keywords", 5)
    paths = write_report(report, str(tmp_path))
    assert [os.path.basename(p) for p in paths] == ["report.json", "report.txt"]
    assert load_report(str(tmp_path)) == report
    assert report["metrics"]["in_scope_accuracy"] == {"mean": 0.5, "std": 0.0}

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"method": "x"}), encoding="utf-8")
    with pytest.raises(MetricError):
        load_report(str(broken))


def test_persisted_predictions_recompute(tmp_path, keyword_dataset):
    provider = HashEmbeddingProvider(64)
    X_test = embed_utterances(keyword_dataset.test, provider)
    texts = [u.text for u in keyword_dataset.test]
    runs = []
    for seed in range(1, 6):
        sample = sample_few_shot(keyword_dataset, 3, seed)
        head = train_head(sample, provider, TrainConfig(epochs=60, hidden_dim=16, seed=seed))
        outcomes = predict_batch(head, X_test, threshold=0.5)
        run = _run([(u.label, o.label) for u, o in zip(keyword_dataset.test, outcomes)], seed=seed)
        save_predictions(run, str(tmp_path / f"seed-{seed}.jsonl"), texts)
        runs.append(run)

    loaded = [load_predictions(str(tmp_path / f"seed-{seed}.jsonl"), seed, "fewshot") for seed in range(1, 6)]
    assert [r.predictions for r in loaded] == [r.predictions for r in runs]

    accuracies = []
    for seed in range(1, 6):
        with open(tmp_path / f"seed-{seed}.jsonl", encoding="utf-8") as f:
            rows = [json.loads(line) for line in f]
        in_scope = [row for row in rows if row["gold"] != OOS_LABEL]
        accuracies.append(sum(row["gold"] == row["predicted"] for row in in_scope) / len(in_scope))
    mean = sum(accuracies) / 5
    std = math.sqrt(sum((a - mean) ** 2 for a in accuracies) / 4)

    result = aggregate(loaded)
    assert result.in_scope_accuracy.mean == pytest.approx(mean)
    assert result.in_scope_accuracy.std == pytest.approx(std)


def test_predictions_keep_rankings(tmp_path):
    run = _run([("a", "a"), (OOS_LABEL, "b")], rankings=[("a", ["a", "b"]), (OOS_LABEL, ["b", "a"])])
    path = str(tmp_path / "predictions.jsonl")
    save_predictions(run, path, ["first", "second"])
    loaded = load_predictions(path, 1, "fewshot")
    assert loaded.rankings == [("a", ["a", "b"]), (OOS_LABEL, ["b", "a"])]

    with open(path, "a", encoding="utf-8") as f:
        f.write("{broken\n")
    with pytest.raises(MetricError):
        load_predictions(path, 1, "fewshot")
