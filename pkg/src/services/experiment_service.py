"""
Experiment Service - multi-seed orchestration of one method.
For each seed: sample, execute the method, evaluate. Then aggregate and report.
"""

import json
import os
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from src.augmentation.augmenter import Approach, AugConfig, SeedSet, augment_dataset, build_prompt
from src.constants import Status
from src.corpus.loader import load_dataset
from src.corpus.models import Dataset, FewShotSample
from src.corpus.sampling import sample_few_shot
from src.embedding.providers import EmbeddingProvider
from src.eval.metrics import RunResult, aggregate, evaluate
from src.eval.report import PREDICTIONS_FILE, build_report, save_predictions, write_report
from src.fewshot_head.head import ClassifierHead, predict_batch, ranked_intents
from src.fewshot_head.serialization import save_head
from src.fewshot_head.trainer import embed_utterances, train_head, train_on_utterances
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.pool import map_bounded
from src.logging_config import BenchLogger
from src.services.experiment_config import ExperimentConfig
from src.services.provider_factory import build_completion_provider, build_embedding_provider
from src.tfew_scoring.rank import rank_utterance
from src.zeroshot.classifier import ZeroShotConfig, classify_batch
from src.zeroshot.prompt import build_zero_shot_prompt

RESOLVED_CONFIG_FILE = "config.resolved.json"
FAILURES_FILE = "failures.json"
SAMPLE_FILE = "sample.json"
HEAD_FILE = "head.json"
AUDIT_FILE = "audit.jsonl"
ERROR_FILE = "error.json"
AUGMENTED_DIR = "augmented"


def write_json(path: str, document) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, ensure_ascii=False)
        f.write("\n")


def write_jsonl(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def seed_dir_name(seed: int) -> str:
    return f"seed_{seed}"


@dataclass
class SeedOutcome:
    seed: int
    run: Optional[RunResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.run is not None


@dataclass
class ExperimentOutcome:
    report: Optional[dict]
    seeds: List[SeedOutcome] = field(default_factory=list)

    @property
    def failures(self) -> Dict[int, str]:
        return {s.seed: s.error for s in self.seeds if not s.ok}

    @property
    def succeeded(self) -> bool:
        return self.report is not None and not self.failures


class ExperimentService:
    """
    Runs one configured method over every seed.
    A failing seed is recorded under its directory and does not stop the others.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        raw_document: Optional[dict] = None,
        dataset: Optional[Dataset] = None,
        completion_provider: Optional[CompletionProvider] = None,
        embedding_provider: Optional[EmbeddingProvider] = None,
    ):
        self._logger = BenchLogger.get_instance()
        self._config = config
        self._raw_document = raw_document
        self._dataset = dataset or load_dataset(config.dataset_path)
        if not self._dataset.test:
            raise ValueError(f"dataset {self._dataset.name} has no test split to evaluate on")
        self._completion = completion_provider
        self._embedding = embedding_provider

    @property
    def dataset(self) -> Dataset:
        return self._dataset

    @property
    def completion_provider(self) -> CompletionProvider:
        if self._completion is None:
            self._completion = build_completion_provider(self._config, self._dataset)
        return self._completion

    @property
    def embedding_provider(self) -> EmbeddingProvider:
        if self._embedding is None:
            self._embedding = build_embedding_provider(self._config)
        return self._embedding

    def run(self) -> ExperimentOutcome:
        """
        Execute all seeds, aggregate and write the report.

        Returns:
            ExperimentOutcome; `report` is None when every seed failed
        """
        config = self._config
        os.makedirs(config.output_dir, exist_ok=True)
        if self._raw_document is not None:
            write_json(os.path.join(config.output_dir, RESOLVED_CONFIG_FILE), self._raw_document)

        self._logger.log_info(
            message=f"Starting {config.method} on {self._dataset.name}, k={config.k}, "
                    f"seeds={list(config.seeds)}",
            status=Status.Running,
            source="Experiment"
        )

        workers = len(config.seeds) if config.concurrent_seeds else 1
        outcomes = map_bounded(self._run_seed_safely, list(config.seeds), max_workers=workers)
        outcomes.sort(key=lambda outcome: outcome.seed)

        runs = [outcome.run for outcome in outcomes if outcome.ok]
        failures = {str(o.seed): o.error for o in outcomes if not o.ok}
        failures_path = os.path.join(config.output_dir, FAILURES_FILE)
        if failures:
            write_json(failures_path, failures)
        elif os.path.exists(failures_path):
            os.remove(failures_path)

        if not runs:
            self._logger.log_error(
                message=f"All {len(outcomes)} seeds failed, no report written",
                source="Experiment"
            )
            return ExperimentOutcome(report=None, seeds=outcomes)

        report = build_report(aggregate(runs, config.top_k_recall), self._dataset.name, config.k)
        write_report(report, config.output_dir)
        self._logger.log_info(
            message=f"Report written to {config.output_dir} ({len(runs)} seeds ok, {len(failures)} failed)",
            status=Status.Completed if not failures else Status.Failed,
            source="Experiment"
        )
        return ExperimentOutcome(report=report, seeds=outcomes)

    def _run_seed_safely(self, seed: int) -> SeedOutcome:
        seed_dir = os.path.join(self._config.output_dir, seed_dir_name(seed))
        os.makedirs(seed_dir, exist_ok=True)
        error_path = os.path.join(seed_dir, ERROR_FILE)
        try:
            run = self.run_seed(seed, seed_dir)
        except Exception as e:
            message = f"{type(e).__name__}: {e}"
            self._logger.log_error(
                message=f"Seed failed: {message}",
                correlation_id=f"seed-{seed}",
                source="Experiment"
            )
            write_json(error_path, {"seed": seed, "error": message})
            return SeedOutcome(seed=seed, error=message)

        if os.path.exists(error_path):
            os.remove(error_path)
        return SeedOutcome(seed=seed, run=run)

    def run_seed(self, seed: int, seed_dir: str) -> RunResult:
        """Execute the configured method for one seed and persist its artifacts."""
        method = self._config.method
        self._logger.log_info(
            message=f"Running {method}",
            correlation_id=f"seed-{seed}",
            source="Experiment"
        )
        handler = {
            "fewshot": self._run_fewshot,
            "zeroshot": self._run_zeroshot,
            "zeroshot_filtered": self._run_zeroshot,
            "augment_paraphrase": self._run_augmentation,
            "augment_description": self._run_augmentation,
            "rank_classify": self._run_rank_classify,
        }[method]
        run = handler(seed, seed_dir)

        texts = [u.text for u in self._dataset.test]
        save_predictions(run, os.path.join(seed_dir, PREDICTIONS_FILE), texts)
        metrics = evaluate(run, self._config.top_k_recall)
        self._logger.log_info(
            message=f"in-scope accuracy {metrics.in_scope_accuracy:.4f}"
                    + (f", OOS recall {metrics.oos_recall:.4f}" if metrics.oos_recall is not None else ""),
            status=Status.Completed,
            correlation_id=f"seed-{seed}",
            source="Experiment"
        )
        return run

    def _sample(self, seed: int, seed_dir: str) -> FewShotSample:
        sample = sample_few_shot(self._dataset, self._config.k, seed)
        write_json(os.path.join(seed_dir, SAMPLE_FILE), sample.to_dict())
        return sample

    def _evaluate_head(self, head: ClassifierHead, seed: int) -> RunResult:
        test = self._dataset.test
        X = embed_utterances(test, self.embedding_provider)
        outcomes = predict_batch(head, X, self._config.threshold)
        return RunResult(
            seed=seed,
            predictions=[(u.label, o.label) for u, o in zip(test, outcomes)],
            method=self._config.method,
            rankings=[(u.label, ranked_intents(head, o.probabilities)) for u, o in zip(test, outcomes)],
        )

    def _run_fewshot(self, seed: int, seed_dir: str) -> RunResult:
        sample = self._sample(seed, seed_dir)
        head = train_head(sample, self.embedding_provider, replace(self._config.training, seed=seed))
        save_head(head, os.path.join(seed_dir, HEAD_FILE))
        return self._evaluate_head(head, seed)

    def _run_zeroshot(self, seed: int, seed_dir: str) -> RunResult:
        config = self._config
        filtered = config.method == "zeroshot_filtered"
        sample = self._sample(seed, seed_dir) if filtered else None
        zs_config = ZeroShotConfig(
            use_filtering=filtered,
            top_k=config.filter_top_k,
            include_none_option=config.include_none_option,
            generation=config.zeroshot_generation,
        )
        records = classify_batch(
            self._dataset.test, self._dataset, zs_config, self.completion_provider,
            self.embedding_provider if filtered else None, sample, max_workers=config.max_parallel,
        )

        audit = []
        for record in records:
            row = record.to_dict()
            intents = [self._dataset.intent(name) for name in record.prompt_intents]
            row["prompt"] = build_zero_shot_prompt(intents, record.text, config.include_none_option)
            audit.append(row)
        write_jsonl(os.path.join(seed_dir, AUDIT_FILE), audit)

        return RunResult(
            seed=seed,
            predictions=[(r.gold, r.predicted) for r in records],
            method=config.method,
            rankings=[(r.gold, list(r.ranking)) for r in records] if filtered else None,
        )

    def _run_augmentation(self, seed: int, seed_dir: str) -> RunResult:
        config = self._config
        approach = Approach.PARAPHRASE if config.method == "augment_paraphrase" else Approach.DESCRIPTION
        sample = self._sample(seed, seed_dir)
        seed_set = SeedSet(sample, expected_k=config.k)
        aug_config = AugConfig(
            n_generate=config.n_generate,
            include_seed=config.include_seed,
            generation=config.augmentation_generation,
        )
        result = augment_dataset(seed_set, self._dataset, self.completion_provider, aug_config,
                                 approach, max_workers=config.max_parallel)
        augmented_dir = os.path.join(seed_dir, AUGMENTED_DIR)
        result.save(augmented_dir)
        write_jsonl(os.path.join(augmented_dir, AUDIT_FILE), [
            {"intent": intent, "prompt": build_prompt(approach, intent, seed_set, self._dataset, config.n_generate)}
            for intent in sorted(self._dataset.intent_names)
            if intent not in result.errors
        ])

        head = train_on_utterances(result.utterances, sample.intent_names, self.embedding_provider,
                                   replace(config.training, seed=seed))
        save_head(head, os.path.join(seed_dir, HEAD_FILE))
        return self._evaluate_head(head, seed)

    def _run_rank_classify(self, seed: int, seed_dir: str) -> RunResult:
        config = self._config
        intents = list(self._dataset.intents)
        provider = self.completion_provider

        def _rank(utterance):
            return rank_utterance(utterance.text, intents, provider, gold=utterance.label,
                                  include_none_option=config.include_none_option)

        records = map_bounded(_rank, self._dataset.test, max_workers=config.max_parallel)
        write_jsonl(os.path.join(seed_dir, AUDIT_FILE), [r.to_dict() for r in records])
        return RunResult(
            seed=seed,
            predictions=[(r.gold, r.predicted) for r in records],
            method=config.method,
            rankings=[(r.gold, r.ranking) for r in records],
        )
