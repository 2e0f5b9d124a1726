"""
Subcommands of the intent-bench command line.

Every command returns its exit code:
    0  success
    1  partial or experiment failure
    2  usage, configuration or load error
Machine-readable output goes to stdout; logs go to stderr.
"""

import argparse
import json
import os
import re
import sys
from dataclasses import replace
from typing import Callable, Dict, List, Optional

from src.augmentation.augmenter import Approach, AugConfig, SeedSet, augment_dataset
from src.config_loader import ConfigLoader
from src.constants import METHODS, OOS_LABEL, Status
from src.corpus.loader import load_dataset, load_train_split
from src.corpus.models import Dataset, DatasetError, FewShotSample, LabeledUtterance
from src.corpus.sampling import dataset_stats, sample_few_shot
from src.eval.metrics import MetricError
from src.eval.report import compare_reports, load_report
from src.fewshot_head.head import HeadError, predict_batch, ranked_intents
from src.fewshot_head.serialization import load_head, save_head
from src.fewshot_head.trainer import HeadTrainingError, embed_utterances, train_head, train_on_utterances
from src.llm_gateway.errors import ProviderError
from src.logging_config import BenchLogger
from src.services.experiment_config import ConfigError, ExperimentConfig, apply_overrides
from src.services.experiment_service import ExperimentService
from src.services.provider_factory import build_completion_provider, build_embedding_provider
from src.tfew_scoring.rank import rank_utterance
from src.zeroshot.classifier import ClassificationError, ZeroShotConfig, classify_batch

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Errors that mean bad input rather than a failed experiment
USAGE_ERRORS = (ConfigError, DatasetError, MetricError, HeadError, FileNotFoundError, ValueError)


def emit(document) -> None:
    print(json.dumps(document, ensure_ascii=False))


def parse_seeds(text: str) -> List[int]:
    """"1,2,3" or "1-5" to a list of seeds."""
    seeds: List[int] = []
    for part in (p.strip() for p in text.split(",")):
        span = re.fullmatch(r"(\d+)-(\d+)", part)
        if span:
            seeds.extend(range(int(span.group(1)), int(span.group(2)) + 1))
        elif re.fullmatch(r"-?\d+", part):
            seeds.append(int(part))
        elif part:
            raise argparse.ArgumentTypeError(f"invalid seed list {text!r}")
    if not seeds:
        raise argparse.ArgumentTypeError("seed list is empty")
    return seeds


def load_document(args) -> dict:
    """
    The raw configuration document, placeholders intact.
    Without --config and without a default file an empty document is used.
    """
    path = getattr(args, "config", None)
    if path is None and not os.path.exists(os.getenv("CONFIG_PATH", "./config/config.json")):
        ConfigLoader.from_dict({})
        return {}
    ConfigLoader.reset()
    loader = ConfigLoader(path)
    BenchLogger.get_instance().configure_from(loader.resolved_config)
    return loader.raw_config


def common_overrides(args) -> Dict[str, object]:
    seeds = getattr(args, "seeds", None)
    if seeds is None and getattr(args, "seed", None) is not None:
        seeds = [args.seed]
    return {
        "experiment.output_dir": getattr(args, "out", None),
        "experiment.seeds": seeds,
        "providers.mode": getattr(args, "provider", None),
        "providers.mock": getattr(args, "mock", None),
    }


def experiment_config(args, method: str, dataset_path: str, k: Optional[int] = None,
                      extra: Optional[dict] = None):
    """
    Build a validated ExperimentConfig for a single-purpose command.

    Returns:
        (config, raw document with overrides applied)
    """
    raw = load_document(args)
    overrides = common_overrides(args)
    overrides.update({"experiment.method": method, "experiment.dataset": dataset_path, "experiment.k": k})
    overrides.update(extra or {})
    raw = apply_overrides(raw, overrides)
    resolved = apply_overrides(ConfigLoader().resolved_config, overrides)
    return ExperimentConfig.from_dict(resolved), raw


def _first_seed(config: ExperimentConfig) -> int:
    return config.seeds[0]


def _test_rows(dataset: Dataset, text: Optional[str]) -> List[LabeledUtterance]:
    if text is not None:
        return [LabeledUtterance(text=text, label=OOS_LABEL)]
    if not dataset.test:
        raise DatasetError("dataset has no test split; pass --text")
    return list(dataset.test)


def cmd_stats(args) -> int:
    rows = []
    for path in args.dataset:
        try:
            rows.append(dataset_stats(load_dataset(path)))
        except DatasetError as e:
            print(f"error: cannot load dataset {path}: {e}", file=sys.stderr)
            return EXIT_USAGE

    if args.json:
        for stats in rows:
            emit(stats.to_dict())
        return EXIT_OK

    print("dataset | intents | train | test | oos")
    for stats in rows:
        print(f"{stats.name} | {stats.n_intents} | {stats.n_train} | {stats.n_test} | {stats.n_oos}")
    return EXIT_OK


def cmd_sample(args) -> int:
    dataset = load_dataset(args.dataset)
    seed = (args.seeds or [args.seed if args.seed is not None else 1])[0]
    sample = sample_few_shot(dataset, args.k, seed)
    if args.out:
        os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(sample.to_dict(), f, indent=2, ensure_ascii=False)
            f.write("\n")
    else:
        emit(sample.to_dict())
    return EXIT_OK


def cmd_train(args) -> int:
    config, _ = experiment_config(args, "fewshot", args.dataset, k=args.k)
    dataset = load_dataset(args.dataset)
    seed = _first_seed(config)
    train_config = replace(config.training, seed=seed)
    provider = build_embedding_provider(config)

    if args.augmented:
        head = train_on_utterances(load_train_split(args.augmented), dataset.intent_names, provider, train_config)
    else:
        if args.sample:
            with open(args.sample, "r", encoding="utf-8") as f:
                sample = FewShotSample.from_dict(json.load(f))
        else:
            sample = sample_few_shot(dataset, config.k, seed)
        head = train_head(sample, provider, train_config)

    out = args.out or "head.json"
    save_head(head, out)
    emit({"head": out, "intents": head.n_classes, "input_dim": head.input_dim, "hidden_dim": head.hidden_dim})
    return EXIT_OK


def cmd_predict(args) -> int:
    head = load_head(args.head)
    config, _ = experiment_config(args, "fewshot", args.dataset,
                                  extra={"providers.embedding.dimension": head.input_dim})
    dataset = load_dataset(args.dataset)
    rows = _test_rows(dataset, args.text)
    threshold = args.threshold if args.threshold is not None else config.threshold

    X = embed_utterances(rows, build_embedding_provider(config))
    for utterance, outcome in zip(rows, predict_batch(head, X, threshold)):
        emit({
            "text": utterance.text,
            "gold": None if args.text is not None else utterance.label,
            "predicted": outcome.label,
            "confidence": outcome.confidence,
            "ranking": ranked_intents(head, outcome.probabilities)[:args.top],
        })
    return EXIT_OK


def cmd_zeroshot(args) -> int:
    method = "zeroshot_filtered" if args.filter else "zeroshot"
    extra = {"zeroshot.top_k": args.top_k}
    config, _ = experiment_config(args, method, args.dataset, k=args.k if args.filter else None, extra=extra)
    dataset = load_dataset(args.dataset)
    rows = _test_rows(dataset, args.text)

    sample = sample_few_shot(dataset, config.k, _first_seed(config)) if args.filter else None
    zs_config = ZeroShotConfig(
        use_filtering=args.filter,
        top_k=config.filter_top_k,
        include_none_option=config.include_none_option,
        generation=config.zeroshot_generation,
    )
    records = classify_batch(rows, dataset, zs_config, build_completion_provider(config, dataset),
                             build_embedding_provider(config) if args.filter else None, sample,
                             max_workers=config.max_parallel)
    for record in records:
        row = record.to_dict()
        if args.text is not None:
            row["gold"] = None
        emit(row)
    return EXIT_OK


def cmd_augment(args) -> int:
    method = "augment_paraphrase" if args.approach == Approach.PARAPHRASE.value else "augment_description"
    extra = {"augmentation.n_generate": args.n, "augmentation.include_seed": True if args.include_seed else None}
    config, _ = experiment_config(args, method, args.dataset, k=args.k, extra=extra)
    dataset = load_dataset(args.dataset)

    sample = sample_few_shot(dataset, config.k, _first_seed(config))
    aug_config = AugConfig(n_generate=config.n_generate, include_seed=config.include_seed,
                           generation=config.augmentation_generation)
    result = augment_dataset(SeedSet(sample, expected_k=config.k), dataset,
                             build_completion_provider(config, dataset), aug_config,
                             Approach(args.approach), max_workers=config.max_parallel)
    out = args.out or os.path.join("runs", "augmented", dataset.name)
    result.save(out)
    emit({"output": out, **result.manifest(), "total": len(result.utterances)})
    return EXIT_OK if not result.errors else EXIT_FAILURE


def cmd_score(args) -> int:
    config, _ = experiment_config(args, "rank_classify", args.dataset)
    dataset = load_dataset(args.dataset)
    provider = build_completion_provider(config, dataset)
    for utterance in _test_rows(dataset, args.text):
        gold = None if args.text is not None else utterance.label
        record = rank_utterance(utterance.text, dataset.intents, provider, gold=gold,
                                include_none_option=config.include_none_option)
        emit(record.to_dict())
    return EXIT_OK


def cmd_run(args) -> int:
    logger = BenchLogger.get_instance()
    raw = load_document(args)
    overrides = common_overrides(args)
    overrides.update({
        "experiment.method": args.method,
        "experiment.k": args.k,
        "experiment.dataset": args.dataset,
        "experiment.concurrent_seeds": True if args.concurrent_seeds else None,
    })
    raw = apply_overrides(raw, overrides)
    config = ExperimentConfig.from_dict(apply_overrides(ConfigLoader().resolved_config, overrides))

    outcome = ExperimentService(config, raw_document=raw).run()
    if outcome.report is not None:
        emit(outcome.report)
    if outcome.failures:
        logger.log_error(
            message=f"Seeds failed: {sorted(outcome.failures)}",
            source="Main"
        )
        return EXIT_FAILURE
    logger.log_info(message="Run completed", status=Status.Completed, source="Main")
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        reports = [load_report(path) for path in args.reports]
        table = compare_reports(reports)
    except MetricError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(table)
    return EXIT_OK


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config file (default: $CONFIG_PATH or ./config/config.json)")
    common.add_argument("--out", help="output path")
    seeds = common.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, help="single seed")
    seeds.add_argument("--seeds", type=parse_seeds, help='seed list, e.g. "1,2,3" or "1-5"')
    common.add_argument("--provider", choices=("mock", "remote"), help="provider mode")
    common.add_argument("--mock", choices=("oracle", "never", "hash"), help="mock provider kind")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-bench",
        description="Zero- and few-shot intent classification benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    p = sub.add_parser("stats", parents=[common], help="dataset statistics")
    p.add_argument("dataset", nargs="+")
    p.add_argument("--json", action="store_true", help="one JSON document per dataset")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("sample", parents=[common], help="draw a K-shot sample")
    p.add_argument("dataset")
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("train", parents=[common], help="train a classifier head")
    p.add_argument("dataset")
    p.add_argument("--k", type=int)
    p.add_argument("--sample", help="sample.json to train on")
    p.add_argument("--augmented", help="augmented train.jsonl (or its directory) to train on")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("predict", parents=[common], help="predict with a trained head")
    p.add_argument("dataset")
    p.add_argument("--head", required=True)
    p.add_argument("--text", help="classify one utterance instead of the test split")
    p.add_argument("--threshold", type=float)
    p.add_argument("--top", type=int, default=5, help="ranked intents per row")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("zeroshot", parents=[common], help="zero-shot classification")
    p.add_argument("dataset")
    p.add_argument("--text")
    p.add_argument("--filter", action="store_true", help="restrict prompts to the top-k retrieved intents")
    p.add_argument("--k", type=int, default=5, help="examples per intent for filtering")
    p.add_argument("--top-k", type=int, default=None, dest="top_k")
    p.set_defaults(handler=cmd_zeroshot)

    p = sub.add_parser("augment", parents=[common], help="generate training data")
    p.add_argument("dataset")
    p.add_argument("--approach", choices=[a.value for a in Approach], default=Approach.DESCRIPTION.value)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--n", type=int, default=None, help="utterances to generate per intent")
    p.add_argument("--include-seed", action="store_true", dest="include_seed")
    p.set_defaults(handler=cmd_augment)

    p = sub.add_parser("score", parents=[common], help="rank classification by target scoring")
    p.add_argument("dataset")
    p.add_argument("--text")
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("run", parents=[common], help="multi-seed experiment from a config")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--dataset")
    p.add_argument("--k", type=int)
    p.add_argument("--concurrent-seeds", action="store_true", dest="concurrent_seeds")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("compare", parents=[common], help="side-by-side report table")
    p.add_argument("reports", nargs="+")
    p.set_defaults(handler=cmd_compare)

    return parser


def dispatch(args) -> int:
    """Run the selected handler and map errors to exit codes."""
    logger = BenchLogger.get_instance()
    handler: Callable = args.handler
    try:
        return handler(args)
    except USAGE_ERRORS as e:
        logger.log_error(message=f"{type(e).__name__}: {e}", source="Main")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ProviderError, ClassificationError, HeadTrainingError) as e:
        logger.log_error(message=f"{type(e).__name__}: {e}", source="Main")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
