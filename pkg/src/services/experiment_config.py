"""
Validated experiment settings built from the loaded configuration.
Everything is checked here, before any provider is constructed.
"""

import copy
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from src.constants import METHODS
from src.fewshot_head.head import HeadError, TrainConfig
from src.llm_gateway.http_transport import MAX_TIMEOUT_RETRIES
from src.llm_gateway.models import GenerationParams, augmentation_preset, zero_shot_preset

PROVIDER_MODES = ("mock", "remote")
MOCK_KINDS = ("oracle", "never", "hash")
DEFAULT_SEEDS = (1, 2, 3, 4, 5)

# k = 0 means the method samples no labeled utterances
DEFAULT_K = {
    "fewshot": 5,
    "zeroshot": 0,
    "zeroshot_filtered": 5,
    "augment_paraphrase": 5,
    "augment_description": 5,
    "rank_classify": 0,
}
SAMPLING_METHODS = ("fewshot", "zeroshot_filtered", "augment_paraphrase", "augment_description")
COMPLETION_METHODS = ("zeroshot", "zeroshot_filtered", "augment_paraphrase", "augment_description")


class ConfigError(ValueError):
    """The experiment configuration is incomplete or inconsistent."""


def apply_overrides(document: dict, overrides: Optional[Dict[str, Any]]) -> dict:
    """
    Copy of `document` with dotted-key overrides applied,
    e.g. {"experiment.seeds": [1, 2]}. None values are skipped.
    """
    result = copy.deepcopy(document or {})
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = result
        *parents, leaf = dotted.split(".")
        for key in parents:
            if not isinstance(node.get(key), dict):
                node[key] = {}
            node = node[key]
        node[leaf] = value
    return result


def _generation(section: Optional[dict], preset: GenerationParams) -> GenerationParams:
    try:
        return preset.with_overrides(section)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid generation parameters {section}: {e}") from e


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    method: str
    k: int
    seeds: Tuple[int, ...]
    output_dir: str
    provider_mode: str = "mock"
    mock_kind: str = "oracle"
    max_parallel: int = 1
    concurrent_seeds: bool = False
    top_k_recall: int = 5
    embedding: Dict[str, Any] = field(default_factory=dict)
    completion: Dict[str, Any] = field(default_factory=dict)
    zeroshot_generation: GenerationParams = field(default_factory=zero_shot_preset)
    augmentation_generation: GenerationParams = field(default_factory=augmentation_preset)
    training: TrainConfig = field(default_factory=TrainConfig)
    threshold: float = 0.0
    filter_top_k: int = 5
    include_none_option: bool = True
    n_generate: int = 20
    include_seed: bool = False
    prompt_intent_limit: int = 15

    @classmethod
    def from_dict(cls, document: dict) -> "ExperimentConfig":
        """
        Raises:
            ConfigError: Missing or invalid settings
        """
        experiment = document.get("experiment") or {}
        providers = document.get("providers") or {}
        generation = document.get("generation") or {}
        training = dict(document.get("training") or {})
        zeroshot = document.get("zeroshot") or {}
        augmentation = document.get("augmentation") or {}
        tfew = document.get("tfew") or {}

        method = experiment.get("method", "fewshot")
        if method not in METHODS:
            raise ConfigError(f"unknown method {method!r}, expected one of {list(METHODS)}")

        threshold = float(training.pop("threshold", 0.0))
        try:
            train_config = TrainConfig(**training)
        except (TypeError, HeadError) as e:
            raise ConfigError(f"invalid training section: {e}") from e

        config = cls(
            dataset_path=experiment.get("dataset") or "",
            method=method,
            k=int(experiment.get("k", DEFAULT_K[method])),
            seeds=tuple(experiment.get("seeds") or ()) if "seeds" in experiment else DEFAULT_SEEDS,
            output_dir=experiment.get("output_dir") or os.path.join("runs", method),
            provider_mode=providers.get("mode", "mock"),
            mock_kind=providers.get("mock", "oracle"),
            max_parallel=int(providers.get("max_parallel", 1)),
            concurrent_seeds=bool(experiment.get("concurrent_seeds", False)),
            top_k_recall=int(experiment.get("top_k_recall", 5)),
            embedding=dict(providers.get("embedding") or {}),
            completion=dict(providers.get("completion") or {}),
            zeroshot_generation=_generation(generation.get("zeroshot"), zero_shot_preset()),
            augmentation_generation=_generation(generation.get("augmentation"), augmentation_preset()),
            training=train_config,
            threshold=threshold,
            filter_top_k=int(zeroshot.get("top_k", 5)),
            include_none_option=bool(zeroshot.get("include_none_option", True)),
            n_generate=int(augmentation.get("n_generate", 20)),
            include_seed=bool(augmentation.get("include_seed", False)),
            prompt_intent_limit=int(tfew.get("prompt_intent_limit", 15)),
        )
        config.validate()
        return config

    def validate(self) -> None:
        if not self.seeds:
            raise ConfigError("experiment.seeds must not be empty")
        if not all(isinstance(seed, int) and not isinstance(seed, bool) for seed in self.seeds):
            raise ConfigError(f"experiment.seeds must be integers, got {list(self.seeds)}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"experiment.seeds has duplicates: {list(self.seeds)}")
        if self.method in SAMPLING_METHODS and self.k < 1:
            raise ConfigError(f"method {self.method} needs k >= 1, got {self.k}")
        if not self.dataset_path:
            raise ConfigError("experiment.dataset is required")
        if not os.path.isdir(self.dataset_path):
            raise ConfigError(f"dataset directory not found: {self.dataset_path}")
        if self.provider_mode not in PROVIDER_MODES:
            raise ConfigError(f"providers.mode must be one of {list(PROVIDER_MODES)}, got {self.provider_mode!r}")
        if self.mock_kind not in MOCK_KINDS:
            raise ConfigError(f"providers.mock must be one of {list(MOCK_KINDS)}, got {self.mock_kind!r}")
        if self.max_parallel < 1:
            raise ConfigError(f"providers.max_parallel must be >= 1, got {self.max_parallel}")
        if self.top_k_recall < 1 or self.filter_top_k < 1:
            raise ConfigError("top-k settings must be >= 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"training.threshold must be in [0, 1], got {self.threshold}")
        if self.n_generate < 1:
            raise ConfigError(f"augmentation.n_generate must be >= 1, got {self.n_generate}")
        if self.prompt_intent_limit < 1:
            raise ConfigError(f"tfew.prompt_intent_limit must be >= 1, got {self.prompt_intent_limit}")

        for section, options in (("embedding", self.embedding), ("completion", self.completion)):
            retries = options.get("max_retries", MAX_TIMEOUT_RETRIES)
            if isinstance(retries, bool) or not isinstance(retries, int) or not 0 <= retries <= MAX_TIMEOUT_RETRIES:
                raise ConfigError(
                    f"providers.{section}.max_retries must be an integer in [0, {MAX_TIMEOUT_RETRIES}], got {retries!r}"
                )

        if self.provider_mode == "remote":
            if self.method in COMPLETION_METHODS and not self.completion.get("url"):
                raise ConfigError(f"method {self.method} needs providers.completion.url in remote mode")
            if self.method == "rank_classify" and not self.completion.get("scoring_url"):
                raise ConfigError("rank_classify needs providers.completion.scoring_url in remote mode")
            if self.embedding.get("kind", "hash") == "remote":
                if not self.embedding.get("url"):
                    raise ConfigError("providers.embedding.url is required for a remote embedding")
                if not isinstance(self.embedding.get("dimension"), int):
                    raise ConfigError("providers.embedding.dimension is required for a remote embedding")
