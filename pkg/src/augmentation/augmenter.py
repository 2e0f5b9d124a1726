"""
LLM data augmentation from a 5-shot seed set.

Each intent gets one generation request. Generations are parsed, deduplicated
within the (intent, approach) batch and labeled with the intent. The seed
set joins the output only when include_seed is set.
"""

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from src.constants import Status
from src.corpus.loader import save_train_split
from src.corpus.models import Dataset, FewShotSample, LabeledUtterance
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.errors import ProviderError
from src.llm_gateway.models import GenerationParams, augmentation_preset
from src.llm_gateway.pool import map_bounded
from src.logging_config import BenchLogger
from src.augmentation.parser import parse_generated
from src.augmentation.prompts import build_description_aug_prompt, build_paraphrase_prompt

DEFAULT_SEED_SIZE = 5
MANIFEST_FILE = "manifest.json"


class Approach(str, Enum):
    PARAPHRASE = "paraphrase"
    DESCRIPTION = "description"


@dataclass(frozen=True)
class SeedSet:
    """A few-shot sample used as augmentation input."""
    sample: FewShotSample
    expected_k: int = DEFAULT_SEED_SIZE

    def __post_init__(self):
        if self.sample.k != self.expected_k:
            raise ValueError(f"seed set has k={self.sample.k}, expected {self.expected_k}")

    def texts(self, intent: str) -> List[str]:
        return [u.text for u in self.sample.examples.get(intent, ())]


@dataclass(frozen=True)
class AugConfig:
    n_generate: int = 20
    include_seed: bool = False
    generation: GenerationParams = field(default_factory=augmentation_preset)

    def __post_init__(self):
        if self.n_generate < 1:
            raise ValueError(f"n_generate must be >= 1, got {self.n_generate}")


@dataclass(frozen=True)
class GeneratedUtterance:
    text: str
    intent: str
    approach: Approach
    raw_line: str


@dataclass
class AugmentationResult:
    approach: Approach
    config: AugConfig
    utterances: List[LabeledUtterance]
    generated: List[GeneratedUtterance]
    per_intent_counts: Dict[str, int]
    errors: Dict[str, str]

    def manifest(self) -> dict:
        return {
            "approach": self.approach.value,
            "n_generate": self.config.n_generate,
            "include_seed": self.config.include_seed,
            "per_intent_counts": dict(self.per_intent_counts),
            "errors": dict(self.errors),
        }

    def save(self, directory: str) -> None:
        """Write train.jsonl plus the sidecar manifest."""
        os.makedirs(directory, exist_ok=True)
        save_train_split(self.utterances, os.path.join(directory, "train.jsonl"))
        with open(os.path.join(directory, MANIFEST_FILE), "w", encoding="utf-8") as f:
            json.dump(self.manifest(), f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")


def _raw_lines(completion: str) -> Dict[str, str]:
    """Cleaned text -> first raw line it came from."""
    origin: Dict[str, str] = {}
    for line in completion.split("\n"):
        for text in parse_generated(line, 1):
            origin.setdefault(text.lower(), line)
    return origin


def build_prompt(approach: Approach, intent: str, seed: SeedSet, dataset: Dataset, n: int) -> str:
    if approach == Approach.PARAPHRASE:
        return build_paraphrase_prompt(seed.texts(intent), n)
    return build_description_aug_prompt(dataset.intents, intent, n)


def augment_dataset(
    seed: SeedSet,
    dataset: Dataset,
    provider: CompletionProvider,
    config: AugConfig,
    approach: Approach,
    max_workers: int = 1,
) -> AugmentationResult:
    """
    Generate a labeled training set, one request per intent.

    Provider failures are recorded per intent; the other intents still
    contribute. Output is ordered by intent name whatever the completion order.
    """
    logger = BenchLogger.get_instance()
    approach = Approach(approach)
    intents = sorted(dataset.intent_names)

    def _generate(intent: str) -> Tuple[List[GeneratedUtterance], Optional[str]]:
        try:
            prompt = build_prompt(approach, intent, seed, dataset, config.n_generate)
        except ValueError as e:
            return [], str(e)
        try:
            completion = provider.complete(config.generation.request(prompt)).text
        except ProviderError as e:
            return [], str(e)
        origin = _raw_lines(completion)
        return [
            GeneratedUtterance(text=text, intent=intent, approach=approach, raw_line=origin.get(text.lower(), text))
            for text in parse_generated(completion, config.n_generate)
        ], None

    outcomes = map_bounded(_generate, intents, max_workers=max_workers)

    utterances: List[LabeledUtterance] = []
    generated: List[GeneratedUtterance] = []
    counts: Dict[str, int] = {}
    errors: Dict[str, str] = {}
    for intent, (batch, error) in zip(intents, outcomes):
        if error is not None:
            errors[intent] = error
            logger.log_warning(
                message=f"Augmentation failed for intent {intent}: {error}",
                status=Status.Failed,
                source="Augmentation"
            )
        generated.extend(batch)
        utterances.extend(LabeledUtterance(text=g.text, label=intent) for g in batch)
        counts[intent] = len(batch)
        if config.include_seed:
            utterances.extend(seed.sample.examples.get(intent, ()))

    logger.log_info(
        message=f"Augmentation ({approach.value}) produced {len(generated)} utterances "
                f"for {len(intents)} intents, {len(errors)} failed",
        status=Status.Completed if not errors else Status.Failed,
        source="Augmentation"
    )
    return AugmentationResult(
        approach=approach,
        config=config,
        utterances=utterances,
        generated=generated,
        per_intent_counts=counts,
        errors=errors,
    )
