"""
Zero-shot classification pipeline:
(optional filter) -> prompt -> completion -> parse.

Prompts carry intent descriptions only, never example utterances.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from src.constants import Status
from src.corpus.models import Dataset, FewShotSample, LabeledUtterance
from src.embedding.providers import EmbeddingProvider
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.errors import ProviderError
from src.llm_gateway.models import GenerationParams, zero_shot_preset
from src.llm_gateway.pool import map_bounded
from src.logging_config import BenchLogger
from src.zeroshot.filtering import IntentIndex
from src.zeroshot.parser import ParsedPrediction, parse_completion
from src.zeroshot.prompt import build_zero_shot_prompt


class ClassificationError(RuntimeError):
    """A provider failed while classifying one utterance."""

    def __init__(self, utterance: str, cause: Exception):
        self.utterance = utterance
        self.cause = cause
        super().__init__(f"classification failed for {utterance!r}: {cause}")


@dataclass(frozen=True)
class ZeroShotConfig:
    use_filtering: bool = False
    top_k: int = 5
    include_none_option: bool = True
    generation: GenerationParams = field(default_factory=zero_shot_preset)

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")


@dataclass(frozen=True)
class ZeroShotRecord:
    """Audit record for one classified utterance."""
    text: str
    gold: Optional[str]
    prediction: ParsedPrediction
    prompt_intents: Tuple[str, ...]
    completion: str
    ranking: Tuple[str, ...] = ()

    @property
    def predicted(self) -> str:
        return self.prediction.label

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "gold": self.gold,
            "predicted": self.predicted,
            "prompt_intents": list(self.prompt_intents),
            "completion": self.completion,
        }


def run_zero_shot(
    utterance: str,
    dataset: Dataset,
    config: ZeroShotConfig,
    completion_provider: CompletionProvider,
    embedding_provider: Optional[EmbeddingProvider] = None,
    fewshot: Optional[FewShotSample] = None,
    index: Optional[IntentIndex] = None,
    gold: Optional[str] = None,
) -> ZeroShotRecord:
    """
    Classify one utterance and keep everything needed for the audit report.

    Raises:
        ValueError: Filtering requested without a few-shot sample
        ClassificationError: Any provider failure, with the utterance attached
    """
    ranking: Tuple[str, ...] = ()
    try:
        if config.use_filtering:
            if index is None:
                if fewshot is None or embedding_provider is None:
                    raise ValueError("filtering needs a few-shot sample and an embedding provider")
                index = IntentIndex.build(fewshot, embedding_provider)
            ranking = tuple(name for name, _ in index.rank(utterance))
            prompt_names = list(ranking[:config.top_k])
            intents = [dataset.intent(name) for name in prompt_names]
        else:
            intents = list(dataset.intents)
            prompt_names = [intent.name for intent in intents]

        prompt = build_zero_shot_prompt(intents, utterance, config.include_none_option)
        result = completion_provider.complete(config.generation.request(prompt))
    except ProviderError as e:
        raise ClassificationError(utterance, e) from e

    prediction = parse_completion(result.text, prompt_names, config.include_none_option)
    return ZeroShotRecord(
        text=utterance,
        gold=gold,
        prediction=prediction,
        prompt_intents=tuple(prompt_names),
        completion=result.text,
        ranking=ranking,
    )


def classify_zero_shot(
    utterance: str,
    dataset: Dataset,
    config: ZeroShotConfig,
    completion_provider: CompletionProvider,
    embedding_provider: Optional[EmbeddingProvider] = None,
    fewshot: Optional[FewShotSample] = None,
) -> ParsedPrediction:
    return run_zero_shot(utterance, dataset, config, completion_provider,
                         embedding_provider, fewshot).prediction


def classify_batch(
    utterances: Sequence[LabeledUtterance],
    dataset: Dataset,
    config: ZeroShotConfig,
    completion_provider: CompletionProvider,
    embedding_provider: Optional[EmbeddingProvider] = None,
    fewshot: Optional[FewShotSample] = None,
    max_workers: int = 1,
) -> List[ZeroShotRecord]:
    """Classify labeled utterances; records come back in input order."""
    logger = BenchLogger.get_instance()
    index = None
    if config.use_filtering:
        if fewshot is None or embedding_provider is None:
            raise ValueError("filtering needs a few-shot sample and an embedding provider")
        index = IntentIndex.build(fewshot, embedding_provider)

    def _one(utterance: LabeledUtterance) -> ZeroShotRecord:
        return run_zero_shot(utterance.text, dataset, config, completion_provider,
                             embedding_provider, fewshot, index=index, gold=utterance.label)

    logger.log_info(
        message=f"Zero-shot classifying {len(utterances)} utterances "
                f"(filtering={'top-%d' % config.top_k if config.use_filtering else 'off'})",
        status=Status.Running,
        source="ZeroShot"
    )
    return map_bounded(_one, utterances, max_workers=max_workers)
