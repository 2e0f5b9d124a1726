# Completion and scoring providers
from src.llm_gateway.base import CompletionProvider, complete, score_target
from src.llm_gateway.errors import (
    MalformedResponseError,
    ProviderError,
    ProviderRefusalError,
    ProviderTimeoutError,
    ProviderTransportError,
    ScoringUnsupportedError,
)
from src.llm_gateway.models import (
    CompletionRequest,
    CompletionResult,
    GenerationParams,
    TokenLogProbs,
    augmentation_preset,
    zero_shot_preset,
)

__all__ = [
    "CompletionProvider",
    "CompletionRequest",
    "CompletionResult",
    "GenerationParams",
    "MalformedResponseError",
    "ProviderError",
    "ProviderRefusalError",
    "ProviderTimeoutError",
    "ProviderTransportError",
    "ScoringUnsupportedError",
    "TokenLogProbs",
    "augmentation_preset",
    "complete",
    "score_target",
    "zero_shot_preset",
]
