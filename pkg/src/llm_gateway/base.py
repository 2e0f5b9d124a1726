"""
Completion/scoring provider contract.

Concrete providers implement `_complete` and optionally `_score`; the public
methods add request counting, latency measurement, response validation and
error wrapping so every failure carries provider_id and operation.
"""

import threading
import time
from abc import ABC, abstractmethod
from typing import List

from src.llm_gateway.errors import MalformedResponseError, ProviderError, ScoringUnsupportedError
from src.llm_gateway.models import CompletionRequest, CompletionResult, TokenLogProbs


class CompletionProvider(ABC):

    provider_id = "completion"

    def __init__(self):
        self._lock = threading.Lock()
        self._request_count = 0

    @abstractmethod
    def _complete(self, request: CompletionRequest) -> str:
        ...

    def _score(self, prompt: str, target: str) -> List[float]:
        raise ScoringUnsupportedError("provider cannot score targets", self.provider_id, "score_target")

    @property
    def supports_scoring(self) -> bool:
        return type(self)._score is not CompletionProvider._score

    @property
    def request_count(self) -> int:
        return self._request_count

    def _count(self):
        with self._lock:
            self._request_count += 1

    def complete(self, request: CompletionRequest) -> CompletionResult:
        """Run a completion; the returned text is verbatim."""
        self._count()
        started = time.perf_counter()
        try:
            text = self._complete(request)
        except ProviderError:
            raise
        except Exception as e:
            raise ProviderError(f"unexpected failure: {e}", self.provider_id, "complete") from e
        if not isinstance(text, str):
            raise MalformedResponseError("completion text is not a string", self.provider_id, "complete")
        return CompletionResult(text=text, provider_id=self.provider_id,
                                latency_s=time.perf_counter() - started)

    def score_target(self, prompt: str, target: str) -> TokenLogProbs:
        """Per-token log-probabilities of `target` continuing `prompt`."""
        if not target:
            raise ValueError("target must be non-empty")
        self._count()
        try:
            values = self._score(prompt, target)
        except ProviderError:
            raise
        except Exception as e:
            raise ProviderError(f"unexpected failure: {e}", self.provider_id, "score_target") from e
        try:
            return TokenLogProbs(target=target, logprobs=tuple(values))
        except (TypeError, ValueError) as e:
            raise MalformedResponseError(str(e), self.provider_id, "score_target") from e


def complete(provider: CompletionProvider, request: CompletionRequest) -> CompletionResult:
    return provider.complete(request)


def score_target(provider: CompletionProvider, prompt: str, target: str) -> TokenLogProbs:
    return provider.score_target(prompt, target)
