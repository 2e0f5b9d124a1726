"""
Remote completion/scoring provider.

Generation parameters are passed through untouched; any defaults (for
example when max_tokens is null) are whatever the backend defines.
"""

import math
from numbers import Real
from typing import List, Optional

from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.errors import MalformedResponseError, ScoringUnsupportedError
from src.llm_gateway.http_transport import HttpTransport
from src.llm_gateway.models import CompletionRequest


class RemoteCompletionProvider(CompletionProvider):

    def __init__(
        self,
        completion_url: str,
        scoring_url: Optional[str] = None,
        provider_id: str = "remote",
        transport: Optional[HttpTransport] = None,
        **transport_options,
    ):
        super().__init__()
        self.provider_id = provider_id
        self._completion_url = completion_url
        self._scoring_url = scoring_url
        self._transport = transport or HttpTransport(provider_id=provider_id, **transport_options)

    @property
    def transport(self) -> HttpTransport:
        return self._transport

    @property
    def supports_scoring(self) -> bool:
        return bool(self._scoring_url)

    def _complete(self, request: CompletionRequest) -> str:
        payload = {
            "prompt": request.prompt,
            "temperature": request.temperature,
            "top_p": request.top_p,
            "max_tokens": request.max_tokens,
            "stop": list(request.stop_sequences),
        }
        document = self._transport.post_json(self._completion_url, payload, "complete")
        text = document.get("text")
        if not isinstance(text, str):
            raise MalformedResponseError("missing string field 'text'", self.provider_id, "complete")
        return text

    def _score(self, prompt: str, target: str) -> List[float]:
        if not self._scoring_url:
            raise ScoringUnsupportedError("no scoring endpoint configured", self.provider_id, "score_target")
        document = self._transport.post_json(self._scoring_url, {"prompt": prompt, "target": target},
                                             "score_target")
        values = document.get("logprobs")
        if not isinstance(values, list) or not values:
            raise MalformedResponseError("missing list field 'logprobs'", self.provider_id, "score_target")
        if not all(isinstance(v, Real) and not isinstance(v, bool) and math.isfinite(v) for v in values):
            raise MalformedResponseError("'logprobs' must hold finite numbers", self.provider_id, "score_target")
        return [float(v) for v in values]
