"""
Remote embedding provider: POST {"texts": [...]} -> {"vectors": [[...]], "dimension": D}.
"""

from typing import Optional, Sequence

import numpy as np

from src.embedding.providers import EmbeddingProvider
from src.embedding.vectors import EmbeddingError, normalize_rows
from src.llm_gateway.errors import MalformedResponseError
from src.llm_gateway.http_transport import HttpTransport


class RemoteEmbeddingProvider(EmbeddingProvider):
    """
    HTTP-backed frozen encoder. Vectors are re-normalized here so the
    unit-norm contract holds whatever the backend returns.
    """

    def __init__(
        self,
        url: str,
        dimension: int,
        provider_id: str = "remote-embedding",
        batch_size: int = 64,
        transport: Optional[HttpTransport] = None,
        **transport_options,
    ):
        super().__init__()
        self.provider_id = provider_id
        self._url = url
        self._dimension = dimension
        self._batch_size = batch_size
        self._transport = transport or HttpTransport(provider_id=provider_id, **transport_options)

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def transport(self) -> HttpTransport:
        return self._transport

    def _embed(self, texts: Sequence[str]) -> np.ndarray:
        chunks = []
        for start in range(0, len(texts), self._batch_size):
            chunks.append(self._embed_chunk(list(texts[start:start + self._batch_size])))
        return np.vstack(chunks)

    def _embed_chunk(self, texts) -> np.ndarray:
        document = self._transport.post_json(self._url, {"texts": texts}, "embed_batch")
        vectors = document.get("vectors")
        dimension = document.get("dimension")
        if dimension != self._dimension:
            raise MalformedResponseError(
                f"dimension {dimension} does not match configured {self._dimension}",
                self.provider_id, "embed_batch")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise MalformedResponseError(
                f"expected {len(texts)} vectors", self.provider_id, "embed_batch")
        try:
            matrix = np.asarray(vectors, dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise MalformedResponseError(f"vectors are not numeric: {e}", self.provider_id, "embed_batch") from e
        if matrix.shape != (len(texts), self._dimension):
            raise MalformedResponseError(
                f"vector shape {matrix.shape} is not ({len(texts)}, {self._dimension})",
                self.provider_id, "embed_batch")
        try:
            return normalize_rows(matrix)
        except EmbeddingError as e:
            raise MalformedResponseError(str(e), self.provider_id, "embed_batch") from e
