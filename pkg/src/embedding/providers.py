"""
Embedding provider contract and the in-process hash provider.
"""

import threading
from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from src.embedding.hash_embedder import hash_embed


class EmbeddingProvider(ABC):
    """
    Frozen sentence encoder.

    Implementations return one unit-norm row per input text, in input order,
    and give identical vectors for identical texts.
    """

    provider_id = "embedding"

    def __init__(self):
        self._lock = threading.Lock()
        self._request_count = 0

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    @abstractmethod
    def _embed(self, texts: Sequence[str]) -> np.ndarray:
        ...

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        """Embed texts into an (n, dimension) array."""
        texts = list(texts)
        with self._lock:
            self._request_count += 1
        if not texts:
            return np.zeros((0, self.dimension), dtype=np.float64)
        return self._embed(texts)

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    @property
    def request_count(self) -> int:
        return self._request_count


class HashEmbeddingProvider(EmbeddingProvider):
    """Hermetic provider backed by hash_embed."""

    provider_id = "hash"

    def __init__(self, dimension: int = 256):
        super().__init__()
        self._dimension = dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    def _embed(self, texts: Sequence[str]) -> np.ndarray:
        return np.vstack([hash_embed(text, self._dimension) for text in texts])
