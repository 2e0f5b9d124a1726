"""
Intent filtering by sentence similarity.

An intent's score is the max cosine similarity between the utterance and
any of its few-shot examples; ties go to the alphabetically smaller name.
"""

from typing import List, Tuple

import numpy as np

from src.corpus.models import FewShotSample
from src.embedding.providers import EmbeddingProvider


class IntentIndex:
    """Few-shot example embeddings, computed once and reused per utterance."""

    def __init__(self, names: List[str], owners: np.ndarray, vectors: np.ndarray, provider: EmbeddingProvider):
        self._names = names
        self._owners = owners
        self._vectors = vectors
        self._provider = provider

    @classmethod
    def build(cls, fewshot: FewShotSample, provider: EmbeddingProvider) -> "IntentIndex":
        names = fewshot.intent_names
        empty = [name for name in names if not fewshot.examples[name]]
        if empty:
            raise ValueError(f"intents without examples cannot be filtered: {', '.join(empty)}")
        texts, owners = [], []
        for position, name in enumerate(names):
            for utterance in fewshot.examples[name]:
                texts.append(utterance.text)
                owners.append(position)
        vectors = provider.embed_batch(texts)
        return cls(names, np.asarray(owners, dtype=np.int64), vectors, provider)

    @property
    def intent_names(self) -> List[str]:
        return list(self._names)

    def scores(self, utterance: str) -> np.ndarray:
        """Max-similarity score per intent, in index order."""
        query = self._provider.embed(utterance)
        similarities = self._vectors @ query
        best = np.full(len(self._names), -np.inf)
        np.maximum.at(best, self._owners, similarities)
        return best

    def rank(self, utterance: str) -> List[Tuple[str, float]]:
        """All intents with scores, best first."""
        scores = self.scores(utterance)
        ranked = sorted(zip(self._names, scores.tolist()), key=lambda item: (-item[1], item[0]))
        return ranked

    def top(self, utterance: str, k: int) -> List[str]:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        return [name for name, _ in self.rank(utterance)[:k]]


def filter_intents(utterance: str, fewshot: FewShotSample, provider: EmbeddingProvider, k: int) -> List[str]:
    """Top-k intent names for the utterance by max example similarity."""
    return IntentIndex.build(fewshot, provider).top(utterance, k)
