# Embedding providers and vector utilities
from src.embedding.hash_embedder import hash_embed
from src.embedding.providers import EmbeddingProvider, HashEmbeddingProvider
from src.embedding.vectors import EmbeddingError, centroid, cosine_similarity, normalize

__all__ = [
    "EmbeddingError",
    "EmbeddingProvider",
    "HashEmbeddingProvider",
    "centroid",
    "cosine_similarity",
    "hash_embed",
    "normalize",
]
