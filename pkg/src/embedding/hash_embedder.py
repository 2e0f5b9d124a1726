"""
Deterministic hash embedder used as the mock provider.

Character trigrams of the stripped, lowercased text are hashed with keyed
blake2b (64-bit digest, salt HASH_SALT). The digest modulo D picks the bucket
and its top bit picks the sign. The bucket counts are L2-normalized.
"""

import hashlib
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from src.embedding.vectors import basis_vector

HASH_SALT = b"intent-bench-v1"
MIN_DIMENSION = 8


@lru_cache(maxsize=65536)
def _gram_hash(gram: str) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, salt=HASH_SALT).digest()
    return int.from_bytes(digest, "little")


def char_trigrams(text: str) -> List[str]:
    text = text.strip().lower()
    if len(text) < 3:
        return [text] if text else []
    return [text[i:i + 3] for i in range(len(text) - 2)]


def _bucket(gram: str, dimension: int) -> Tuple[int, float]:
    value = _gram_hash(gram)
    sign = -1.0 if value >> 63 else 1.0
    return value % dimension, sign


def hash_embed(text: str, dimension: int) -> np.ndarray:
    """Unit-norm signed trigram hash embedding. Blank text maps to e_0."""
    if dimension < MIN_DIMENSION:
        raise ValueError(f"dimension must be >= {MIN_DIMENSION}, got {dimension}")

    vector = np.zeros(dimension, dtype=np.float64)
    for gram in char_trigrams(text):
        index, sign = _bucket(gram, dimension)
        vector[index] += sign

    norm = np.linalg.norm(vector)
    if norm == 0.0:
        return basis_vector(dimension)
    return vector / norm
