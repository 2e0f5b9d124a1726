"""
Vector utilities over unit-norm embeddings.
"""

from typing import Sequence

import numpy as np

NORM_TOLERANCE = 1e-6


class EmbeddingError(ValueError):
    """Dimension mismatch or malformed vector."""


def basis_vector(dimension: int) -> np.ndarray:
    """The fixed fallback vector e_0."""
    vector = np.zeros(dimension, dtype=np.float64)
    vector[0] = 1.0
    return vector


def normalize(vector: np.ndarray) -> np.ndarray:
    """Scale to unit L2 norm; a zero vector becomes e_0."""
    vector = np.asarray(vector, dtype=np.float64)
    if not np.all(np.isfinite(vector)):
        raise EmbeddingError("vector has non-finite components")
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        return basis_vector(vector.shape[0])
    return vector / norm


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    return np.vstack([normalize(row) for row in matrix]) if len(matrix) else np.asarray(matrix)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """
    Cosine of the angle between a and b, clipped to [-1, 1].

    Raises:
        EmbeddingError: If the dimensions differ
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise EmbeddingError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    denominator = np.linalg.norm(a) * np.linalg.norm(b)
    if denominator == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / denominator, -1.0, 1.0))


def centroid(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Mean of the vectors, re-normalized. A zero mean maps to e_0."""
    if len(vectors) == 0:
        raise EmbeddingError("centroid of an empty list")
    arrays = [np.asarray(v, dtype=np.float64) for v in vectors]
    dimensions = sorted({a.shape for a in arrays})
    if len(dimensions) > 1:
        raise EmbeddingError(f"dimension mismatch in centroid: {dimensions}")
    stacked = np.vstack(arrays)
    mean = stacked.mean(axis=0)
    if np.linalg.norm(mean) < NORM_TOLERANCE:
        return basis_vector(stacked.shape[1])
    return normalize(mean)
