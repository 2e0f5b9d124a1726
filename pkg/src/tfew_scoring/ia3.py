import numpy as np


def ia3_init(size: int) -> np.ndarray:
    """IA3 scales start at one, i.e. the identity rescaling."""
    return np.ones(size, dtype=np.float64)


def ia3_apply(activations, scales) -> np.ndarray:
    """Elementwise rescaling of activations by learned scales."""
    activations = np.asarray(activations, dtype=np.float64)
    scales = np.asarray(scales, dtype=np.float64)
    if activations.shape != scales.shape:
        raise ValueError(f"length mismatch: {activations.shape} vs {scales.shape}")
    return activations * scales
