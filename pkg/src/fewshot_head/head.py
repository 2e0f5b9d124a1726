"""
One-hidden-layer classifier over frozen sentence embeddings.

    probabilities = softmax(W2 . act(W1 . x + b1) + b2)

Loss is mean cross-entropy plus l2_penalty * (|W1|^2 + |W2|^2) / 2; biases
are not penalized.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.constants import OOS_LABEL

PARAMETER_NAMES = ("W1", "b1", "W2", "b2")


class HeadError(ValueError):
    """Shape, index or configuration problem with a classifier head."""


def _tanh_grad(activated: np.ndarray, pre: np.ndarray) -> np.ndarray:
    return 1.0 - activated ** 2


def _relu(pre: np.ndarray) -> np.ndarray:
    return np.maximum(pre, 0.0)


def _relu_grad(activated: np.ndarray, pre: np.ndarray) -> np.ndarray:
    return (pre > 0).astype(np.float64)


# name -> (activation, derivative given (activated, pre-activation))
ACTIVATIONS: Dict[str, Tuple[Callable, Callable]] = {
    "tanh": (np.tanh, _tanh_grad),
    "relu": (_relu, _relu_grad),
}


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 500
    seed: int = 0
    l2_penalty: float = 1e-4
    hidden_dim: int = 256
    activation: str = "tanh"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise HeadError(f"learning_rate must be positive, got {self.learning_rate}")
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise HeadError(f"epochs must be >= 1, got {self.epochs}")
        if self.l2_penalty < 0:
            raise HeadError(f"l2_penalty must be >= 0, got {self.l2_penalty}")
        if self.hidden_dim < 1:
            raise HeadError(f"hidden_dim must be >= 1, got {self.hidden_dim}")
        if self.activation not in ACTIVATIONS:
            raise HeadError(f"unknown activation {self.activation!r}")


@dataclass(frozen=True, eq=False)
class ClassifierHead:
    W1: np.ndarray  # (H, D)
    b1: np.ndarray  # (H,)
    W2: np.ndarray  # (N, H)
    b2: np.ndarray  # (N,)
    activation: str
    intent_order: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "intent_order", tuple(self.intent_order))
        for name in PARAMETER_NAMES:
            value = np.asarray(getattr(self, name), dtype=np.float64)
            if not np.all(np.isfinite(value)):
                raise HeadError(f"{name} has non-finite weights")
            object.__setattr__(self, name, value)
        if self.activation not in ACTIVATIONS:
            raise HeadError(f"unknown activation {self.activation!r}")
        if len(set(self.intent_order)) != len(self.intent_order):
            raise HeadError("intent_order has duplicates")

        hidden = self.W1.shape[0] if self.W1.ndim == 2 else -1
        classes = len(self.intent_order)
        if self.b1.shape != (hidden,) or self.W2.shape != (classes, hidden) or self.b2.shape != (classes,):
            raise HeadError(
                f"inconsistent shapes W1{self.W1.shape} b1{self.b1.shape} "
                f"W2{self.W2.shape} b2{self.b2.shape} for {classes} intents")

    @property
    def input_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W1.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.intent_order)

    def parameters(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}

    def with_parameters(self, **parameters: np.ndarray) -> "ClassifierHead":
        values = self.parameters()
        values.update(parameters)
        return ClassifierHead(activation=self.activation, intent_order=self.intent_order, **values)


@dataclass(frozen=True, eq=False)
class HeadGradients:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    def as_dict(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}


@dataclass(frozen=True, eq=False)
class PredictOutcome:
    label: str
    confidence: float
    probabilities: np.ndarray

    @property
    def is_oos(self) -> bool:
        return self.label == OOS_LABEL


def _as_matrix(head: ClassifierHead, x) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if matrix.shape[1] != head.input_dim:
        raise HeadError(f"dimension mismatch: head expects {head.input_dim}, got {matrix.shape[1]}")
    return matrix


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _forward_pass(head: ClassifierHead, X: np.ndarray):
    activate, _ = ACTIVATIONS[head.activation]
    pre = X @ head.W1.T + head.b1
    hidden = activate(pre)
    logits = hidden @ head.W2.T + head.b2
    return pre, hidden, logits


def forward_batch(head: ClassifierHead, X) -> np.ndarray:
    """Row-wise class probabilities for an (n, D) batch."""
    _, _, logits = _forward_pass(head, _as_matrix(head, X))
    return np.exp(_log_softmax(logits))


def forward(head: ClassifierHead, x) -> np.ndarray:
    return forward_batch(head, x)[0]


def loss_and_grad(
    head: ClassifierHead,
    batch: Sequence[Tuple[np.ndarray, int]],
    l2_penalty: float = 0.0,
) -> Tuple[float, HeadGradients]:
    """
    Mean cross-entropy (+ L2 on W1 and W2) and its exact gradients.

    Args:
        head: Current parameters
        batch: (embedding, intent index) pairs
        l2_penalty: Weight of the L2 term

    Raises:
        HeadError: Empty batch, dimension mismatch or index out of range
    """
    if len(batch) == 0:
        raise HeadError("batch is empty")
    X = _as_matrix(head, np.vstack([np.asarray(x, dtype=np.float64) for x, _ in batch]))
    y = np.asarray([index for _, index in batch], dtype=np.int64)
    return loss_and_grad_arrays(head, X, y, l2_penalty)


def loss_and_grad_arrays(head: ClassifierHead, X: np.ndarray, y: np.ndarray,
                         l2_penalty: float = 0.0) -> Tuple[float, HeadGradients]:
    if np.any(y < 0) or np.any(y >= head.n_classes):
        raise HeadError(f"intent index out of range [0, {head.n_classes})")
    _, derivative = ACTIVATIONS[head.activation]
    batch_size = X.shape[0]

    pre, hidden, logits = _forward_pass(head, X)
    log_probs = _log_softmax(logits)
    rows = np.arange(batch_size)
    loss = -log_probs[rows, y].mean()
    loss += 0.5 * l2_penalty * (np.sum(head.W1 ** 2) + np.sum(head.W2 ** 2))

    d_logits = np.exp(log_probs)
    d_logits[rows, y] -= 1.0
    d_logits /= batch_size

    grad_W2 = d_logits.T @ hidden + l2_penalty * head.W2
    grad_b2 = d_logits.sum(axis=0)
    d_pre = (d_logits @ head.W2) * derivative(hidden, pre)
    grad_W1 = d_pre.T @ X + l2_penalty * head.W1
    grad_b1 = d_pre.sum(axis=0)

    return float(loss), HeadGradients(W1=grad_W1, b1=grad_b1, W2=grad_W2, b2=grad_b2)


def numeric_gradients(
    head: ClassifierHead,
    batch: Sequence[Tuple[np.ndarray, int]],
    l2_penalty: float = 0.0,
    step: float = 1e-5,
) -> HeadGradients:
    """Central finite-difference gradients of the same loss, entry by entry."""
    grads = {}
    for name, value in head.parameters().items():
        grad = np.zeros_like(value)
        for index in np.ndindex(value.shape):
            bumped = value.copy()
            bumped[index] = value[index] + step
            plus, _ = loss_and_grad(head.with_parameters(**{name: bumped}), batch, l2_penalty)
            bumped[index] = value[index] - step
            minus, _ = loss_and_grad(head.with_parameters(**{name: bumped}), batch, l2_penalty)
            grad[index] = (plus - minus) / (2.0 * step)
        grads[name] = grad
    return HeadGradients(**grads)


def max_relative_error(analytic: HeadGradients, numeric: HeadGradients, floor: float = 1e-6) -> float:
    """max |a - n| / max(|a|, |n|, floor) over every parameter entry."""
    worst = 0.0
    for name in PARAMETER_NAMES:
        a = getattr(analytic, name)
        n = getattr(numeric, name)
        scale = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / scale)))
    return worst


def _outcome(head: ClassifierHead, probabilities: np.ndarray, threshold: float) -> PredictOutcome:
    # argmax keeps the first maximum, i.e. the earliest intent in intent_order
    best = int(np.argmax(probabilities))
    confidence = float(probabilities[best])
    label = head.intent_order[best] if confidence >= threshold else OOS_LABEL
    return PredictOutcome(label=label, confidence=confidence, probabilities=probabilities)


def predict(head: ClassifierHead, x, threshold: float = 0.0) -> PredictOutcome:
    """Argmax intent, or OOS when the top probability is below threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise HeadError(f"threshold must be in [0, 1], got {threshold}")
    return _outcome(head, forward(head, x), threshold)


def predict_batch(head: ClassifierHead, X, threshold: float = 0.0) -> List[PredictOutcome]:
    if not 0.0 <= threshold <= 1.0:
        raise HeadError(f"threshold must be in [0, 1], got {threshold}")
    return [_outcome(head, row, threshold) for row in forward_batch(head, X)]


def ranked_intents(head: ClassifierHead, probabilities: np.ndarray) -> List[str]:
    """Intents by descending probability; ties keep intent_order."""
    order = sorted(range(head.n_classes), key=lambda i: (-probabilities[i], i))
    return [head.intent_order[i] for i in order]
