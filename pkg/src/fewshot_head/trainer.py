"""
Full-batch gradient descent for the classifier head.
"""

from typing import Sequence

import numpy as np

from src.constants import Status
from src.corpus.models import FewShotSample, LabeledUtterance
from src.corpus.sampling import seeded_generator
from src.embedding.providers import EmbeddingProvider
from src.fewshot_head.head import ClassifierHead, HeadError, TrainConfig, loss_and_grad_arrays
from src.logging_config import BenchLogger


class HeadTrainingError(RuntimeError):
    """Training could not complete (provider failure, divergence)."""


def init_head(input_dim: int, intent_order: Sequence[str], config: TrainConfig) -> ClassifierHead:
    """Weights uniform in +-1/sqrt(fan_in) from the seeded generator, biases zero."""
    rng = seeded_generator(config.seed, "classifier-head")
    hidden = config.hidden_dim
    classes = len(intent_order)
    bound1 = 1.0 / np.sqrt(input_dim)
    bound2 = 1.0 / np.sqrt(hidden)
    return ClassifierHead(
        W1=rng.uniform(-bound1, bound1, size=(hidden, input_dim)),
        b1=np.zeros(hidden),
        W2=rng.uniform(-bound2, bound2, size=(classes, hidden)),
        b2=np.zeros(classes),
        activation=config.activation,
        intent_order=tuple(intent_order),
    )


def embed_utterances(utterances: Sequence[LabeledUtterance], provider: EmbeddingProvider) -> np.ndarray:
    texts = [u.text for u in utterances]
    try:
        vectors = provider.embed_batch(texts)
    except Exception as e:
        raise HeadTrainingError(
            f"embedding provider {provider.provider_id} failed on {len(texts)} training utterances: {e}"
        ) from e
    if vectors.shape != (len(texts), provider.dimension):
        raise HeadTrainingError(
            f"embedding provider returned shape {vectors.shape}, expected ({len(texts)}, {provider.dimension})")
    return vectors


def train_on_utterances(
    utterances: Sequence[LabeledUtterance],
    intent_order: Sequence[str],
    provider: EmbeddingProvider,
    config: TrainConfig,
) -> ClassifierHead:
    """
    Train a head on labeled utterances.

    The encoder is frozen: every utterance is embedded exactly once.

    Args:
        utterances: Training examples; labels must appear in intent_order
        intent_order: Output classes in order
        provider: Frozen sentence encoder
        config: Optimizer settings

    Returns:
        Trained ClassifierHead
    """
    logger = BenchLogger.get_instance()
    if not utterances:
        raise HeadTrainingError("no training utterances")
    index = {name: i for i, name in enumerate(intent_order)}
    try:
        y = np.asarray([index[u.label] for u in utterances], dtype=np.int64)
    except KeyError as e:
        raise HeadTrainingError(f"training label {e.args[0]!r} is not in intent_order") from None

    X = embed_utterances(utterances, provider)
    head = init_head(X.shape[1], intent_order, config)

    logger.log_info(
        message=f"Training head on {len(utterances)} utterances, {len(intent_order)} intents, "
                f"{config.epochs} epochs",
        status=Status.Running,
        correlation_id=config.seed,
        source="FewShotHead"
    )

    loss = float("nan")
    for epoch in range(config.epochs):
        loss, grads = loss_and_grad_arrays(head, X, y, config.l2_penalty)
        step = grads.as_dict()
        try:
            head = head.with_parameters(**{
                name: value - config.learning_rate * step[name]
                for name, value in head.parameters().items()
            })
        except HeadError as e:
            raise HeadTrainingError(f"training diverged at epoch {epoch}: {e}") from e
        if (epoch + 1) % 100 == 0:
            logger.log_debug(
                message=f"epoch {epoch + 1} loss {loss:.6f}",
                correlation_id=config.seed,
                source="FewShotHead"
            )

    logger.log_info(
        message=f"Head trained, final loss {loss:.6f}",
        status=Status.Completed,
        correlation_id=config.seed,
        source="FewShotHead"
    )
    return head


def train_head(sample: FewShotSample, provider: EmbeddingProvider, config: TrainConfig) -> ClassifierHead:
    """Train on a few-shot sample; output classes follow the sample's intent order."""
    return train_on_utterances(sample.utterances(), sample.intent_names, provider, config)
