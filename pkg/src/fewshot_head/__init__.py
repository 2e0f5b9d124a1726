# Trainable dense head over frozen embeddings
from src.fewshot_head.head import (
    ClassifierHead,
    HeadError,
    HeadGradients,
    PredictOutcome,
    TrainConfig,
    forward,
    forward_batch,
    loss_and_grad,
    max_relative_error,
    numeric_gradients,
    predict,
    predict_batch,
    ranked_intents,
)
from src.fewshot_head.serialization import head_from_dict, head_to_dict, load_head, save_head
from src.fewshot_head.trainer import HeadTrainingError, init_head, train_head, train_on_utterances

__all__ = [
    "ClassifierHead",
    "HeadError",
    "HeadGradients",
    "HeadTrainingError",
    "PredictOutcome",
    "TrainConfig",
    "forward",
    "forward_batch",
    "head_from_dict",
    "head_to_dict",
    "init_head",
    "load_head",
    "loss_and_grad",
    "max_relative_error",
    "numeric_gradients",
    "predict",
    "predict_batch",
    "ranked_intents",
    "save_head",
    "train_head",
    "train_on_utterances",
]
