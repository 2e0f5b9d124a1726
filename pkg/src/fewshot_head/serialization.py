"""
Head JSON documents: dimensions, intent order, activation and row-major weights.
"""

import json
from typing import Any, Dict

import numpy as np

from src.fewshot_head.head import ClassifierHead, HeadError


def head_to_dict(head: ClassifierHead) -> Dict[str, Any]:
    return {
        "input_dim": head.input_dim,
        "hidden_dim": head.hidden_dim,
        "n_classes": head.n_classes,
        "activation": head.activation,
        "intent_order": list(head.intent_order),
        "W1": head.W1.tolist(),
        "b1": head.b1.tolist(),
        "W2": head.W2.tolist(),
        "b2": head.b2.tolist(),
    }


def head_from_dict(document: Dict[str, Any]) -> ClassifierHead:
    try:
        D = int(document["input_dim"])
        H = int(document["hidden_dim"])
        N = int(document["n_classes"])
        expected = {"W1": (H, D), "b1": (H,), "W2": (N, H), "b2": (N,)}
        arrays = {}
        for name, shape in expected.items():
            value = np.asarray(document[name], dtype=np.float64)
            if value.shape != shape:
                raise HeadError(f"{name} has shape {value.shape}, expected {shape}")
            arrays[name] = value
        intent_order = document["intent_order"]
        if len(intent_order) != N:
            raise HeadError(f"intent_order has {len(intent_order)} names, expected {N}")
        return ClassifierHead(activation=document["activation"], intent_order=intent_order, **arrays)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, HeadError):
            raise
        raise HeadError(f"invalid head document: {e}") from e


def save_head(head: ClassifierHead, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(head_to_dict(head), f)
        f.write("\n")


def load_head(path: str) -> ClassifierHead:
    with open(path, "r", encoding="utf-8") as f:
        return head_from_dict(json.load(f))
