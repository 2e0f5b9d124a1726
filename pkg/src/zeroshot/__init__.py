# Description-prompted zero-shot classification
from src.zeroshot.classifier import (
    ClassificationError,
    ZeroShotConfig,
    ZeroShotRecord,
    classify_batch,
    classify_zero_shot,
    run_zero_shot,
)
from src.zeroshot.filtering import IntentIndex, filter_intents
from src.zeroshot.parser import ParsedPrediction, parse_completion
from src.zeroshot.prompt import ZERO_SHOT_HEADER, build_zero_shot_prompt

__all__ = [
    "ClassificationError",
    "IntentIndex",
    "ParsedPrediction",
    "ZERO_SHOT_HEADER",
    "ZeroShotConfig",
    "ZeroShotRecord",
    "build_zero_shot_prompt",
    "classify_batch",
    "classify_zero_shot",
    "filter_intents",
    "parse_completion",
    "run_zero_shot",
]
