"""
Zero-shot prompt built from intent names and descriptions only.
"""

from typing import Sequence

from src.constants import NONE_OPTION_DESCRIPTION, NONE_OPTION_NAME
from src.corpus.models import IntentSpec

ZERO_SHOT_HEADER = "The given sentence needs to be mapped to exactly one of the intents described below:"


def build_zero_shot_prompt(intents: Sequence[IntentSpec], utterance: str, include_none_option: bool = True) -> str:
    """
    Render the zero-shot classification prompt.

    Layout: header, blank line, one `name: description` line per intent in
    the given order, the none_of_the_above line when requested, blank line,
    `Sentence: <utterance>`, `Intent:`.
    """
    if not intents:
        raise ValueError("at least one intent is required")
    if not utterance:
        raise ValueError("utterance must be non-empty")
    if include_none_option and any(i.name.lower() == NONE_OPTION_NAME for i in intents):
        raise ValueError(f"intent {NONE_OPTION_NAME} clashes with the none option")

    lines = [f"{intent.name}: {intent.description}" for intent in intents]
    if include_none_option:
        lines.append(f"{NONE_OPTION_NAME}: {NONE_OPTION_DESCRIPTION}")
    return f"{ZERO_SHOT_HEADER}\n\n" + "\n".join(lines) + f"\n\nSentence: {utterance}\nIntent:"
