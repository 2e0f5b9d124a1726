"""
Prompts for generating labeled training utterances.
"""

from typing import Sequence

from src.corpus.models import IntentSpec


def build_paraphrase_prompt(seed_utterances: Sequence[str], n: int) -> str:
    """Ask for n paraphrases of the seed utterances, kept verbatim and in order."""
    if not seed_utterances:
        raise ValueError("at least one seed utterance is required")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lines = [
        "Task: Create diverse utterances",
        "by paraphrasing the following utterances:",
        *seed_utterances,
        f"Create {n} utterances:",
    ]
    return "\n".join(lines)


def build_description_aug_prompt(all_intents: Sequence[IntentSpec], target: str, n: int) -> str:
    """Describe every intent, then ask for n utterances of the target intent."""
    if target not in {intent.name for intent in all_intents}:
        raise ValueError(f"target intent {target!r} is not among the intents")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lines = [
        "A virtual assistant serves multiple intents.",
        "Below are the description of the intents:",
        *(f"{intent.name}: {intent.description}" for intent in all_intents),
        f"Generate {n} utterances for {target} intent:",
    ]
    return "\n".join(lines)
