"""
Completion parsing: the first intent name mentioned in the completion wins.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from src.constants import NONE_OPTION_NAME, OOS_LABEL


@dataclass(frozen=True)
class ParsedPrediction:
    label: str
    match_position: Optional[int] = None
    matched_name_length: Optional[int] = None

    @property
    def is_oos(self) -> bool:
        return self.label == OOS_LABEL


OOS_PREDICTION = ParsedPrediction(label=OOS_LABEL)


def parse_completion(
    completion: str,
    intent_names: Sequence[str],
    include_none_option: bool = True,
) -> ParsedPrediction:
    """
    Case-insensitive substring search over the completion.

    The name with the smallest first-occurrence position wins; equal
    positions go to the longest name. none_of_the_above competes like any
    name and maps to out-of-scope, as does a completion without any name.
    It only competes when the prompt offered it.
    """
    haystack = completion.lower()
    candidates = {name.lower(): name for name in intent_names if name}
    if include_none_option:
        candidates.setdefault(NONE_OPTION_NAME, NONE_OPTION_NAME)

    best = None
    for folded, name in candidates.items():
        position = haystack.find(folded)
        if position < 0:
            continue
        key = (position, -len(folded))
        if best is None or key < best[0]:
            best = (key, name)

    if best is None:
        return OOS_PREDICTION
    (position, negative_length), name = best
    if name == NONE_OPTION_NAME:
        return OOS_PREDICTION
    return ParsedPrediction(label=name, match_position=position, matched_name_length=-negative_length)
