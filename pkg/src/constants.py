"""
Shared constants for the intent benchmark.
"""

from enum import Enum


class Status(str, Enum):
    """Run status attached to every log record."""
    Running = "Running"
    Completed = "Completed"
    Failed = "Failed"


# Marker for out-of-scope labels, in files and in memory.
OOS_LABEL = "__oos__"

# Label offered to the model in zero-shot prompts. Never a valid intent name.
NONE_OPTION_NAME = "none_of_the_above"
NONE_OPTION_DESCRIPTION = "if the user sentence is not about any of the intents above"

METHODS = (
    "fewshot",
    "zeroshot",
    "zeroshot_filtered",
    "augment_paraphrase",
    "augment_description",
    "rank_classify",
)
