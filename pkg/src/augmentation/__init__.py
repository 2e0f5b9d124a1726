# Prompt-based training data generation
from src.augmentation.augmenter import (
    Approach,
    AugConfig,
    AugmentationResult,
    GeneratedUtterance,
    SeedSet,
    augment_dataset,
)
from src.augmentation.parser import parse_generated
from src.augmentation.prompts import build_description_aug_prompt, build_paraphrase_prompt

__all__ = [
    "Approach",
    "AugConfig",
    "AugmentationResult",
    "GeneratedUtterance",
    "SeedSet",
    "augment_dataset",
    "build_description_aug_prompt",
    "build_paraphrase_prompt",
    "parse_generated",
]
