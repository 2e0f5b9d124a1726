"""
Dataset model for intent classification corpora.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.constants import NONE_OPTION_NAME, OOS_LABEL


class DatasetError(ValueError):
    """Invalid dataset content. Carries the offending file and line when known."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


def validate_intent_name(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise DatasetError("intent name must be a non-empty string")
    if name != name.strip():
        raise DatasetError(f"intent name {name!r} has leading or trailing whitespace")
    if "\n" in name or "\r" in name:
        raise DatasetError(f"intent name {name!r} contains a newline")
    if name.lower() == NONE_OPTION_NAME:
        raise DatasetError(f"intent name {NONE_OPTION_NAME} is reserved")
    if name == OOS_LABEL:
        raise DatasetError(f"intent name {OOS_LABEL} is reserved")
    return name


@dataclass(frozen=True)
class IntentSpec:
    """An intent name plus the human-written description used in prompts."""
    name: str
    description: str

    def __post_init__(self):
        validate_intent_name(self.name)
        if not isinstance(self.description, str):
            raise DatasetError(f"description of {self.name} must be a string")


@dataclass(frozen=True)
class LabeledUtterance:
    text: str
    label: str

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise DatasetError("utterance text must be non-empty")
        if not isinstance(self.label, str) or not self.label:
            raise DatasetError("utterance label must be non-empty")

    @property
    def is_oos(self) -> bool:
        return self.label == OOS_LABEL


@dataclass(frozen=True)
class Dataset:
    """
    Immutable intent classification dataset.

    `has_oos` is derived from the test split; every non-OOS label resolves to
    exactly one intent.
    """
    name: str
    intents: Tuple[IntentSpec, ...]
    train: Tuple[LabeledUtterance, ...]
    test: Tuple[LabeledUtterance, ...]
    _by_name: Dict[str, IntentSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "intents", tuple(self.intents))
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))

        if not self.intents:
            raise DatasetError(f"dataset {self.name} has no intents")

        by_name: Dict[str, IntentSpec] = {}
        seen_folded: Dict[str, str] = {}
        for intent in self.intents:
            folded = intent.name.lower()
            if folded in seen_folded:
                raise DatasetError(
                    f"duplicate intent name {intent.name!r} (clashes with {seen_folded[folded]!r})")
            seen_folded[folded] = intent.name
            by_name[intent.name] = intent
        object.__setattr__(self, "_by_name", by_name)

        for position, utterance in enumerate(self.train, start=1):
            if utterance.is_oos:
                raise DatasetError(f"train utterance {position} carries the OOS marker")
            if utterance.label not in by_name:
                raise DatasetError(f"train label {utterance.label!r} is not a known intent")
        for position, utterance in enumerate(self.test, start=1):
            if not utterance.is_oos and utterance.label not in by_name:
                raise DatasetError(f"test label {utterance.label!r} is not a known intent")

    @property
    def has_oos(self) -> bool:
        return any(u.is_oos for u in self.test)

    @property
    def intent_names(self) -> List[str]:
        return [intent.name for intent in self.intents]

    def intent(self, name: str) -> IntentSpec:
        """Look up an intent by exact name."""
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown intent {name!r}") from None

    def train_for(self, name: str) -> List[LabeledUtterance]:
        """Train utterances of one intent, in record order."""
        return [u for u in self.train if u.label == name]


@dataclass(frozen=True)
class FewShotSample:
    """K utterances per intent drawn from the train split."""
    k: int
    seed: int
    examples: Dict[str, Tuple[LabeledUtterance, ...]]

    @property
    def intent_names(self) -> List[str]:
        return list(self.examples.keys())

    def utterances(self) -> List[LabeledUtterance]:
        """All sampled utterances, intent by intent."""
        return [u for group in self.examples.values() for u in group]

    def __len__(self) -> int:
        return sum(len(group) for group in self.examples.values())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "examples": {name: [u.text for u in group] for name, group in self.examples.items()},
        }

    @classmethod
    def from_dict(cls, document: dict) -> "FewShotSample":
        examples = {
            name: tuple(LabeledUtterance(text=text, label=name) for text in texts)
            for name, texts in document["examples"].items()
        }
        return cls(k=int(document["k"]), seed=int(document["seed"]), examples=examples)


@dataclass(frozen=True)
class DatasetStats:
    name: str
    n_intents: int
    n_train: int
    n_test: int
    n_oos: int
    train_per_intent: Dict[str, int]
    test_per_intent: Dict[str, int]

    def to_dict(self) -> dict:
        return {
            "dataset": self.name,
            "intents": self.n_intents,
            "train": self.n_train,
            "test": self.n_test,
            "oos": self.n_oos,
            "train_per_intent": dict(self.train_per_intent),
            "test_per_intent": dict(self.test_per_intent),
        }
