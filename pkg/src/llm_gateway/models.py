"""
Request/response types and generation presets.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

# Cap used where the augmentation preset means "unlimited".
UNLIMITED_TOKENS_CAP = 512


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    temperature: float = 0.0
    top_p: float = 1.0
    max_tokens: Optional[int] = None
    stop_sequences: Tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.prompt, str) or not self.prompt:
            raise ValueError("prompt must be a non-empty string")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.max_tokens is not None and self.max_tokens < 1:
            raise ValueError(f"max_tokens must be positive or None, got {self.max_tokens}")
        object.__setattr__(self, "stop_sequences", tuple(self.stop_sequences))


@dataclass(frozen=True)
class CompletionResult:
    text: str
    provider_id: str
    latency_s: float = 0.0


@dataclass(frozen=True)
class TokenLogProbs:
    """Per-token log-probabilities of a target string."""
    target: str
    logprobs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "logprobs", tuple(float(v) for v in self.logprobs))
        for value in self.logprobs:
            if not math.isfinite(value) or value > 0:
                raise ValueError(f"log-probability {value} is not finite and <= 0")
        if self.target and not self.logprobs:
            raise ValueError(f"no log-probabilities for target {self.target!r}")

    @property
    def token_count(self) -> int:
        return len(self.logprobs)

    @property
    def mean(self) -> float:
        return math.fsum(self.logprobs) / len(self.logprobs)


@dataclass(frozen=True)
class GenerationParams:
    temperature: float
    top_p: float
    max_tokens: Optional[int]
    stop_sequences: Tuple[str, ...] = field(default_factory=tuple)

    def request(self, prompt: str) -> CompletionRequest:
        return CompletionRequest(
            prompt=prompt,
            temperature=self.temperature,
            top_p=self.top_p,
            max_tokens=self.max_tokens,
            stop_sequences=self.stop_sequences,
        )

    def with_overrides(self, overrides: Optional[dict]) -> "GenerationParams":
        """Apply a config section such as {"temperature": 0.7}."""
        if not overrides:
            return self
        known = {k: v for k, v in overrides.items()
                 if k in ("temperature", "top_p", "max_tokens", "stop_sequences")}
        if "stop_sequences" in known:
            known["stop_sequences"] = tuple(known["stop_sequences"])
        updated = replace(self, **known)
        # Validates the values
        updated.request("x")
        return updated

    def to_dict(self) -> dict:
        return {
            "temperature": self.temperature,
            "top_p": self.top_p,
            "max_tokens": self.max_tokens,
            "stop_sequences": list(self.stop_sequences),
        }


def zero_shot_preset() -> GenerationParams:
    """Greedy decoding, 20 new tokens."""
    return GenerationParams(temperature=0.0, top_p=1.0, max_tokens=20)


def augmentation_preset() -> GenerationParams:
    """High-temperature sampling for diverse generations."""
    return GenerationParams(temperature=0.9, top_p=0.95, max_tokens=UNLIMITED_TOKENS_CAP)
