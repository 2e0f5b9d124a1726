"""
Losses of the T-Few recipe over token log-probabilities.

lm                 -(1/T) sum_t log p_t of the correct target
unlikelihood       -(sum over incorrect candidates and tokens of log(1 - p)) / total tokens
length_normalized  -log softmax(beta)_correct, beta_c = mean token logprob of candidate c
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.llm_gateway.models import TokenLogProbs

# exp(logprob) is capped here before log(1 - p)
UNLIKELIHOOD_PROBABILITY_CAP = 1.0 - 1e-7


@dataclass(frozen=True)
class CandidateScore:
    label: str
    logprobs: TokenLogProbs
    mean_logprob: float
    lm_loss: float

    @classmethod
    def from_logprobs(cls, label: str, logprobs: TokenLogProbs) -> "CandidateScore":
        return cls(label=label, logprobs=logprobs, mean_logprob=logprobs.mean, lm_loss=lm_loss(logprobs))

    def to_dict(self) -> dict:
        return {"label": self.label, "mean_logprob": self.mean_logprob, "lm_loss": self.lm_loss}


@dataclass(frozen=True)
class TFewLossBundle:
    lm: float
    unlikelihood: float
    length_normalized: float

    @property
    def total(self) -> float:
        return self.lm + self.unlikelihood + self.length_normalized

    def to_dict(self) -> dict:
        return {
            "lm": self.lm,
            "unlikelihood": self.unlikelihood,
            "length_normalized": self.length_normalized,
            "total": self.total,
        }


def lm_loss(correct: TokenLogProbs) -> float:
    if not correct.logprobs:
        raise ValueError("lm_loss needs at least one token")
    return -math.fsum(correct.logprobs) / len(correct.logprobs)


def unlikelihood_loss(incorrect: Sequence[TokenLogProbs]) -> float:
    token_total = sum(len(candidate.logprobs) for candidate in incorrect)
    if token_total == 0:
        return 0.0
    values = np.concatenate([np.asarray(c.logprobs, dtype=np.float64) for c in incorrect if c.logprobs])
    probabilities = np.minimum(np.exp(values), UNLIKELIHOOD_PROBABILITY_CAP)
    return float(-np.sum(np.log1p(-probabilities)) / token_total)


def candidate_softmax(all_candidates: Sequence[TokenLogProbs]) -> np.ndarray:
    """Softmax over the candidates' mean token logprobs."""
    betas = np.asarray([c.mean for c in all_candidates], dtype=np.float64)
    return np.exp(betas - np.logaddexp.reduce(betas))


def length_normalized_loss(correct: TokenLogProbs, all_candidates: Sequence[TokenLogProbs]) -> float:
    """
    Raises:
        ValueError: `correct` is not one of the candidates (by identity)
    """
    if not any(candidate is correct for candidate in all_candidates):
        raise ValueError("correct target is not among the candidates")
    betas = np.asarray([c.mean for c in all_candidates], dtype=np.float64)
    return float(np.logaddexp.reduce(betas) - correct.mean)


def loss_bundle(correct: TokenLogProbs, incorrect: Sequence[TokenLogProbs]) -> TFewLossBundle:
    """All three losses for one training example."""
    candidates = [correct, *incorrect]
    return TFewLossBundle(
        lm=lm_loss(correct),
        unlikelihood=unlikelihood_loss(incorrect),
        length_normalized=length_normalized_loss(correct, candidates),
    )
