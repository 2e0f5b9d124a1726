"""
Rank classification over intent names with the zero-shot prompt.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from src.corpus.models import IntentSpec
from src.corpus.sampling import fisher_yates_prefix, seeded_generator
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.pool import map_bounded
from src.tfew_scoring.losses import CandidateScore, TFewLossBundle, length_normalized_loss, loss_bundle
from src.zeroshot.prompt import build_zero_shot_prompt

DEFAULT_PROMPT_INTENT_LIMIT = 15


@dataclass(frozen=True)
class ScoringRecord:
    text: str
    gold: Optional[str]
    candidates: List[CandidateScore]
    predicted: str
    ln_loss_of_gold: Optional[float]

    @property
    def ranking(self) -> List[str]:
        return [c.label for c in sorted(self.candidates, key=lambda c: (-c.mean_logprob, c.label))]

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "candidates": [c.to_dict() for c in self.candidates],
            "predicted": self.predicted,
            "ln_loss_of_gold": self.ln_loss_of_gold,
        }


def score_candidates(
    prompt: str,
    intents: Sequence[IntentSpec],
    scoring_provider: CompletionProvider,
    max_workers: int = 1,
) -> List[CandidateScore]:
    """Score every intent name as the target continuing the prompt, in intent order."""
    if not intents:
        raise ValueError("at least one intent is required")
    names = [intent.name for intent in intents]
    logprobs = map_bounded(lambda name: scoring_provider.score_target(prompt, name), names,
                           max_workers=max_workers)
    return [CandidateScore.from_logprobs(name, lp) for name, lp in zip(names, logprobs)]


def best_candidate(candidates: Sequence[CandidateScore]) -> CandidateScore:
    """Highest mean logprob; ties go to the smaller intent name."""
    return min(candidates, key=lambda c: (-c.mean_logprob, c.label))


def rank_classify(prompt: str, intents: Sequence[IntentSpec], scoring_provider: CompletionProvider) -> str:
    """
    Raises:
        ScoringUnsupportedError: The provider cannot score targets
    """
    return best_candidate(score_candidates(prompt, intents, scoring_provider)).label


def rank_utterance(
    utterance: str,
    intents: Sequence[IntentSpec],
    scoring_provider: CompletionProvider,
    gold: Optional[str] = None,
    include_none_option: bool = True,
    max_workers: int = 1,
) -> ScoringRecord:
    """Build the zero-shot prompt for an utterance and rank all intents."""
    prompt = build_zero_shot_prompt(intents, utterance, include_none_option)
    candidates = score_candidates(prompt, intents, scoring_provider, max_workers=max_workers)
    ln_gold = None
    for candidate in candidates:
        if candidate.label == gold:
            ln_gold = length_normalized_loss(candidate.logprobs, [c.logprobs for c in candidates])
    return ScoringRecord(
        text=utterance,
        gold=gold,
        candidates=candidates,
        predicted=best_candidate(candidates).label,
        ln_loss_of_gold=ln_gold,
    )


def cap_prompt_intents(
    intents: Sequence[IntentSpec],
    limit: int = DEFAULT_PROMPT_INTENT_LIMIT,
    gold: Optional[str] = None,
    seed: int = 0,
) -> List[IntentSpec]:
    """
    Keep at most `limit` intents for a training prompt.

    The gold intent always stays; the rest is a seeded random subset. The
    original order is preserved.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    intents = list(intents)
    if len(intents) <= limit:
        return intents

    keep = set()
    if gold is not None and any(i.name == gold for i in intents):
        keep.add(gold)
    others = [i.name for i in intents if i.name not in keep]
    rng = seeded_generator(seed, "prompt-intents", gold or "")
    keep.update(fisher_yates_prefix(others, limit - len(keep), rng))
    return [intent for intent in intents if intent.name in keep]


def training_loss(
    utterance: str,
    gold: str,
    intents: Sequence[IntentSpec],
    scoring_provider: CompletionProvider,
    limit: int = DEFAULT_PROMPT_INTENT_LIMIT,
    seed: int = 0,
    max_workers: int = 1,
) -> TFewLossBundle:
    """
    The three-loss bundle for one training example.

    The prompt lists a capped intent subset that always contains the gold
    intent; the other prompted intents are the incorrect candidates.
    """
    prompted = cap_prompt_intents(intents, limit, gold=gold, seed=seed)
    if gold not in {i.name for i in prompted}:
        raise ValueError(f"gold intent {gold!r} is not among the intents")
    prompt = build_zero_shot_prompt(prompted, utterance)
    candidates = score_candidates(prompt, prompted, scoring_provider, max_workers=max_workers)
    correct = next(c.logprobs for c in candidates if c.label == gold)
    incorrect = [c.logprobs for c in candidates if c.label != gold]
    return loss_bundle(correct, incorrect)
