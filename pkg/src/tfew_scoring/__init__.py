# T-Few scoring math: losses, rank classification, IA3 rescaling
from src.tfew_scoring.ia3 import ia3_apply, ia3_init
from src.tfew_scoring.losses import (
    CandidateScore,
    TFewLossBundle,
    candidate_softmax,
    length_normalized_loss,
    lm_loss,
    loss_bundle,
    unlikelihood_loss,
)
from src.tfew_scoring.rank import (
    ScoringRecord,
    cap_prompt_intents,
    rank_classify,
    rank_utterance,
    score_candidates,
    training_loss,
)

__all__ = [
    "CandidateScore",
    "ScoringRecord",
    "TFewLossBundle",
    "candidate_softmax",
    "cap_prompt_intents",
    "ia3_apply",
    "ia3_init",
    "length_normalized_loss",
    "lm_loss",
    "loss_bundle",
    "rank_classify",
    "rank_utterance",
    "score_candidates",
    "training_loss",
    "unlikelihood_loss",
]
