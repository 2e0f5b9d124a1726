"""
Deterministic mock providers for hermetic runs.

ScriptedCompletionProvider  canned answers keyed by exact prompt or regex.
HashScoringProvider         pseudo-logprobs from a hash of (prompt, token).
OracleCompletionProvider    built from a Dataset; knows the gold label of every
                            utterance and answers zero-shot, augmentation and
                            scoring requests accordingly.
"""

import hashlib
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.constants import NONE_OPTION_NAME
from src.corpus.models import Dataset
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.models import CompletionRequest

LOGPROB_FLOOR = -5.0
LOGPROB_CEILING = -0.05

_TOKEN_PATTERN = re.compile(r"[A-Za-z0-9]+|[^A-Za-z0-9\s]")
_SENTENCE_PATTERN = re.compile(r"\n\nSentence: (.*)\nIntent:$", re.S)
_DESCRIPTION_AUG_PATTERN = re.compile(r"\nGenerate (\d+) utterances for (.+) intent:$")
_PARAPHRASE_PATTERN = re.compile(
    r"by paraphrasing the following utterances:\n(.*)\nCreate (\d+) utterances:$", re.S)

PARAPHRASE_TEMPLATES = (
    "{seed}",
    "please {seed}",
    "could you {seed}",
    "{seed} now",
    "i want to {seed}",
    "{seed} please",
    "can you {seed} for me",
    "hey {seed}",
)


def tokenize_target(target: str) -> List[str]:
    """Mock tokenization: alphanumeric runs and single punctuation marks."""
    tokens = _TOKEN_PATTERN.findall(target)
    return tokens or [target]


def pseudo_logprob(prompt: str, token: str) -> float:
    """Map blake2b(prompt, token) uniformly into [LOGPROB_FLOOR, LOGPROB_CEILING]."""
    digest = hashlib.blake2b(f"{prompt}\x00{token}".encode("utf-8"), digest_size=8).digest()
    fraction = int.from_bytes(digest, "little") / float(1 << 64)
    return LOGPROB_FLOOR + fraction * (LOGPROB_CEILING - LOGPROB_FLOOR)


def prompt_sentence(prompt: str) -> Optional[str]:
    """The utterance of a zero-shot prompt, or None for other prompt shapes."""
    match = _SENTENCE_PATTERN.search(prompt)
    return match.group(1) if match else None


def prompt_intent_names(prompt: str) -> List[str]:
    """Intent names listed in a zero-shot prompt's description block."""
    head, _, _ = prompt.partition("\n\nSentence: ")
    _, _, block = head.partition("\n\n")
    names = []
    for line in block.split("\n"):
        name, separator, _ = line.partition(": ")
        if separator:
            names.append(name)
    return names


class ScriptedCompletionProvider(CompletionProvider):
    """Exact-prompt map first, then regex rules in order, then `default`."""

    def __init__(
        self,
        responses: Optional[Dict[str, str]] = None,
        patterns: Optional[Sequence[Tuple[str, str]]] = None,
        default: str = "",
        provider_id: str = "scripted",
    ):
        super().__init__()
        self.provider_id = provider_id
        self._responses = dict(responses or {})
        self._patterns = [(re.compile(pattern), text) for pattern, text in (patterns or [])]
        self._default = default

    def _complete(self, request: CompletionRequest) -> str:
        if request.prompt in self._responses:
            return self._responses[request.prompt]
        for pattern, text in self._patterns:
            if pattern.search(request.prompt):
                return text
        return self._default


class HashScoringProvider(CompletionProvider):
    """
    Scoring mock. Preferred targets get LOGPROB_CEILING on every token,
    everything else gets pseudo_logprob values. Completions are empty.
    """

    def __init__(self, preferred: Iterable[str] = (), provider_id: str = "hash-scoring"):
        super().__init__()
        self.provider_id = provider_id
        self._preferred = frozenset(preferred)

    def _complete(self, request: CompletionRequest) -> str:
        return ""

    def _score(self, prompt: str, target: str) -> List[float]:
        tokens = tokenize_target(target)
        if target in self._preferred:
            return [LOGPROB_CEILING] * len(tokens)
        return [pseudo_logprob(prompt, token) for token in tokens]


class OracleCompletionProvider(CompletionProvider):
    """
    Answers every prompt with knowledge of the gold labels in `dataset`.

    Zero-shot prompts get the gold intent name, or none_of_the_above for OOS
    and unknown sentences. With `constrain_to_prompt`, a gold intent missing
    from the prompt is also answered with none_of_the_above.
    """

    def __init__(self, dataset: Dataset, constrain_to_prompt: bool = True, provider_id: str = "oracle"):
        super().__init__()
        self.provider_id = provider_id
        self._dataset = dataset
        self._constrain = constrain_to_prompt
        self._gold: Dict[str, str] = {}
        for utterance in list(dataset.train) + list(dataset.test):
            self._gold[utterance.text] = utterance.label

    def gold_for(self, sentence: str) -> Optional[str]:
        label = self._gold.get(sentence)
        if label is None or label not in self._dataset.intent_names:
            return None
        return label

    def _complete(self, request: CompletionRequest) -> str:
        prompt = request.prompt

        sentence = prompt_sentence(prompt)
        if sentence is not None:
            gold = self.gold_for(sentence)
            if gold is None or (self._constrain and gold not in prompt_intent_names(prompt)):
                return NONE_OPTION_NAME
            return gold

        match = _DESCRIPTION_AUG_PATTERN.search(prompt)
        if match:
            count, intent = int(match.group(1)), match.group(2)
            lines = [u.text for u in self._dataset.train_for(intent)][:count]
            return "\n".join(f"{i}. {line}" for i, line in enumerate(lines, start=1))

        match = _PARAPHRASE_PATTERN.search(prompt)
        if match:
            seeds = [line for line in match.group(1).split("\n") if line.strip()]
            count = int(match.group(2))
            return "\n".join(f"{i}. {line}" for i, line in
                             enumerate(self._paraphrases(seeds, count), start=1))

        return ""

    @staticmethod
    def _paraphrases(seeds: List[str], count: int) -> List[str]:
        lines: List[str] = []
        seen = set()
        for template in PARAPHRASE_TEMPLATES:
            for seed in seeds:
                line = template.format(seed=seed)
                if line.lower() not in seen:
                    seen.add(line.lower())
                    lines.append(line)
                if len(lines) == count:
                    return lines
        return lines

    def _score(self, prompt: str, target: str) -> List[float]:
        tokens = tokenize_target(target)
        sentence = prompt_sentence(prompt)
        if sentence is not None and self.gold_for(sentence) == target:
            return [LOGPROB_CEILING] * len(tokens)
        return [min(pseudo_logprob(prompt, token), -1.0) for token in tokens]
