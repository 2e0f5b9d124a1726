"""
Seeded K-shot sampling and dataset statistics.

Sampling uses numpy's PCG64 bit generator. Every intent draws from its own
stream, seeded with SeedSequence([seed, blake2b-64(intent name)]), and takes a
Fisher-Yates prefix of its train utterances in record order. Streams are
independent of other intents and of k, so a k1 sample is a prefix of the k2
sample for the same seed.
"""

import hashlib
from collections import Counter
from typing import Dict, List, Sequence

import numpy as np

from src.corpus.models import Dataset, DatasetStats, FewShotSample, LabeledUtterance

_UINT64_MASK = (1 << 64) - 1


def stable_key(text: str) -> int:
    """64-bit blake2b digest of a string, as an unsigned integer."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little")


def seeded_generator(seed: int, *keys: str) -> np.random.Generator:
    """PCG64 generator for (seed, keys...), identical across platforms."""
    entropy = [seed & _UINT64_MASK] + [stable_key(key) for key in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def fisher_yates_prefix(items: Sequence, length: int, rng: np.random.Generator) -> List:
    """First `length` positions of a Fisher-Yates shuffle of `items`."""
    pool = list(items)
    length = min(length, len(pool))
    for i in range(length):
        j = i + int(rng.integers(0, len(pool) - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:length]


def sample_few_shot(dataset: Dataset, k: int, seed: int) -> FewShotSample:
    """
    Draw up to k train utterances per intent.

    Intents with fewer than k utterances contribute all of them.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    by_intent: Dict[str, List[LabeledUtterance]] = {name: [] for name in dataset.intent_names}
    for utterance in dataset.train:
        by_intent[utterance.label].append(utterance)

    examples = {
        name: tuple(fisher_yates_prefix(candidates, k, seeded_generator(seed, name)))
        for name, candidates in by_intent.items()
    }
    return FewShotSample(k=k, seed=seed, examples=examples)


def dataset_stats(dataset: Dataset) -> DatasetStats:
    train_counts = Counter(u.label for u in dataset.train)
    test_counts = Counter(u.label for u in dataset.test if not u.is_oos)
    return DatasetStats(
        name=dataset.name,
        n_intents=len(dataset.intents),
        n_train=len(dataset.train),
        n_test=len(dataset.test),
        n_oos=sum(1 for u in dataset.test if u.is_oos),
        train_per_intent={name: train_counts.get(name, 0) for name in dataset.intent_names},
        test_per_intent={name: test_counts.get(name, 0) for name in dataset.intent_names},
    )
