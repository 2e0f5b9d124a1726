import os

import numpy as np
import pytest

from src.config_loader import ConfigLoader
from src.constants import OOS_LABEL
from src.corpus.loader import save_dataset
from src.corpus.models import Dataset, IntentSpec, LabeledUtterance

KEYWORDS = (
    "aquamarine",
    "bluebottle",
    "cinnamon",
    "driftwood",
    "evergreen",
    "flamingo",
    "gingerbread",
    "hummingbird",
    "icicle",
    "jellyfish",
)
FILLERS = ("please", "could", "you", "the", "my", "now", "today", "for", "me", "about", "with", "again")
OOS_WORDS = ("kaleidoscope", "quartz", "volcano", "yodel", "zucchini")


def _keyword_utterances(rng, keyword, count, taken):
    rows = []
    while len(rows) < count:
        a, b, c = rng.choice(FILLERS, size=3)
        text = f"{a} {keyword} {b} {keyword} {c}"
        if text not in taken:
            taken.add(text)
            rows.append(text)
    return rows


def make_keyword_dataset(n_intents=10, n_train=30, n_test=10, n_oos=10, seed=7, name="keywords") -> Dataset:
    """
    Synthetic keyword-cluster dataset: every utterance of an intent repeats the
    intent's keyword twice among shared filler words.
    """
    rng = np.random.default_rng(seed)
    taken = set()
    intents, train, test = [], [], []
    for keyword in KEYWORDS[:n_intents]:
        label = f"{keyword}_request"
        intents.append(IntentSpec(name=label, description=f"user asks about {keyword}"))
        texts = _keyword_utterances(rng, keyword, n_train + n_test, taken)
        train.extend(LabeledUtterance(text=t, label=label) for t in texts[:n_train])
        test.extend(LabeledUtterance(text=t, label=label) for t in texts[n_train:])
    for i in range(n_oos):
        word = OOS_WORDS[i % len(OOS_WORDS)]
        a, b = rng.choice(FILLERS, size=2)
        test.append(LabeledUtterance(text=f"{a} {word} {b} {word} {i}", label=OOS_LABEL))
    return Dataset(name=name, intents=intents, train=train, test=test)


@pytest.fixture
def keyword_dataset() -> Dataset:
    return make_keyword_dataset()


@pytest.fixture
def small_dataset() -> Dataset:
    intents = [
        IntentSpec(name="alarm_set", description="user wants to set an alarm"),
        IntentSpec(name="iot_cleaning", description="user wants to do some cleaning"),
        IntentSpec(name="play_podcasts", description="user wants to play a podcast"),
    ]
    train = [
        LabeledUtterance(text="wake me up at seven", label="alarm_set"),
        LabeledUtterance(text="alarm for ten am", label="alarm_set"),
        LabeledUtterance(text="set an alarm for noon", label="alarm_set"),
        LabeledUtterance(text="start the vacuum", label="iot_cleaning"),
        LabeledUtterance(text="clean the kitchen floor", label="iot_cleaning"),
        LabeledUtterance(text="play my podcast", label="play_podcasts"),
        LabeledUtterance(text="resume the last episode", label="play_podcasts"),
    ]
    test = [
        LabeledUtterance(text="wake me up at 7am", label="alarm_set"),
        LabeledUtterance(text="vacuum the living room", label="iot_cleaning"),
        LabeledUtterance(text="next podcast episode", label="play_podcasts"),
        LabeledUtterance(text="what is the capital of peru", label=OOS_LABEL),
    ]
    return Dataset(name="small", intents=intents, train=train, test=test)


@pytest.fixture
def dataset_dir(tmp_path, keyword_dataset) -> str:
    path = os.path.join(str(tmp_path), "keywords")
    save_dataset(keyword_dataset, path)
    return path


@pytest.fixture(autouse=True)
def reset_config(monkeypatch):
    monkeypatch.delenv("CONFIG_PATH", raising=False)
    monkeypatch.delenv("INTENT_BENCH_LOG_LEVEL", raising=False)
    ConfigLoader.reset()
    yield
    ConfigLoader.reset()
