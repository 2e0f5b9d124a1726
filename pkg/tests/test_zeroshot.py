import numpy as np
import pytest

from src.constants import NONE_OPTION_NAME, OOS_LABEL
from src.corpus.models import Dataset, IntentSpec, LabeledUtterance
from src.corpus.sampling import sample_few_shot
from src.embedding.providers import HashEmbeddingProvider
from src.eval.metrics import RunResult, in_scope_accuracy, oos_recall, topk_recall
from src.llm_gateway.errors import ProviderTransportError
from src.llm_gateway.mock import OracleCompletionProvider, ScriptedCompletionProvider
from src.zeroshot.classifier import ClassificationError, ZeroShotConfig, classify_batch, classify_zero_shot
from src.zeroshot.filtering import IntentIndex, filter_intents
from src.zeroshot.parser import parse_completion
from src.zeroshot.prompt import build_zero_shot_prompt

MASSIVE_INTENTS = [
    IntentSpec(name="alarm_set", description="user wants to set an alarm"),
    IntentSpec(name="iot_cleaning", description="user wants to do some cleaning"),
    IntentSpec(name="play_podcasts",
               description="user wants to play a podcast or rewind/repeat a particular episode in a podcast"),
]


def test_prompt_matches_reference_text():
    expected = (
        "The given sentence needs to be mapped to exactly one of the intents described below:\n"
        "\n"
        "alarm_set: user wants to set an alarm\n"
        "iot_cleaning: user wants to do some cleaning\n"
        "play_podcasts: user wants to play a podcast or rewind/repeat a particular episode in a podcast\n"
        "none_of_the_above: if the user sentence is not about any of the intents above\n"
        "\n"
        "Sentence: wake me up at 7am\n"
        "Intent:"
    )
    assert build_zero_shot_prompt(MASSIVE_INTENTS, "wake me up at 7am") == expected


def test_prompt_single_intent_without_none_option():
    prompt = build_zero_shot_prompt([MASSIVE_INTENTS[0]], "wake me", include_none_option=False)
    assert [line for line in prompt.split("\n") if line] == [
        "The given sentence needs to be mapped to exactly one of the intents described below:",
        "alarm_set: user wants to set an alarm",
        "Sentence: wake me",
        "Intent:",
    ]
    assert NONE_OPTION_NAME not in prompt


def test_prompt_keeps_intent_order_and_invariants():
    prompt = build_zero_shot_prompt([MASSIVE_INTENTS[1], MASSIVE_INTENTS[0]], "clean up")
    assert prompt.index("iot_cleaning:") < prompt.index("alarm_set:")
    assert prompt.endswith("Intent:")
    assert prompt.count("clean up") == 1
    assert prompt.count(NONE_OPTION_NAME) == 1


def test_prompt_errors():
    with pytest.raises(ValueError):
        build_zero_shot_prompt([], "x")
    with pytest.raises(ValueError):
        build_zero_shot_prompt(MASSIVE_INTENTS, "")


def test_parse_examples():
    names = ["alarm_set", "iot_cleaning"]
    first = parse_completion("alarm_set", names)
    assert (first.label, first.match_position, first.matched_name_length) == ("alarm_set", 0, 9)
    assert parse_completion("I think it is iot_cleaning, not alarm_set", names).label == "iot_cleaning"
    assert parse_completion("play_podcasts please", ["play", "play_podcasts"]).label == "play_podcasts"
    assert parse_completion("ALARM_SET", names).label == "alarm_set"


def test_parse_out_of_scope():
    names = ["alarm_set", "iot_cleaning"]
    for completion in ("", "no idea", "none_of_the_above, not alarm_set"):
        prediction = parse_completion(completion, names)
        assert prediction.label == OOS_LABEL
        assert prediction.match_position is None
        assert prediction.is_oos
    assert parse_completion("alarm_set or none_of_the_above", names).label == "alarm_set"


def test_parse_ignores_none_option_when_not_offered():
    names = ["alarm_set", "iot_cleaning"]
    prediction = parse_completion("none_of_the_above, not alarm_set", names, include_none_option=False)
    assert (prediction.label, prediction.match_position) == ("alarm_set", 23)
    assert parse_completion("none_of_the_above", names, include_none_option=False).label == OOS_LABEL


def _brute_force(completion, names):
    haystack = completion.lower()
    occurrences = []
    for name in list(names) + [NONE_OPTION_NAME]:
        needle = name.lower()
        for position in range(len(haystack) - len(needle) + 1):
            if haystack[position:position + len(needle)] == needle:
                occurrences.append((position, -len(needle), name))
    if not occurrences:
        return OOS_LABEL
    _, _, name = min(occurrences)
    return OOS_LABEL if name == NONE_OPTION_NAME else name


def test_parse_agrees_with_brute_force():
    rng = np.random.default_rng(2024)
    alphabet = list("abAB_ ")
    for _ in range(1000):
        names = {}
        while len(names) < rng.integers(1, 6):
            name = "".join(rng.choice(list("ab_"), size=rng.integers(1, 5)))
            names.setdefault(name.lower(), name)
        names = list(names.values())
        pieces = ["".join(rng.choice(alphabet, size=rng.integers(0, 12)))]
        if rng.random() < 0.2:
            pieces.insert(int(rng.integers(0, 2)), NONE_OPTION_NAME)
        completion = "".join(pieces)

        expected = _brute_force(completion, names)
        assert parse_completion(completion, names).label == expected
        assert parse_completion(completion, list(reversed(names))).label == expected


def test_filter_all_intents_when_k_is_large(keyword_dataset):
    provider = HashEmbeddingProvider(256)
    sample = sample_few_shot(keyword_dataset, 5, seed=1)
    ranked = filter_intents("please aquamarine the aquamarine now", sample, provider, k=50)
    assert sorted(ranked) == sorted(keyword_dataset.intent_names)
    assert len(set(ranked)) == len(ranked)
    assert ranked[0] == "aquamarine_request"


def test_filter_self_similarity_ranks_first(keyword_dataset):
    provider = HashEmbeddingProvider(256)
    sample = sample_few_shot(keyword_dataset, 5, seed=2)
    for name, examples in sample.examples.items():
        assert filter_intents(examples[0].text, sample, provider, k=1) == [name]


def test_filter_ties_break_by_name():
    intents = [IntentSpec(name=n, description="") for n in ("zeta", "alpha")]
    train = [LabeledUtterance(text="same text", label="zeta"), LabeledUtterance(text="same text", label="alpha")]
    dataset = Dataset(name="ties", intents=intents, train=train, test=[])
    sample = sample_few_shot(dataset, 1, seed=0)
    assert filter_intents("same text", sample, HashEmbeddingProvider(64), k=2) == ["alpha", "zeta"]


def test_filter_top5_recall_on_keyword_clusters(keyword_dataset):
    provider = HashEmbeddingProvider(256)
    sample = sample_few_shot(keyword_dataset, 5, seed=3)
    index = IntentIndex.build(sample, provider)
    rows = [(u.label, index.top(u.text, 5)) for u in keyword_dataset.test if not u.is_oos]
    assert topk_recall(rows, 5) >= 0.85


def test_oracle_zero_shot_is_perfect_in_scope(keyword_dataset):
    oracle = OracleCompletionProvider(keyword_dataset)
    records = classify_batch(keyword_dataset.test, keyword_dataset, ZeroShotConfig(), oracle)
    run = RunResult(seed=0, predictions=[(r.gold, r.predicted) for r in records], method="zeroshot")
    assert in_scope_accuracy(run) == 1.0
    assert oos_recall(run) == 1.0
    for record in records:
        assert record.prompt_intents == tuple(keyword_dataset.intent_names)
        assert set(record.to_dict()) == {"text", "gold", "predicted", "prompt_intents", "completion"}


def test_never_matching_mock_predicts_oos(keyword_dataset):
    never = ScriptedCompletionProvider(default="")
    records = classify_batch(keyword_dataset.test, keyword_dataset, ZeroShotConfig(), never, max_workers=4)
    assert all(r.predicted == OOS_LABEL for r in records)
    run = RunResult(seed=0, predictions=[(r.gold, r.predicted) for r in records], method="zeroshot")
    assert oos_recall(run) == 1.0


def test_prompt_never_contains_examples(keyword_dataset):
    seen = []

    class Recording(ScriptedCompletionProvider):
        def _complete(self, request):
            seen.append(request.prompt)
            return ""

    sample = sample_few_shot(keyword_dataset, 5, seed=1)
    config = ZeroShotConfig(use_filtering=True, top_k=3)
    classify_zero_shot("hello there", keyword_dataset, config, Recording(), HashEmbeddingProvider(256), sample)
    assert all(u.text not in seen[0] for u in sample.utterances())
    assert seen[0].count("_request:") == 3


def test_filtering_miss_yields_wrong_prediction(keyword_dataset):
    misleading = LabeledUtterance(text="bluebottle bluebottle bluebottle", label="aquamarine_request")
    dataset = Dataset(name="miss", intents=keyword_dataset.intents, train=keyword_dataset.train,
                      test=list(keyword_dataset.test) + [misleading])
    provider = HashEmbeddingProvider(256)
    sample = sample_few_shot(dataset, 5, seed=1)

    ranking = [name for name, _ in IntentIndex.build(sample, provider).rank(misleading.text)]
    assert ranking.index("aquamarine_request") >= 1

    oracle = OracleCompletionProvider(dataset, constrain_to_prompt=True)
    config = ZeroShotConfig(use_filtering=True, top_k=1)
    prediction = classify_zero_shot(misleading.text, dataset, config, oracle, provider, sample)
    assert prediction.label != "aquamarine_request"

    unfiltered = classify_zero_shot(misleading.text, dataset, ZeroShotConfig(), oracle)
    assert unfiltered.label == "aquamarine_request"


def test_filtering_requires_sample(keyword_dataset):
    with pytest.raises(ValueError):
        classify_zero_shot("x y z", keyword_dataset, ZeroShotConfig(use_filtering=True),
                           ScriptedCompletionProvider())


def test_provider_failure_carries_utterance(keyword_dataset):
    class Failing(ScriptedCompletionProvider):
        def _complete(self, request):
            raise ProviderTransportError("HTTP 503", "failing", "complete")

    with pytest.raises(ClassificationError) as info:
        classify_zero_shot("where is my parcel", keyword_dataset, ZeroShotConfig(), Failing())
    assert info.value.utterance == "where is my parcel"


def test_config_validation():
    with pytest.raises(ValueError):
        ZeroShotConfig(top_k=0)


def test_echoed_none_option_only_counts_when_prompted(keyword_dataset):
    echo = ScriptedCompletionProvider(default="none_of_the_above, maybe cinnamon_request")
    offered = classify_zero_shot("cinnamon please", keyword_dataset, ZeroShotConfig(), echo)
    assert offered.label == OOS_LABEL
    hidden = classify_zero_shot("cinnamon please", keyword_dataset, ZeroShotConfig(include_none_option=False), echo)
    assert hidden.label == "cinnamon_request"
