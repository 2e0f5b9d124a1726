import json
import os

import pytest

from src.constants import OOS_LABEL
from src.corpus.loader import load_dataset, load_train_split, save_dataset
from src.corpus.models import Dataset, DatasetError, FewShotSample, IntentSpec, LabeledUtterance
from src.corpus.sampling import dataset_stats, sample_few_shot


def _write(path, name, content):
    with open(os.path.join(path, name), "w", encoding="utf-8") as f:
        f.write(content)


def _fixture_dir(tmp_path, intents, train_rows, test_rows=()):
    path = str(tmp_path / "fixture")
    os.makedirs(path, exist_ok=True)
    _write(path, "intents.json", json.dumps(intents))
    _write(path, "train.jsonl", "".join(json.dumps(r) + "\n" for r in train_rows))
    if test_rows is not None:
        _write(path, "test.jsonl", "".join(json.dumps(r) + "\n" for r in test_rows))
    return path


def _three_by_n(n):
    intents = [IntentSpec(name=f"intent_{i}", description="") for i in range(3)]
    train = [LabeledUtterance(text=f"utterance {i} {j}", label=f"intent_{i}") for i in range(3) for j in range(n)]
    return Dataset(name="grid", intents=intents, train=train, test=[])


def test_load_fixture_three_by_two(tmp_path):
    intents = [{"name": n, "description": f"about {n}"} for n in ("a_one", "b_two", "c_three")]
    train = [{"text": f"{n} example {j}", "label": n} for n in ("a_one", "b_two", "c_three") for j in range(2)]
    dataset = load_dataset(_fixture_dir(tmp_path, intents, train, []))

    assert len(dataset.train) == 6
    assert dataset.has_oos is False
    assert dataset.name == "fixture"
    assert [u.text for u in dataset.train] == [r["text"] for r in train]


def test_unknown_train_label_names_the_label(tmp_path):
    intents = [{"name": "alarm_set", "description": ""}]
    train = [{"text": "hello", "label": "weather_query"}]
    with pytest.raises(DatasetError, match="weather_query"):
        load_dataset(_fixture_dir(tmp_path, intents, train))


def test_malformed_record_reports_line(tmp_path):
    path = _fixture_dir(tmp_path, [{"name": "alarm_set", "description": ""}],
                        [{"text": "wake me", "label": "alarm_set"}])
    with open(os.path.join(path, "train.jsonl"), "a", encoding="utf-8") as f:
        f.write("{not json\n")
    with pytest.raises(DatasetError) as info:
        load_dataset(path)
    assert info.value.line == 2


def test_missing_test_split_is_an_error(tmp_path):
    path = _fixture_dir(tmp_path, [{"name": "alarm_set", "description": ""}],
                        [{"text": "wake me", "label": "alarm_set"}], test_rows=None)
    with pytest.raises(DatasetError, match="split file not found") as info:
        load_dataset(path)
    assert info.value.path == os.path.join(path, "test.jsonl")


def test_duplicate_intent_names_are_case_insensitive(tmp_path):
    intents = [{"name": "Alarm_Set", "description": ""}, {"name": "alarm_set", "description": ""}]
    with pytest.raises(DatasetError, match="duplicate"):
        load_dataset(_fixture_dir(tmp_path, intents, []))


def test_empty_intents_file(tmp_path):
    with pytest.raises(DatasetError, match="empty"):
        load_dataset(_fixture_dir(tmp_path, [], []))


def test_missing_directory():
    with pytest.raises(DatasetError, match="not found"):
        load_dataset("/nonexistent/dataset")


def test_reserved_names_rejected():
    with pytest.raises(DatasetError):
        IntentSpec(name="none_of_the_above", description="")
    with pytest.raises(DatasetError):
        IntentSpec(name=" padded", description="")


def test_train_split_cannot_carry_oos():
    with pytest.raises(DatasetError):
        Dataset(name="x", intents=[IntentSpec(name="a", description="")],
                train=[LabeledUtterance(text="hi", label=OOS_LABEL)], test=[])


def test_save_load_round_trip(tmp_path, keyword_dataset):
    path = str(tmp_path / "keywords")
    save_dataset(keyword_dataset, path)
    loaded = load_dataset(path)

    assert loaded.intents == keyword_dataset.intents
    assert loaded.train == keyword_dataset.train
    assert loaded.test == keyword_dataset.test
    assert loaded.has_oos
    assert load_train_split(path) == list(keyword_dataset.train)


def test_sample_counts_and_membership():
    dataset = _three_by_n(10)
    sample = sample_few_shot(dataset, k=2, seed=1)

    assert len(sample) == 6
    assert all(len(group) == 2 for group in sample.examples.values())
    train = set(dataset.train)
    for name, group in sample.examples.items():
        assert len(set(group)) == len(group)
        assert all(u in train and u.label == name for u in group)


def test_sample_is_deterministic():
    dataset = _three_by_n(10)
    assert sample_few_shot(dataset, 3, 42) == sample_few_shot(dataset, 3, 42)
    assert sample_few_shot(dataset, 3, 42).to_dict() != sample_few_shot(dataset, 3, 43).to_dict()


def test_short_intent_contributes_everything():
    dataset = _three_by_n(3)
    sample = sample_few_shot(dataset, k=5, seed=0)
    assert all(len(group) == 3 for group in sample.examples.values())


def test_smaller_k_is_prefix_of_larger_k(keyword_dataset):
    small = sample_few_shot(keyword_dataset, 3, seed=5)
    large = sample_few_shot(keyword_dataset, 8, seed=5)
    for name in keyword_dataset.intent_names:
        assert large.examples[name][:3] == small.examples[name]


def test_sample_rejects_non_positive_k(keyword_dataset):
    with pytest.raises(ValueError):
        sample_few_shot(keyword_dataset, 0, seed=1)


def test_sample_json_round_trip(keyword_dataset):
    sample = sample_few_shot(keyword_dataset, 5, seed=2)
    assert FewShotSample.from_dict(json.loads(json.dumps(sample.to_dict()))) == sample


def test_stats_match_recount(keyword_dataset):
    stats = dataset_stats(keyword_dataset)
    assert stats.n_intents == 10
    assert stats.n_train == 300
    assert stats.n_test == 110
    assert stats.n_oos == 10
    assert sum(stats.train_per_intent.values()) == stats.n_train
    assert all(count == 10 for count in stats.test_per_intent.values())


def test_stats_empty_test_split():
    stats = dataset_stats(_three_by_n(2))
    assert stats.n_test == 0
    assert stats.n_oos == 0


def test_stats_counts_oos_rows(small_dataset):
    test = list(small_dataset.test) + [LabeledUtterance(text=f"noise {i}", label=OOS_LABEL) for i in range(3)]
    dataset = Dataset(name="oos", intents=small_dataset.intents, train=small_dataset.train, test=test)
    assert dataset_stats(dataset).n_oos == 4


@pytest.mark.massive
@pytest.mark.skipif(not os.getenv("MASSIVE_EN_DIR"), reason="MASSIVE_EN_DIR not set")
def test_massive_english_counts():
    stats = dataset_stats(load_dataset(os.environ["MASSIVE_EN_DIR"]))
    assert (stats.n_intents, stats.n_train, stats.n_test, stats.n_oos) == (60, 11514, 2974, 0)
