"""
Reading and writing dataset directories.

Layout:
    intents.json  array of {"name", "description"}
    train.jsonl   one {"text", "label"} object per line
    test.jsonl    same, label may be __oos__
"""

import json
import os
from typing import List

from src.corpus.models import Dataset, DatasetError, IntentSpec, LabeledUtterance
from src.constants import Status
from src.logging_config import BenchLogger

INTENTS_FILE = "intents.json"
TRAIN_FILE = "train.jsonl"
TEST_FILE = "test.jsonl"


def _read_intents(path: str) -> List[IntentSpec]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except FileNotFoundError:
        raise DatasetError("intents file not found", path=path)
    except json.JSONDecodeError as e:
        raise DatasetError(f"invalid JSON: {e.msg}", path=path, line=e.lineno)

    if not isinstance(document, list):
        raise DatasetError("intents file must hold a JSON array", path=path)
    if not document:
        raise DatasetError("intents file is empty", path=path)

    intents = []
    for position, record in enumerate(document, start=1):
        if not isinstance(record, dict) or "name" not in record:
            raise DatasetError(f"intent record {position} needs a name", path=path)
        try:
            intents.append(IntentSpec(name=record["name"], description=record.get("description", "")))
        except DatasetError as e:
            raise DatasetError(f"intent record {position}: {e}", path=path)
    return intents


def _read_split(path: str) -> List[LabeledUtterance]:
    if not os.path.isfile(path):
        raise DatasetError("split file not found", path=path)

    utterances = []
    with open(path, "r", encoding="utf-8", newline="\n") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"malformed record: {e.msg}", path=path, line=line_number)
            if not isinstance(record, dict) or not isinstance(record.get("text"), str) \
                    or not isinstance(record.get("label"), str):
                raise DatasetError("record needs string text and label", path=path, line=line_number)
            try:
                utterances.append(LabeledUtterance(text=record["text"], label=record["label"]))
            except DatasetError as e:
                raise DatasetError(str(e), path=path, line=line_number)
    return utterances


def load_dataset(path: str) -> Dataset:
    """
    Load and validate a dataset directory.

    Args:
        path: Directory holding intents.json, train.jsonl and test.jsonl

    Returns:
        Validated Dataset with record order preserved

    Raises:
        DatasetError: On any malformed or inconsistent content
    """
    logger = BenchLogger.get_instance()
    if not os.path.isdir(path):
        raise DatasetError("dataset directory not found", path=path)

    intents = _read_intents(os.path.join(path, INTENTS_FILE))
    train = _read_split(os.path.join(path, TRAIN_FILE))
    test = _read_split(os.path.join(path, TEST_FILE))

    name = os.path.basename(os.path.normpath(path))
    try:
        dataset = Dataset(name=name, intents=intents, train=train, test=test)
    except DatasetError as e:
        raise DatasetError(str(e), path=path)

    logger.log_info(
        message=f"Loaded dataset {name}: {len(intents)} intents, {len(train)} train, {len(test)} test",
        status=Status.Completed,
        source="Corpus"
    )
    return dataset


def _write_split(path: str, utterances) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for utterance in utterances:
            f.write(json.dumps({"text": utterance.text, "label": utterance.label}, ensure_ascii=False))
            f.write("\n")


def save_dataset(dataset: Dataset, path: str) -> None:
    """Write a dataset directory that load_dataset reads back unchanged."""
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, INTENTS_FILE), "w", encoding="utf-8", newline="\n") as f:
        json.dump(
            [{"name": i.name, "description": i.description} for i in dataset.intents],
            f, ensure_ascii=False, indent=2,
        )
        f.write("\n")
    _write_split(os.path.join(path, TRAIN_FILE), dataset.train)
    _write_split(os.path.join(path, TEST_FILE), dataset.test)


def save_train_split(utterances, path: str) -> None:
    """Write just a train.jsonl file (augmented training sets)."""
    _write_split(path, utterances)


def load_train_split(path: str) -> List[LabeledUtterance]:
    """Read a train.jsonl file, or the one inside a directory."""
    if os.path.isdir(path):
        path = os.path.join(path, TRAIN_FILE)
    return _read_split(path)
