# Intent datasets: model, files, sampling
from src.corpus.loader import load_dataset, load_train_split, save_dataset, save_train_split
from src.corpus.models import (
    Dataset,
    DatasetError,
    DatasetStats,
    FewShotSample,
    IntentSpec,
    LabeledUtterance,
)
from src.corpus.sampling import dataset_stats, sample_few_shot, seeded_generator

__all__ = [
    "Dataset",
    "DatasetError",
    "DatasetStats",
    "FewShotSample",
    "IntentSpec",
    "LabeledUtterance",
    "dataset_stats",
    "load_dataset",
    "load_train_split",
    "sample_few_shot",
    "save_dataset",
    "save_train_split",
    "seeded_generator",
]
