"""
Builds embedding and completion providers from an ExperimentConfig.
"""

from typing import Optional

from src.corpus.models import Dataset
from src.embedding.providers import EmbeddingProvider, HashEmbeddingProvider
from src.llm_gateway.base import CompletionProvider
from src.llm_gateway.mock import HashScoringProvider, OracleCompletionProvider, ScriptedCompletionProvider
from src.services.experiment_config import ExperimentConfig

TRANSPORT_KEYS = ("token_env", "timeout_s", "max_retries", "backoff_s")
DEFAULT_EMBEDDING_DIMENSION = 256


def _transport_options(section: dict) -> dict:
    return {key: section[key] for key in TRANSPORT_KEYS if key in section}


def build_embedding_provider(config: ExperimentConfig) -> EmbeddingProvider:
    """Hash embedder unless a remote embedding is configured in remote mode."""
    section = config.embedding
    dimension = int(section.get("dimension", DEFAULT_EMBEDDING_DIMENSION))
    if config.provider_mode == "remote" and section.get("kind") == "remote":
        # Imported here so mock-only runs never touch requests
        from src.embedding.remote import RemoteEmbeddingProvider

        return RemoteEmbeddingProvider(
            url=section["url"],
            dimension=dimension,
            provider_id=section.get("provider_id", "remote-embedding"),
            batch_size=int(section.get("batch_size", 64)),
            **_transport_options(section),
        )
    return HashEmbeddingProvider(dimension=dimension)


def build_completion_provider(config: ExperimentConfig, dataset: Optional[Dataset] = None) -> CompletionProvider:
    """
    Mock kinds:
        oracle  answers from the dataset's gold labels (needs `dataset`)
        never   completes with an empty string, so nothing ever matches
        hash    empty completions, deterministic pseudo log-probabilities
    """
    if config.provider_mode == "remote":
        from src.llm_gateway.remote import RemoteCompletionProvider

        section = config.completion
        return RemoteCompletionProvider(
            completion_url=section.get("url", ""),
            scoring_url=section.get("scoring_url"),
            provider_id=section.get("provider_id", "remote"),
            **_transport_options(section),
        )

    if config.mock_kind == "oracle":
        if dataset is None:
            raise ValueError("the oracle mock needs the dataset")
        return OracleCompletionProvider(dataset)
    if config.mock_kind == "never":
        return ScriptedCompletionProvider(default="", provider_id="never")
    return HashScoringProvider()
