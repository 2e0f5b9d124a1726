"""
Provider error hierarchy. Every error names the provider and the operation.
"""


class ProviderError(RuntimeError):
    """Base class for completion, scoring and embedding provider failures."""

    def __init__(self, message: str, provider_id: str, operation: str):
        self.provider_id = provider_id
        self.operation = operation
        self.detail = message
        super().__init__(f"[{provider_id}:{operation}] {message}")


class ProviderTimeoutError(ProviderError):
    """The request timed out. The only error that is retried."""


class ProviderTransportError(ProviderError):
    """Connection failure or server-side (5xx) error."""


class MalformedResponseError(ProviderError):
    """The provider answered with something that breaks the wire contract."""


class ProviderRefusalError(ProviderError):
    """The provider rejected the request (4xx, missing credentials)."""


class ScoringUnsupportedError(ProviderError):
    """The provider cannot score targets; callers may fall back to completion."""
