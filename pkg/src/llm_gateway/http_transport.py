"""
Shared JSON-over-HTTP transport for remote completion, scoring and
embedding endpoints.
"""

import json
import os
import threading
from typing import Any, Dict, Optional

import requests
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from src.constants import Status
from src.llm_gateway.errors import (
    MalformedResponseError,
    ProviderRefusalError,
    ProviderTimeoutError,
    ProviderTransportError,
)
from src.logging_config import BenchLogger

MAX_TIMEOUT_RETRIES = 2


class HttpTransport:
    """
    POSTs JSON documents with bearer auth.

    Timeouts are retried up to `max_retries` times with exponential backoff;
    every other failure is raised immediately.
    """

    def __init__(
        self,
        provider_id: str,
        token_env: Optional[str] = None,
        timeout_s: float = 30.0,
        max_retries: int = 2,
        backoff_s: float = 1.0,
        session: Optional[requests.Session] = None,
    ):
        if not 0 <= max_retries <= MAX_TIMEOUT_RETRIES:
            raise ValueError(f"max_retries must be in [0, {MAX_TIMEOUT_RETRIES}], got {max_retries}")
        self._provider_id = provider_id
        self._token_env = token_env
        self._timeout_s = timeout_s
        self._max_retries = max_retries
        self._backoff_s = backoff_s
        self._session = session or requests.Session()
        self._logger = BenchLogger.get_instance()
        self._lock = threading.Lock()
        self._request_count = 0

    @property
    def request_count(self) -> int:
        return self._request_count

    @property
    def session(self) -> requests.Session:
        return self._session

    def _headers(self, operation: str) -> Dict[str, str]:
        headers = {"Content-Type": "application/json; charset=utf-8"}
        if self._token_env:
            token = os.environ.get(self._token_env)
            if not token:
                raise ProviderRefusalError(
                    f"credential environment variable {self._token_env} is not set",
                    self._provider_id, operation)
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def post_json(self, url: str, payload: Dict[str, Any], operation: str) -> Dict[str, Any]:
        """
        POST payload and return the decoded JSON object.

        Raises:
            ProviderTimeoutError: After the last timed-out attempt
            ProviderTransportError: Connection failure or 5xx
            ProviderRefusalError: 4xx or missing credentials
            MalformedResponseError: Body is not a JSON object
        """
        retrying = Retrying(
            stop=stop_after_attempt(self._max_retries + 1),
            wait=wait_exponential(multiplier=self._backoff_s, min=0, max=30),
            retry=retry_if_exception_type(ProviderTimeoutError),
            reraise=True,
        )
        for attempt in retrying:
            with attempt:
                return self._post_once(url, payload, operation, attempt.retry_state.attempt_number)

    def _post_once(self, url: str, payload: Dict[str, Any], operation: str, attempt: int) -> Dict[str, Any]:
        with self._lock:
            self._request_count += 1
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        headers = self._headers(operation)

        try:
            response = self._session.post(url, data=body, headers=headers, timeout=self._timeout_s)
        except requests.Timeout as e:
            self._logger.log_warning(
                message=f"{operation} timed out on attempt {attempt}: {url}",
                status=Status.Running,
                source="Gateway"
            )
            raise ProviderTimeoutError(f"timed out after {self._timeout_s}s", self._provider_id, operation) from e
        except requests.RequestException as e:
            raise ProviderTransportError(f"transport failure: {e}", self._provider_id, operation) from e

        if 400 <= response.status_code < 500:
            raise ProviderRefusalError(
                f"HTTP {response.status_code}: {response.text[:200]}", self._provider_id, operation)
        if not 200 <= response.status_code < 300:
            raise ProviderTransportError(
                f"HTTP {response.status_code}: {response.text[:200]}", self._provider_id, operation)

        try:
            document = response.json()
        except ValueError as e:
            raise MalformedResponseError("response body is not JSON", self._provider_id, operation) from e
        if not isinstance(document, dict):
            raise MalformedResponseError("response body is not a JSON object", self._provider_id, operation)
        return document
