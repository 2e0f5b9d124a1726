import json
import os
import threading
import time

import pytest
import requests

from src.constants import NONE_OPTION_NAME
from src.llm_gateway.base import CompletionProvider, complete, score_target
from src.llm_gateway.errors import (
    MalformedResponseError,
    ProviderError,
    ProviderRefusalError,
    ProviderTimeoutError,
    ProviderTransportError,
    ScoringUnsupportedError,
)
from src.llm_gateway.http_transport import MAX_TIMEOUT_RETRIES, HttpTransport
from src.llm_gateway.mock import (
    LOGPROB_CEILING,
    LOGPROB_FLOOR,
    HashScoringProvider,
    OracleCompletionProvider,
    ScriptedCompletionProvider,
    prompt_intent_names,
    prompt_sentence,
    pseudo_logprob,
    tokenize_target,
)
from src.llm_gateway.models import (
    CompletionRequest,
    GenerationParams,
    TokenLogProbs,
    augmentation_preset,
    zero_shot_preset,
)
from src.llm_gateway.pool import map_bounded
from src.llm_gateway.remote import RemoteCompletionProvider
from src.zeroshot.prompt import build_zero_shot_prompt

REMOTE_CONFIG = os.path.join(os.path.dirname(__file__), os.pardir, "config", "remote.json")


class FakeResponse:
    def __init__(self, status_code=200, document=None, text=None):
        self.status_code = status_code
        self._document = document
        self.text = text if text is not None else json.dumps(document)

    def json(self):
        if self._document is None:
            raise ValueError("no JSON")
        return self._document


def _scripted_session(monkeypatch, transport, responses):
    """Replays responses (or raises exceptions) in order; records every call."""
    calls = []
    queue = list(responses)

    def fake_post(url, data=None, headers=None, timeout=None):
        calls.append({"url": url, "data": data, "headers": headers, "timeout": timeout})
        outcome = queue.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome

    monkeypatch.setattr(transport.session, "post", fake_post)
    return calls


def test_request_validation():
    with pytest.raises(ValueError):
        CompletionRequest(prompt="")
    with pytest.raises(ValueError):
        CompletionRequest(prompt="x", top_p=0.0)
    with pytest.raises(ValueError):
        CompletionRequest(prompt="x", temperature=-1)
    with pytest.raises(ValueError):
        CompletionRequest(prompt="x", max_tokens=0)


def test_token_logprobs_validation():
    assert TokenLogProbs("a b", (-1.0, -2.0)).mean == -1.5
    with pytest.raises(ValueError):
        TokenLogProbs("a", (0.5,))
    with pytest.raises(ValueError):
        TokenLogProbs("a", (float("nan"),))
    with pytest.raises(ValueError):
        TokenLogProbs("a", ())


def test_presets():
    preset = augmentation_preset()
    assert (preset.temperature, preset.top_p, preset.max_tokens) == (0.9, 0.95, 512)
    assert zero_shot_preset().temperature == 0.0


def test_generation_params_overrides():
    params = zero_shot_preset().with_overrides({"temperature": 0.7, "unknown": 1})
    assert params.temperature == 0.7
    assert params.max_tokens == 20
    with pytest.raises(ValueError):
        zero_shot_preset().with_overrides({"top_p": 2.0})


def test_scripted_provider_exact_then_regex_then_default():
    provider = ScriptedCompletionProvider(
        responses={"hello": "exact"},
        patterns=[(r"alarm", "alarm_set")],
        default="fallback",
    )
    assert complete(provider, CompletionRequest("hello")).text == "exact"
    assert provider.complete(CompletionRequest("set an alarm")).text == "alarm_set"
    assert provider.complete(CompletionRequest("other")).text == "fallback"
    assert provider.request_count == 3
    assert not provider.supports_scoring
    with pytest.raises(ScoringUnsupportedError):
        provider.score_target("prompt", "alarm_set")


def test_unexpected_exceptions_are_wrapped():
    class Exploding(CompletionProvider):
        provider_id = "exploding"

        def _complete(self, request):
            raise KeyError("boom")

    with pytest.raises(ProviderError) as info:
        Exploding().complete(CompletionRequest("x"))
    assert info.value.provider_id == "exploding"
    assert info.value.operation == "complete"


def test_non_string_completion_is_malformed():
    class Numeric(CompletionProvider):
        def _complete(self, request):
            return 42

    with pytest.raises(MalformedResponseError):
        Numeric().complete(CompletionRequest("x"))


def test_hash_scoring_is_deterministic_and_bounded():
    provider = HashScoringProvider(preferred=["alarm_set"])
    first = score_target(provider, "prompt", "play_podcasts")
    assert first == provider.score_target("prompt", "play_podcasts")
    assert first.token_count == len(tokenize_target("play_podcasts"))
    assert all(LOGPROB_FLOOR <= v <= LOGPROB_CEILING for v in first.logprobs)
    assert provider.score_target("prompt", "alarm_set").logprobs == (LOGPROB_CEILING,) * 3
    with pytest.raises(ValueError):
        provider.score_target("prompt", "")


def test_tokenize_target():
    assert tokenize_target("alarm_set") == ["alarm", "_", "set"]
    assert tokenize_target("play podcasts") == ["play", "podcasts"]
    assert LOGPROB_FLOOR <= pseudo_logprob("p", "t") <= LOGPROB_CEILING


def test_prompt_helpers(small_dataset):
    prompt = build_zero_shot_prompt(small_dataset.intents, "wake me up at 7am")
    assert prompt_sentence(prompt) == "wake me up at 7am"
    assert prompt_intent_names(prompt) == small_dataset.intent_names + [NONE_OPTION_NAME]
    assert prompt_sentence("Create 20 utterances:") is None


def test_oracle_answers_gold_and_none(small_dataset):
    oracle = OracleCompletionProvider(small_dataset)
    ask = lambda text, intents=small_dataset.intents: oracle.complete(  # noqa: E731
        CompletionRequest(build_zero_shot_prompt(intents, text))).text

    assert ask("wake me up at 7am") == "alarm_set"
    assert ask("what is the capital of peru") == NONE_OPTION_NAME
    assert ask("a sentence nobody labeled") == NONE_OPTION_NAME
    assert ask("wake me up at 7am", [small_dataset.intent("iot_cleaning")]) == NONE_OPTION_NAME


def test_oracle_scores_gold_highest(small_dataset):
    oracle = OracleCompletionProvider(small_dataset)
    prompt = build_zero_shot_prompt(small_dataset.intents, "vacuum the living room")
    scores = {name: oracle.score_target(prompt, name).mean for name in small_dataset.intent_names}
    assert max(scores, key=scores.get) == "iot_cleaning"


def test_oracle_description_augmentation(small_dataset):
    oracle = OracleCompletionProvider(small_dataset)
    prompt = "A virtual assistant serves multiple intents.\nGenerate 2 utterances for alarm_set intent:"
    assert oracle.complete(CompletionRequest(prompt)).text == "1. wake me up at seven\n2. alarm for ten am"


def test_remote_completion_payload_and_auth(monkeypatch):
    monkeypatch.setenv("TEST_LLM_TOKEN", "secret-token")
    provider = RemoteCompletionProvider("http://llm/complete", provider_id="llm",
                                        token_env="TEST_LLM_TOKEN", backoff_s=0)
    calls = _scripted_session(monkeypatch, provider.transport, [FakeResponse(200, {"text": " alarm_set"})])

    prompt = "Café ☕ prompt\nIntent:"
    result = provider.complete(GenerationParams(0.0, 1.0, 20).request(prompt))

    assert result.text == " alarm_set"
    assert result.provider_id == "llm"
    sent = json.loads(calls[0]["data"].decode("utf-8"))
    assert sent == {"prompt": prompt, "temperature": 0.0, "top_p": 1.0, "max_tokens": 20, "stop": []}
    assert calls[0]["headers"]["Authorization"] == "Bearer secret-token"


def test_missing_credential_is_refusal(monkeypatch):
    monkeypatch.delenv("TEST_LLM_TOKEN", raising=False)
    provider = RemoteCompletionProvider("http://llm/complete", token_env="TEST_LLM_TOKEN", backoff_s=0)
    with pytest.raises(ProviderRefusalError):
        provider.complete(CompletionRequest("x"))


def test_timeouts_are_retried_then_succeed(monkeypatch):
    transport = HttpTransport("llm", max_retries=2, backoff_s=0)
    calls = _scripted_session(monkeypatch, transport, [
        requests.Timeout("slow"), requests.Timeout("slow"), FakeResponse(200, {"text": "ok"}),
    ])
    assert transport.post_json("http://llm", {"prompt": "x"}, "complete") == {"text": "ok"}
    assert len(calls) == 3
    assert transport.request_count == 3


def test_timeouts_exhaust_retries(monkeypatch):
    transport = HttpTransport("llm", max_retries=1, backoff_s=0)
    calls = _scripted_session(monkeypatch, transport, [requests.Timeout("slow")] * 2)
    with pytest.raises(ProviderTimeoutError):
        transport.post_json("http://llm", {"prompt": "x"}, "complete")
    assert len(calls) == 2


def test_shipped_remote_config_respects_retry_cap(monkeypatch):
    with open(REMOTE_CONFIG, "r", encoding="utf-8") as f:
        providers = json.load(f)["providers"]
    for section in ("embedding", "completion"):
        transport = HttpTransport("llm", max_retries=providers[section]["max_retries"], backoff_s=0)
        calls = _scripted_session(monkeypatch, transport, [requests.Timeout("slow")] * 5)
        with pytest.raises(ProviderTimeoutError):
            transport.post_json("http://llm", {"prompt": "x"}, "complete")
        assert len(calls) - 1 <= MAX_TIMEOUT_RETRIES


def test_retry_cap_is_enforced():
    for retries in (-1, MAX_TIMEOUT_RETRIES + 1):
        with pytest.raises(ValueError):
            HttpTransport("llm", max_retries=retries)


@pytest.mark.parametrize("response, error", [
    (FakeResponse(500, {"error": "down"}), ProviderTransportError),
    (FakeResponse(429, {"error": "slow down"}), ProviderRefusalError),
    (FakeResponse(200, None, text="<html>"), MalformedResponseError),
    (FakeResponse(200, ["not", "an", "object"]), MalformedResponseError),
    (requests.ConnectionError("refused"), ProviderTransportError),
])
def test_non_timeout_failures_are_not_retried(monkeypatch, response, error):
    transport = HttpTransport("llm", max_retries=2, backoff_s=0)
    calls = _scripted_session(monkeypatch, transport, [response])
    with pytest.raises(error):
        transport.post_json("http://llm", {"prompt": "x"}, "complete")
    assert len(calls) == 1


def test_remote_scoring(monkeypatch):
    provider = RemoteCompletionProvider("http://llm/complete", scoring_url="http://llm/score", backoff_s=0)
    assert provider.supports_scoring
    calls = _scripted_session(monkeypatch, provider.transport, [
        FakeResponse(200, {"logprobs": [-0.5, -1.5]}),
        FakeResponse(200, {"logprobs": [0.3]}),
        FakeResponse(200, {"text": "no logprobs"}),
    ])
    assert provider.score_target("p", "alarm_set").logprobs == (-0.5, -1.5)
    assert json.loads(calls[0]["data"]) == {"prompt": "p", "target": "alarm_set"}
    with pytest.raises(MalformedResponseError):
        provider.score_target("p", "alarm_set")
    with pytest.raises(MalformedResponseError):
        provider.score_target("p", "alarm_set")


def test_remote_without_scoring_endpoint():
    provider = RemoteCompletionProvider("http://llm/complete")
    assert not provider.supports_scoring
    with pytest.raises(ScoringUnsupportedError):
        provider.score_target("p", "alarm_set")


def test_map_bounded_keeps_order_and_bounds_concurrency():
    active = []
    peak = []
    lock = threading.Lock()

    def work(item):
        with lock:
            active.append(item)
            peak.append(len(active))
        time.sleep(0.01)
        with lock:
            active.remove(item)
        return item * 2

    assert map_bounded(work, range(12), max_workers=3) == [i * 2 for i in range(12)]
    assert max(peak) <= 3


def test_map_bounded_exceptions():
    def work(item):
        if item % 2:
            raise ValueError(f"odd {item}")
        return item

    with pytest.raises(ValueError, match="odd 1"):
        map_bounded(work, range(4), max_workers=2)
    outcomes = map_bounded(work, range(4), max_workers=2, return_exceptions=True)
    assert outcomes[0] == 0 and outcomes[2] == 2
    assert isinstance(outcomes[1], ValueError) and isinstance(outcomes[3], ValueError)
