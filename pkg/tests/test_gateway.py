"""Gateway accounting, mock lookup order, and score-response parsing."""

import math

import pytest

from aga.errors import BackendError, InvalidRequest, ParseError, RangeError, ScriptMiss
from aga.gateway import (Category, HttpBackend, LLMGateway, MockBackend,
                         PromptRequest, estimate_tokens, parse_score_response)


def make_gateway(entries):
    return LLMGateway(backend=MockBackend(entries))


def req(category=Category.PLAN_GENERATION, prompt="p" * 8, key="k", agent=None):
    return PromptRequest(category=category, prompt=prompt, scenario_key=key, agent=agent)


def test_estimate_tokens_is_ceil_len_over_4():
    assert estimate_tokens("") == 0
    assert estimate_tokens("abc") == 1
    assert estimate_tokens("abcd") == 1
    assert estimate_tokens("abcde") == 2


def test_mock_exact_lookup_and_usage():
    gw = make_gateway([{"category": "plan_generation", "key": "k", "response": "hello"}])
    result = gw.complete(req(prompt="x" * 9))
    assert result.text == "hello"
    assert result.usage.prompt_tokens == math.ceil(9 / 4)
    assert result.usage.completion_tokens == math.ceil(5 / 4)
    assert result.usage.total == result.usage.prompt_tokens + result.usage.completion_tokens


def test_mock_variant_suffix_falls_back_to_base_key():
    gw = make_gateway([{"category": "plan_generation", "key": "base", "response": "B"},
                       {"category": "plan_generation", "key": "base|w7", "response": "V"}])
    assert gw.complete(req(key="base|w7")).text == "V"
    assert gw.complete(req(key="base|w99")).text == "B"


def test_mock_wildcard_fallback():
    gw = make_gateway([{"category": "critic", "key": "*", "response": "no"}])
    assert gw.complete(req(category=Category.CRITIC, key="whatever")).text == "no"


def test_mock_miss_raises_scriptmiss():
    gw = make_gateway([])
    with pytest.raises(ScriptMiss):
        gw.complete(req())


def test_empty_prompt_rejected():
    gw = make_gateway([{"category": "plan_generation", "key": "k", "response": "r"}])
    with pytest.raises(InvalidRequest):
        gw.complete(PromptRequest(category=Category.PLAN_GENERATION, prompt="",
                                  scenario_key="k"))
    assert gw.call_count() == 0  # rejected requests are not billed


def test_ledger_by_category_and_agent():
    gw = make_gateway([{"category": "plan_generation", "key": "k", "response": "yyyy"},
                       {"category": "critic", "key": "k", "response": "no"}])
    gw.complete(req(prompt="a" * 8, agent="KM"))
    gw.complete(req(prompt="a" * 8, agent="KM"))
    gw.complete(req(category=Category.CRITIC, prompt="a" * 4, agent="ML"))
    report = gw.usage_report()
    assert gw.call_count() == 3
    assert gw.call_count(Category.PLAN_GENERATION) == 2
    assert gw.call_count(Category.CRITIC) == 0 + 1
    assert set(report.by_category) == {c.value for c in Category}  # all keys present
    assert report.by_category["plan_generation"] == 2 * (2 + 1)
    assert report.by_category["critic"] == 1 + 1
    assert report.by_category["reflection"] == 0
    assert report.by_agent == {"KM": 6, "ML": 2}
    assert report.total == report.prompt_tokens + report.completion_tokens
    assert report.total == sum(report.by_category.values())


def test_reset_clears_ledger():
    gw = make_gateway([{"category": "plan_generation", "key": "k", "response": "r"}])
    gw.complete(req())
    gw.reset()
    assert gw.call_count() == 0
    assert gw.usage_report().total == 0


def test_parse_score_response_plain():
    score, reason = parse_score_response('{"reason": "sounds human", "score": 4}')
    assert score == 4.0
    assert reason == "sounds human"


def test_parse_score_response_embedded_and_fractional():
    text = 'Sure! Here is my answer:\n{"reason": "mixed", "score": 4.5}\nThanks.'
    score, reason = parse_score_response(text)
    assert score == 4.5
    assert reason == "mixed"


def test_parse_score_response_range():
    with pytest.raises(RangeError):
        parse_score_response('{"reason": "r", "score": 7}')


def test_parse_score_response_unparseable():
    with pytest.raises(ParseError):
        parse_score_response("I would rate this a 4 out of 5.")


def test_http_backend_requires_url(monkeypatch):
    monkeypatch.delenv("AGA_LLM_URL", raising=False)
    with pytest.raises(BackendError):
        HttpBackend()


def test_http_backend_retries_then_raises(monkeypatch):
    monkeypatch.setenv("AGA_LLM_URL", "http://localhost:1/v1/chat/completions")
    backend = HttpBackend(retries=1)
    calls = {"n": 0}

    class FailingSession:
        @staticmethod
        def post(*args, **kwargs):
            calls["n"] += 1
            raise OSError("connection refused")

    monkeypatch.setattr("requests.post", FailingSession.post)
    with pytest.raises(BackendError):
        backend.complete(req())
    assert calls["n"] == 2  # initial attempt + one retry


def test_http_backend_parses_openai_shape(monkeypatch):
    monkeypatch.setenv("AGA_LLM_URL", "http://example.invalid")

    class FakeResponse:
        @staticmethod
        def raise_for_status():
            pass

        @staticmethod
        def json():
            return {"choices": [{"message": {"content": "hi there"}}],
                    "usage": {"prompt_tokens": 11, "completion_tokens": 3}}

    monkeypatch.setattr("requests.post", lambda *a, **k: FakeResponse())
    result = HttpBackend().complete(req())
    assert result.text == "hi there"
    assert result.usage.prompt_tokens == 11
    assert result.usage.completion_tokens == 3
