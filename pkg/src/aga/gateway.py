"""Single choke point for model calls, with token accounting.

Two backends: a scripted mock that replays scenario fixtures
deterministically, and an OpenAI-compatible chat-completions HTTP
backend.  Every completion is appended to a usage ledger attributed to a
call-site category and (optionally) the requesting agent.
"""

from __future__ import annotations

import json
import math
import os
import threading
from dataclasses import dataclass, field
from enum import Enum

from .errors import BackendError, InvalidRequest, ParseError, RangeError, ScriptMiss


class Category(str, Enum):
    PLAN_GENERATION = "plan_generation"
    PLAN_DECOMPOSITION = "plan_decomposition"
    CONDITION_DERIVATION = "condition_derivation"
    DIALOGUE_TURN = "dialogue_turn"
    DIALOGUE_UPDATE = "dialogue_update"
    SUMMARY_COMPRESSION = "summary_compression"
    CRITIC = "critic"
    REFLECTION = "reflection"
    EVALUATOR = "evaluator"


def estimate_tokens(text: str) -> int:
    """ceil(len/4) heuristic used by the mock backend."""
    return math.ceil(len(text) / 4)


@dataclass(frozen=True)
class PromptRequest:
    category: Category
    prompt: str
    scenario_key: str = ""
    max_tokens: int = 1024
    agent: str | None = None


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int
    completion_tokens: int
    category: Category

    @property
    def total(self) -> int:
        return self.prompt_tokens + self.completion_tokens


@dataclass(frozen=True)
class CompletionResult:
    text: str
    usage: TokenUsage


class MockBackend:
    """Replays scripted responses keyed by (category, scenario_key).

    Lookup order: exact key, then the key with any "|..." variant suffix
    stripped, then the per-category wildcard "*".  A miss raises
    ScriptMiss to flag an incomplete fixture.
    """

    def __init__(self, entries: list[dict]):
        self._scripts: dict[tuple[str, str], str] = {}
        for entry in entries:
            self._scripts[(entry["category"], entry["key"])] = entry["response"]

    @classmethod
    def from_file(cls, path: str) -> "MockBackend":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f))

    def complete(self, request: PromptRequest) -> CompletionResult:
        category = request.category.value
        key = request.scenario_key
        text = self._scripts.get((category, key))
        if text is None and "|" in key:
            text = self._scripts.get((category, key.split("|", 1)[0]))
        if text is None:
            text = self._scripts.get((category, "*"))
        if text is None:
            raise ScriptMiss(f"no script for category={category} key={key!r}")
        usage = TokenUsage(
            prompt_tokens=estimate_tokens(request.prompt),
            completion_tokens=estimate_tokens(text),
            category=request.category,
        )
        return CompletionResult(text=text, usage=usage)


class HttpBackend:
    """OpenAI-compatible chat-completions backend.

    Endpoint and key come from AGA_LLM_URL / AGA_LLM_KEY unless given
    explicitly.  One retry on transport failure.
    """

    def __init__(self, url: str | None = None, api_key: str | None = None,
                 model: str = "gpt-3.5-turbo", retries: int = 1):
        self.url = url or os.environ.get("AGA_LLM_URL", "")
        self.api_key = api_key or os.environ.get("AGA_LLM_KEY", "")
        self.model = model
        self.retries = retries
        if not self.url:
            raise BackendError("no completion endpoint configured (AGA_LLM_URL)")

    def complete(self, request: PromptRequest) -> CompletionResult:
        import requests

        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "max_tokens": request.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_exc: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(self.url, json=payload, headers=headers, timeout=120)
                resp.raise_for_status()
                body = resp.json()
                text = body["choices"][0]["message"]["content"]
                usage = body.get("usage", {})
                return CompletionResult(
                    text=text,
                    usage=TokenUsage(
                        prompt_tokens=int(usage.get("prompt_tokens", estimate_tokens(request.prompt))),
                        completion_tokens=int(usage.get("completion_tokens", estimate_tokens(text))),
                        category=request.category,
                    ),
                )
            except Exception as exc:
                last_exc = exc
        raise BackendError(str(last_exc)) from last_exc


@dataclass
class UsageReport:
    by_category: dict[str, int]
    by_agent: dict[str, int]
    prompt_tokens: int
    completion_tokens: int

    @property
    def total(self) -> int:
        return self.prompt_tokens + self.completion_tokens


@dataclass
class _LedgerEntry:
    usage: TokenUsage
    agent: str | None


@dataclass
class LLMGateway:
    backend: object
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _ledger: list[_LedgerEntry] = field(default_factory=list, repr=False)

    def complete(self, request: PromptRequest) -> CompletionResult:
        if not request.prompt:
            raise InvalidRequest("prompt must be nonempty")
        result = self.backend.complete(request)
        with self._lock:
            self._ledger.append(_LedgerEntry(usage=result.usage, agent=request.agent))
        return result

    @property
    def ledger(self) -> list[_LedgerEntry]:
        with self._lock:
            return list(self._ledger)

    def call_count(self, category: Category | None = None) -> int:
        with self._lock:
            if category is None:
                return len(self._ledger)
            return sum(1 for e in self._ledger if e.usage.category is category)

    def usage_report(self) -> UsageReport:
        by_category = {c.value: 0 for c in Category}
        by_agent: dict[str, int] = {}
        prompt = completion = 0
        with self._lock:
            for entry in self._ledger:
                by_category[entry.usage.category.value] += entry.usage.total
                if entry.agent is not None:
                    by_agent[entry.agent] = by_agent.get(entry.agent, 0) + entry.usage.total
                prompt += entry.usage.prompt_tokens
                completion += entry.usage.completion_tokens
        return UsageReport(
            by_category=by_category,
            by_agent=dict(sorted(by_agent.items())),
            prompt_tokens=prompt,
            completion_tokens=completion,
        )

    def reset(self) -> None:
        with self._lock:
            self._ledger.clear()


def parse_score_response(text: str) -> tuple[float, str]:
    """Extract (score, reason) from the first JSON object containing both.

    Accepts integer or fractional scores; scores outside [1, 5] raise
    RangeError, unparseable text raises ParseError.
    """
    for start in range(len(text)):
        if text[start] != "{":
            continue
        depth = 0
        for end in range(start, len(text)):
            if text[end] == "{":
                depth += 1
            elif text[end] == "}":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(text[start:end + 1])
                    except json.JSONDecodeError:
                        break
                    if isinstance(obj, dict) and "score" in obj and "reason" in obj:
                        score = float(obj["score"])
                        if not 1.0 <= score <= 5.0:
                            raise RangeError(f"score {score} outside [1, 5]")
                        return score, str(obj["reason"])
                    break
    raise ParseError("no JSON object with 'score' and 'reason' found")
