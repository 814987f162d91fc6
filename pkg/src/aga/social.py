"""Compressed per-pair dialogue state: relationship, feeling, summary events.

Each unordered agent pair shares one state.  Summary events are a
deduplicated, budget-capped digest of memory events relevant to the
conversation; relationship and feeling are short labels refreshed after
every conversation and quantizable to a 0-10 closeness score.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedder, cosine, default_embedder
from .errors import SelfDyadError
from .gateway import Category, LLMGateway, PromptRequest, estimate_tokens
from .memory import AgentMemory

log = logging.getLogger(__name__)

SUMMARY_CAP = 10
SUMMARY_TOKEN_BUDGET = 512
DEDUP_THRESHOLD = 0.9
RETRIEVE_TOP_K = 5
INITIAL_RELATIONSHIP = "Unknown"

# Closeness anchors 0-10, extended with common labels so every dyad maps
# somewhere; unlisted labels resolve to the nearest known label by
# embedding similarity.
DEFAULT_SCALE: dict[str, int] = {
    "unknown": 0,
    "strangers": 0,
    "acquaintance": 3,
    "co-worker": 5,
    "colleague": 5,
    "friend": 6,
    "close friend": 7,
    "family": 9,
    "married": 10,
}


@dataclass
class RelationshipScale:
    scores: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_SCALE))

    def __post_init__(self):
        for label, score in self.scores.items():
            if not 0 <= score <= 10:
                raise ValueError(f"score for {label!r} outside [0, 10]: {score}")


@dataclass
class DyadState:
    pair: frozenset[str]
    relationship: str = INITIAL_RELATIONSHIP
    feeling: str = ""
    summary_events: list[tuple[str, np.ndarray]] = field(default_factory=list)
    last_updated: int = 0

    @property
    def pair_key(self) -> str:
        return "-".join(sorted(self.pair))


def init_dyad(a: str, b: str) -> DyadState:
    if a == b:
        raise SelfDyadError(f"cannot create a dyad of {a!r} with itself")
    return DyadState(pair=frozenset((a, b)))


def absorb_events(dyad: DyadState, turn_text: str, memory: AgentMemory,
                  gateway: LLMGateway, now: int | None = None,
                  embedder: Embedder | None = None,
                  cap: int = SUMMARY_CAP,
                  token_budget: int = SUMMARY_TOKEN_BUDGET,
                  top_k: int = RETRIEVE_TOP_K,
                  agent: str | None = None) -> DyadState:
    """Fold memory events relevant to the turn into the summary digest.

    Near-duplicates of existing summary events are dropped; if the
    digest overflows its cap or token budget, one compression call is
    issued and its response replaces the digest.
    """
    embedder = embedder or memory.embedder
    if len(memory) == 0:
        return dyad
    for event in memory.retrieve(turn_text, top_k=top_k, now=now):
        if any(cosine(event.embedding, vec) >= DEDUP_THRESHOLD
               for _, vec in dyad.summary_events):
            continue
        dyad.summary_events.append((event.text, event.embedding))
    if len(dyad.summary_events) > cap or _summary_tokens(dyad) > token_budget:
        result = gateway.complete(PromptRequest(
            category=Category.SUMMARY_COMPRESSION,
            prompt=("Compress these events into at most "
                    f"{cap} dense summary lines:\n" + _summary_block(dyad)),
            scenario_key=dyad.pair_key,
            agent=agent,
        ))
        lines = [ln.lstrip("- ").strip() for ln in result.text.splitlines() if ln.strip()]
        dyad.summary_events = [(ln, embedder.embed(ln)) for ln in lines[:cap]]
    return dyad


def _summary_block(dyad: DyadState) -> str:
    return "\n".join(f"- {text}" for text, _ in dyad.summary_events)


def _summary_tokens(dyad: DyadState) -> int:
    return estimate_tokens(_summary_block(dyad))


def build_dialogue_prompt(dyad: DyadState, self_profile: str, last_turn: str,
                          scenario_key: str = "", agent: str | None = None) -> PromptRequest:
    prompt = (
        f"{self_profile}\n"
        f"Relationship: {dyad.relationship}, Feeling: {dyad.feeling}\n"
        f"Known events:\n{_summary_block(dyad)}\n"
        f"Last turn: {last_turn}\n"
        f"Reply with the next line of dialogue."
    )
    return PromptRequest(
        category=Category.DIALOGUE_TURN,
        prompt=prompt,
        scenario_key=scenario_key,
        agent=agent,
    )


def update_after_conversation(dyad: DyadState, transcript: list[str],
                              gateway: LLMGateway, now: int = 0,
                              scenario_key: str | None = None,
                              agent: str | None = None) -> DyadState:
    """Refresh relationship and feeling labels from a finished conversation.

    An unparseable update response keeps the previous labels.
    """
    if not transcript:
        raise ValueError("transcript must be nonempty")
    result = gateway.complete(PromptRequest(
        category=Category.DIALOGUE_UPDATE,
        prompt=("Given this conversation, answer with JSON "
                '{"relationship": <short label>, "feeling": <short label>}:\n'
                + "\n".join(transcript)),
        scenario_key=scenario_key if scenario_key is not None else dyad.pair_key,
        agent=agent,
    ))
    try:
        update = json.loads(result.text)
        relationship = str(update["relationship"])
        feeling = str(update["feeling"])
    except (json.JSONDecodeError, KeyError, TypeError):
        log.warning("unparseable relationship update for %s: %r",
                    dyad.pair_key, result.text)
        return dyad
    dyad.relationship = relationship
    dyad.feeling = feeling
    dyad.last_updated = now
    return dyad


def quantize(label: str, scale: RelationshipScale | None = None,
             embedder: Embedder | None = None) -> int:
    """Map a relationship label to its 0-10 closeness score.

    Exact (case-insensitive) lookup first; unknown labels fall back to
    the nearest known label by embedding similarity, or 0 when nothing
    is close.
    """
    scale = scale or RelationshipScale()
    embedder = embedder or default_embedder()
    key = label.strip().lower()
    if key in scale.scores:
        return scale.scores[key]
    query = embedder.embed(key)
    best_label, best_sim = None, -2.0
    for known in scale.scores:
        sim = cosine(query, embedder.embed(known))
        if sim > best_sim:
            best_label, best_sim = known, sim
    if best_label is None or best_sim < 0.5:
        log.warning("relationship label %r has no close match; scoring 0", label)
        return 0
    return scale.scores[best_label]
