"""Dyad state: digest absorption, compression, updates, and quantization."""

import json

import pytest

from aga.errors import SelfDyadError
from aga.gateway import Category, LLMGateway, MockBackend
from aga.memory import AgentMemory
from aga.social import (DEFAULT_SCALE, INITIAL_RELATIONSHIP, RelationshipScale,
                        SUMMARY_CAP, absorb_events, build_dialogue_prompt,
                        init_dyad, quantize, update_after_conversation)


def gateway_with(entries):
    return LLMGateway(backend=MockBackend(entries))


@pytest.fixture
def dyad():
    return init_dyad("KM", "ML")


def test_init_dyad_defaults(dyad):
    assert dyad.relationship == INITIAL_RELATIONSHIP == "Unknown"
    assert dyad.feeling == ""
    assert dyad.summary_events == []
    assert dyad.pair == frozenset({"KM", "ML"})
    assert dyad.pair_key == "KM-ML"


def test_pair_key_is_order_independent():
    assert init_dyad("ML", "KM").pair_key == init_dyad("KM", "ML").pair_key


def test_self_dyad_rejected():
    with pytest.raises(SelfDyadError):
        init_dyad("KM", "KM")


def test_absorb_adds_relevant_events(dyad, embedder):
    memory = AgentMemory(embedder)
    memory.add_event("shared a table at the cafe", tick=0, importance=5)
    memory.add_event("discussed thesis chapters", tick=1, importance=5)
    gw = gateway_with([])
    absorb_events(dyad, "meeting at the cafe", memory, gw)
    assert len(dyad.summary_events) == 2
    assert gw.call_count() == 0  # no compression below the cap


def test_absorb_dedups_near_duplicates(dyad, embedder):
    memory = AgentMemory(embedder)
    memory.add_event("shared a table at the cafe", tick=0, importance=5)
    gw = gateway_with([])
    absorb_events(dyad, "cafe", memory, gw)
    memory.add_event("shared a table at the cafe", tick=1, importance=5)
    absorb_events(dyad, "cafe", memory, gw)
    assert len(dyad.summary_events) == 1


def test_absorb_empty_memory_is_noop(dyad, embedder):
    gw = gateway_with([])
    absorb_events(dyad, "anything", AgentMemory(embedder), gw)
    assert dyad.summary_events == []


def test_overflow_triggers_one_compression_call(dyad, embedder):
    memory = AgentMemory(embedder)
    texts = [f"event number {i} about topic {i}" for i in range(2 * SUMMARY_CAP)]
    for i, text in enumerate(texts):
        memory.add_event(text, tick=i, importance=5)
    gw = gateway_with([{"category": "summary_compression", "key": "*",
                        "response": "they keep meeting at the cafe"}])
    absorb_events(dyad, "topic 0", memory, gw, top_k=2 * SUMMARY_CAP)
    assert gw.call_count(Category.SUMMARY_COMPRESSION) == 1
    # the compression response replaced the digest
    assert any(text == "they keep meeting at the cafe"
               for text, _ in dyad.summary_events)
    assert len(dyad.summary_events) <= SUMMARY_CAP


def test_dialogue_prompt_mentions_state(dyad, embedder):
    memory = AgentMemory(embedder)
    memory.add_event("won a chess game together", tick=0, importance=5)
    absorb_events(dyad, "chess", memory, gateway_with([]))
    dyad.relationship = "friend"
    dyad.feeling = "happy"
    request = build_dialogue_prompt(dyad, "KM: a student.", "Hi!", scenario_key="e:0")
    assert request.category is Category.DIALOGUE_TURN
    assert "Relationship: friend, Feeling: happy" in request.prompt
    assert "won a chess game together" in request.prompt
    assert "Last turn: Hi!" in request.prompt


def test_update_after_conversation_parses_labels(dyad):
    gw = gateway_with([{"category": "dialogue_update", "key": "enc",
                        "response": json.dumps({"relationship": "colleague",
                                                "feeling": "friendly"})}])
    update_after_conversation(dyad, ["KM: hi", "ML: hello"], gw, now=7,
                              scenario_key="enc")
    assert dyad.relationship == "colleague"
    assert dyad.feeling == "friendly"
    assert dyad.last_updated == 7


def test_update_keeps_labels_on_unparseable_response(dyad):
    dyad.relationship = "friend"
    gw = gateway_with([{"category": "dialogue_update", "key": "enc",
                        "response": "they get along fine"}])
    update_after_conversation(dyad, ["KM: hi"], gw, scenario_key="enc")
    assert dyad.relationship == "friend"


def test_update_requires_transcript(dyad):
    with pytest.raises(ValueError):
        update_after_conversation(dyad, [], gateway_with([]))


# -- quantization --

@pytest.mark.parametrize("label,score", sorted(DEFAULT_SCALE.items()))
def test_quantize_anchor_labels(label, score, embedder):
    assert quantize(label, embedder=embedder) == score


def test_quantize_is_case_insensitive(embedder):
    assert quantize("Colleague", embedder=embedder) == 5
    assert quantize("  MARRIED ", embedder=embedder) == 10


def test_quantize_unknown_label_near_anchor(embedder):
    # shares a token with the "close friend" anchor
    assert quantize("close friend forever", embedder=embedder) == \
        DEFAULT_SCALE["close friend"]


def test_quantize_unrelated_label_scores_zero(embedder):
    assert quantize("xylophone enthusiast", embedder=embedder) == 0


def test_scale_validation():
    with pytest.raises(ValueError):
        RelationshipScale({"nemesis": -1})
    with pytest.raises(ValueError):
        RelationshipScale({"soulmate": 11})
