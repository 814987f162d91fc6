"""Action grammar parsing/rendering and world execution semantics."""

import pytest

from aga.errors import (CommandSyntaxError, NoSuchItem, PreconditionFailed,
                        UnknownVerb)
from aga.world import (ActionCommand, ForbiddenSet, HAND_CAPACITY, ItemClass,
                       VERBS, execute, observe, parse_command, render_command)

from conftest import make_env


# -- grammar --

def test_parse_basic_command():
    cmd = parse_command("<char0> [walk] <curtains> (32)")
    assert cmd == ActionCommand(0, "walk", "curtains", 32)


def test_parse_tolerates_whitespace():
    cmd = parse_command("  <char12>   [grab]  < coffee_maker >  ( 7 )  ")
    assert cmd == ActionCommand(12, "grab", "coffee_maker", 7)


def test_render_round_trip():
    cmd = ActionCommand(3, "switchon", "tv", 31)
    assert parse_command(render_command(cmd)) == cmd


@pytest.mark.parametrize("bad", [
    "",
    "walk curtains",
    "<char> [walk] <curtains> (32)",
    "<char0> [walk] <curtains> 32",
    "<char0> walk <curtains> (32)",
    "<char0> [walk] curtains (32)",
    "<char0> [walk] <curtains> (-2)",
    "<char0> [walk] <curtains> (32) extra",
])
def test_parse_rejects_malformed(bad):
    with pytest.raises(CommandSyntaxError):
        parse_command(bad)


def test_parse_rejects_unknown_verb():
    with pytest.raises(CommandSyntaxError):
        parse_command("<char0> [teleport] <curtains> (32)")


def test_action_command_validates_verb():
    with pytest.raises(UnknownVerb):
        ActionCommand(0, "fly", "bed", 1)


def test_with_agent_retargets_index():
    cmd = parse_command("<char0> [sit] <chair> (5)")
    assert render_command(cmd.with_agent(2)) == "<char2> [sit] <chair> (5)"


# -- item classes --

def test_item_class_state_validation():
    with pytest.raises(ValueError):
        ItemClass("door", frozenset({"CAN_OPEN"}))  # missing OPEN/CLOSED state
    with pytest.raises(ValueError):
        ItemClass("fan", frozenset({"HAS_SWITCH"}), initial_state="OPEN")
    with pytest.raises(ValueError):
        ItemClass("blob", frozenset({"WOBBLY"}))


# -- execution --

@pytest.fixture
def env():
    return make_env([
        (1, "room_a", (), "room_a", None),
        (2, "room_b", (), "room_b", None),
        (10, "mug", ("GRABBABLE",), "room_a", None),
        (11, "mug", ("GRABBABLE",), "room_a", None),
        (12, "book", ("GRABBABLE",), "room_b", None),
        (20, "lamp", ("HAS_SWITCH",), "room_a", "OFF"),
        (21, "box", ("CAN_OPEN",), "room_a", "CLOSED"),
        (30, "chair", ("SITTABLE",), "room_a", None),
        (31, "bed", ("LIEABLE",), "room_a", None),
    ], agents=("A", "B"))


def test_execute_returns_new_snapshot(env):
    out = execute(parse_command("<char0> [grab] <mug> (10)"), env)
    assert out is not env
    assert 10 in out.held_items["A"]
    assert 10 not in env.held_items["A"]


def test_walk_moves_to_items_room_and_stands_up(env):
    seated = execute(parse_command("<char0> [sit] <chair> (30)"), env)
    assert seated.seated["A"] == 30
    out = execute(parse_command("<char0> [walk] <room_b> (2)"), seated)
    assert out.agent_positions["A"] == "room_b"
    assert "A" not in out.seated


def test_grab_requires_same_room(env):
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [grab] <book> (12)"), env)


def test_grab_requires_grabbable(env):
    with pytest.raises(PreconditionFailed) as info:
        execute(parse_command("<char0> [grab] <chair> (30)"), env)
    assert info.value.reason == "GRABBABLE"


def test_grab_respects_hand_capacity(env):
    env = execute(parse_command("<char0> [grab] <mug> (10)"), env)
    env = execute(parse_command("<char0> [grab] <mug> (11)"), env)
    assert len(env.held_items["A"]) == HAND_CAPACITY
    env.items[13] = env.items[10].__class__(
        id=13, item_class=env.items[10].item_class, room="room_a", state=None)
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [grab] <mug> (13)"), env)


def test_item_held_by_someone_else_cannot_be_grabbed(env):
    env = execute(parse_command("<char1> [grab] <mug> (10)"), env)
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [grab] <mug> (10)"), env)


def test_putback_drops_in_current_room(env):
    env = execute(parse_command("<char0> [grab] <mug> (10)"), env)
    env = execute(parse_command("<char0> [walk] <room_b> (2)"), env)
    env = execute(parse_command("<char0> [putback] <mug> (10)"), env)
    assert env.items[10].room == "room_b"
    assert 10 not in env.held_items["A"]


def test_putback_requires_held(env):
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [putback] <mug> (10)"), env)


def test_switch_toggles_and_rejects_same_state(env):
    on = execute(parse_command("<char0> [switchon] <lamp> (20)"), env)
    assert on.items[20].state == "ON"
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [switchon] <lamp> (20)"), on)
    off = execute(parse_command("<char0> [switchoff] <lamp> (20)"), on)
    assert off.items[20].state == "OFF"


def test_open_close_cycle(env):
    opened = execute(parse_command("<char0> [open] <box> (21)"), env)
    assert opened.items[21].state == "OPEN"
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [open] <box> (21)"), opened)
    closed = execute(parse_command("<char0> [close] <box> (21)"), opened)
    assert closed.items[21].state == "CLOSED"


def test_sit_lie_standup(env):
    env = execute(parse_command("<char0> [lie] <bed> (31)"), env)
    assert env.seated["A"] == 31
    env = execute(parse_command("<char0> [standup] <bed> (31)"), env)
    assert "A" not in env.seated
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [standup] <bed> (31)"), env)


def test_missing_item_raises_nosuchitem(env):
    with pytest.raises(NoSuchItem):
        execute(parse_command("<char0> [walk] <room_a> (99)"), env)


def test_class_mismatch_rejected(env):
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [grab] <book> (10)"), env)


def test_failed_execution_leaves_snapshot_untouched(env):
    digest = env.digest()
    with pytest.raises(PreconditionFailed):
        execute(parse_command("<char0> [grab] <book> (12)"), env)
    assert env.digest() == digest


def test_digest_tracks_state(env):
    before = env.digest()
    after = execute(parse_command("<char0> [switchon] <lamp> (20)"), env).digest()
    assert before != after


def test_observe_reports_room_and_full_catalog(env):
    obs = observe(env, "A")
    assert obs.room == "room_a"
    assert set(obs.item_classes) == env.class_names()
    assert list(obs.item_classes) == sorted(obs.item_classes)


def test_forbidden_set_keeps_first_reason():
    fs = ForbiddenSet()
    fs.add("<char0> [grab] <sofa> (30)", "GRABBABLE")
    fs.add("<char0> [grab] <sofa> (30)", "other")
    assert "<char0> [grab] <sofa> (30)" in fs
    assert len(fs) == 1
    assert fs.lines() == ["<char0> [grab] <sofa> (30) (GRABBABLE)"]


def test_verb_inventory_is_closed():
    assert len(VERBS) == 10
