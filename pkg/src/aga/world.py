"""Simulated home world: typed items, the action grammar, and execution.

Items carry interaction properties (GRABBABLE, HAS_SWITCH, ...) and
optional binary states (ON/OFF, OPEN/CLOSED).  Commands follow the
grammar ``<char{N}> [{verb}] <{class}> ({id})`` and execute against an
immutable snapshot, returning an updated copy; failures leave the
snapshot untouched.
"""

from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import dataclass, field

from .errors import CommandSyntaxError, NoSuchItem, PreconditionFailed, UnknownVerb

VERBS = ("walk", "grab", "open", "close", "switchon", "switchoff",
         "sit", "standup", "putback", "lie")

PROPERTIES = ("GRABBABLE", "SITTABLE", "LIEABLE", "HAS_SWITCH",
              "CAN_OPEN", "SURFACE", "CONTAINER")

HAND_CAPACITY = 2

# Property each verb demands of its target item; walk/putback/standup
# only require existence.
VERB_PROPERTY: dict[str, str | None] = {
    "walk": None,
    "grab": "GRABBABLE",
    "open": "CAN_OPEN",
    "close": "CAN_OPEN",
    "switchon": "HAS_SWITCH",
    "switchoff": "HAS_SWITCH",
    "sit": "SITTABLE",
    "lie": "LIEABLE",
    "putback": None,
    "standup": None,
}

STATE_VERBS = ("open", "close", "switchon", "switchoff")


@dataclass(frozen=True)
class ItemClass:
    name: str
    properties: frozenset[str] = frozenset()
    initial_state: str | None = None

    def __post_init__(self):
        unknown = self.properties - set(PROPERTIES)
        if unknown:
            raise ValueError(f"unknown properties for {self.name}: {sorted(unknown)}")
        if "CAN_OPEN" in self.properties and self.initial_state not in ("OPEN", "CLOSED"):
            raise ValueError(f"{self.name}: CAN_OPEN requires OPEN/CLOSED initial state")
        if "HAS_SWITCH" in self.properties and self.initial_state not in ("ON", "OFF"):
            raise ValueError(f"{self.name}: HAS_SWITCH requires ON/OFF initial state")


@dataclass
class Item:
    id: int
    item_class: ItemClass
    room: str
    state: str | None = None


@dataclass
class EnvironmentSnapshot:
    rooms: tuple[str, ...]
    items: dict[int, Item]
    agents: tuple[str, ...]  # index order for <charN>
    agent_positions: dict[str, str]
    held_items: dict[str, set[int]] = field(default_factory=dict)
    seated: dict[str, int] = field(default_factory=dict)

    def copy(self) -> "EnvironmentSnapshot":
        return EnvironmentSnapshot(
            rooms=self.rooms,
            items={i: Item(it.id, it.item_class, it.room, it.state)
                   for i, it in self.items.items()},
            agents=self.agents,
            agent_positions=dict(self.agent_positions),
            held_items={a: set(ids) for a, ids in self.held_items.items()},
            seated=dict(self.seated),
        )

    def agent_at(self, index: int) -> str:
        if not 0 <= index < len(self.agents):
            raise PreconditionFailed(f"no agent with index {index}")
        return self.agents[index]

    def items_of_class(self, class_name: str) -> list[Item]:
        return [it for it in self.items.values() if it.item_class.name == class_name]

    def class_names(self) -> set[str]:
        return {it.item_class.name for it in self.items.values()}

    def digest(self) -> str:
        payload = {
            "rooms": list(self.rooms),
            "items": [[it.id, it.item_class.name, it.room, it.state]
                      for it in sorted(self.items.values(), key=lambda i: i.id)],
            "agents": list(self.agents),
            "positions": sorted(self.agent_positions.items()),
            "held": sorted((a, sorted(ids)) for a, ids in self.held_items.items()),
            "seated": sorted(self.seated.items()),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class ActionCommand:
    agent_index: int
    verb: str
    item_class: str
    item_id: int

    def __post_init__(self):
        if self.verb not in VERBS:
            raise UnknownVerb(f"unknown verb: {self.verb}")
        if self.item_id < 0:
            raise ValueError(f"item id must be >= 0, got {self.item_id}")

    def with_agent(self, index: int) -> "ActionCommand":
        return ActionCommand(index, self.verb, self.item_class, self.item_id)


_COMMAND_RE = re.compile(
    r"^\s*<\s*char(\d+)\s*>\s*\[\s*([a-z]+)\s*\]\s*<\s*([A-Za-z0-9_ ]+?)\s*>\s*\(\s*(\d+)\s*\)\s*$"
)


def parse_command(text: str) -> ActionCommand:
    m = _COMMAND_RE.match(text)
    if not m:
        # report where the match broke down for easier fixture debugging
        stripped = text.lstrip()
        pos = len(text) - len(stripped)
        raise CommandSyntaxError(f"malformed action command: {text!r}", position=pos)
    verb = m.group(2)
    if verb not in VERBS:
        raise CommandSyntaxError(f"unknown verb {verb!r} in {text!r}", position=m.start(2))
    return ActionCommand(int(m.group(1)), verb, m.group(3), int(m.group(4)))


def render_command(cmd: ActionCommand) -> str:
    return f"<char{cmd.agent_index}> [{cmd.verb}] <{cmd.item_class}> ({cmd.item_id})"


@dataclass(frozen=True)
class Observation:
    """What an agent perceives when planning: its room and the item catalog."""
    room: str
    item_classes: tuple[str, ...]


def observe(env: EnvironmentSnapshot, agent: str) -> Observation:
    return Observation(
        room=env.agent_positions[agent],
        item_classes=tuple(sorted(env.class_names())),
    )


@dataclass
class ForbiddenSet:
    """Per-activity set of rejected command strings with failure reasons."""

    entries: dict[str, str] = field(default_factory=dict)

    def add(self, command: str, reason: str) -> None:
        self.entries.setdefault(command, reason)

    def __contains__(self, command: str) -> bool:
        return command in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def lines(self) -> list[str]:
        return [f"{cmd} ({reason})" for cmd, reason in self.entries.items()]


def execute(cmd: ActionCommand, env: EnvironmentSnapshot) -> EnvironmentSnapshot:
    """Apply one command, returning an updated copy of the snapshot.

    Raises NoSuchItem / PreconditionFailed without mutating ``env``.
    """
    agent = env.agent_at(cmd.agent_index)
    item = env.items.get(cmd.item_id)
    if item is None:
        raise NoSuchItem(f"no item with id {cmd.item_id}")
    if item.item_class.name != cmd.item_class:
        raise PreconditionFailed(
            f"item {cmd.item_id} is a {item.item_class.name}, not {cmd.item_class}")

    required = VERB_PROPERTY[cmd.verb]
    if required is not None and required not in item.item_class.properties:
        raise PreconditionFailed(required)

    room = env.agent_positions[agent]
    held = env.held_items.get(agent, set())

    if cmd.verb == "walk":
        new = env.copy()
        new.agent_positions[agent] = item.room
        new.seated.pop(agent, None)
        return new

    if cmd.verb == "grab":
        if item.room != room:
            raise PreconditionFailed("location")
        if any(cmd.item_id in ids for ids in env.held_items.values()):
            raise PreconditionFailed("already held")
        if len(held) >= HAND_CAPACITY:
            raise PreconditionFailed("capacity")
        new = env.copy()
        new.held_items.setdefault(agent, set()).add(cmd.item_id)
        return new

    if cmd.verb == "putback":
        if cmd.item_id not in held:
            raise PreconditionFailed("not held")
        new = env.copy()
        new.held_items[agent].discard(cmd.item_id)
        new.items[cmd.item_id].room = room
        return new

    if cmd.verb in ("open", "close"):
        expected = "CLOSED" if cmd.verb == "open" else "OPEN"
        if item.state != expected:
            raise PreconditionFailed("state")
        new = env.copy()
        new.items[cmd.item_id].state = "OPEN" if cmd.verb == "open" else "CLOSED"
        return new

    if cmd.verb in ("switchon", "switchoff"):
        expected = "OFF" if cmd.verb == "switchon" else "ON"
        if item.state != expected:
            raise PreconditionFailed("state")
        new = env.copy()
        new.items[cmd.item_id].state = "ON" if cmd.verb == "switchon" else "OFF"
        return new

    if cmd.verb in ("sit", "lie"):
        if item.room != room:
            raise PreconditionFailed("location")
        new = env.copy()
        new.seated[agent] = cmd.item_id
        return new

    if cmd.verb == "standup":
        if agent not in env.seated:
            raise PreconditionFailed("not seated")
        new = env.copy()
        new.seated.pop(agent, None)
        return new

    raise UnknownVerb(cmd.verb)  # unreachable; VERBS is closed
