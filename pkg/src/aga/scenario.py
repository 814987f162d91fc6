"""Scenario files: world layout, agent profiles, schedules, and mock scripts.

A scenario is a single JSON document describing rooms, the item catalog,
item instances, agents (with daily schedules and seed memories), scripted
encounters, and the mock-backend response scripts that make a simulation
fully replayable offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigError
from .gateway import MockBackend
from .world import EnvironmentSnapshot, Item, ItemClass


@dataclass(frozen=True)
class ScheduleSlot:
    tick: int  # within-day tick at which this plan starts
    plan: str


@dataclass
class AgentProfile:
    id: str
    name: str
    description: str = ""
    lifestyle: str = ""
    room: str = ""
    memory: list[tuple[str, int]] = field(default_factory=list)
    schedule: list[ScheduleSlot] = field(default_factory=list)

    @property
    def initials(self) -> str:
        return "".join(part[0] for part in self.name.split() if part).upper()

    def profile_line(self) -> str:
        return f"{self.name}: {self.description} Lifestyle: {self.lifestyle}"


@dataclass(frozen=True)
class Encounter:
    tick: int  # within-day tick; fires every simulated day
    pair: tuple[str, str]
    key: str


@dataclass
class Scenario:
    name: str
    kind: str  # "town" or "household"
    rooms: list[str]
    item_classes: dict[str, ItemClass]
    items: list[dict]
    agents: list[AgentProfile]
    encounters: list[Encounter] = field(default_factory=list)
    scripts: list[dict] = field(default_factory=list)
    target: str | None = None
    reflections: list[dict] = field(default_factory=list)
    activity_goals: dict[str, list[dict]] = field(default_factory=dict)

    def build_env(self) -> EnvironmentSnapshot:
        items: dict[int, Item] = {}
        for spec in self.items:
            cls = self.item_classes[spec["class"]]
            items[spec["id"]] = Item(
                id=spec["id"],
                item_class=cls,
                room=spec["room"],
                state=spec.get("state", cls.initial_state),
            )
        return EnvironmentSnapshot(
            rooms=tuple(self.rooms),
            items=items,
            agents=tuple(a.id for a in self.agents),
            agent_positions={a.id: a.room for a in self.agents},
            held_items={a.id: set() for a in self.agents},
        )

    def mock_backend(self) -> MockBackend:
        return MockBackend(self.scripts)

    def agent(self, agent_id: str) -> AgentProfile:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise ConfigError(f"unknown agent id: {agent_id}")


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
    return _scenario_from_dict(data)


def _scenario_from_dict(data: dict) -> Scenario:
    try:
        item_classes = {
            c["name"]: ItemClass(
                name=c["name"],
                properties=frozenset(c.get("properties", [])),
                initial_state=c.get("initial_state"),
            )
            for c in data["item_classes"]
        }
        rooms = list(data["rooms"])
        agents = [
            AgentProfile(
                id=a["id"],
                name=a["name"],
                description=a.get("description", ""),
                lifestyle=a.get("lifestyle", ""),
                room=a["room"],
                memory=[(m["text"], m.get("importance", 5)) for m in a.get("memory", [])],
                schedule=[ScheduleSlot(s["tick"], s["plan"]) for s in a.get("schedule", [])],
            )
            for a in data["agents"]
        ]
        scenario = Scenario(
            name=data["name"],
            kind=data.get("kind", "town"),
            rooms=rooms,
            item_classes=item_classes,
            items=list(data.get("items", [])),
            agents=agents,
            encounters=[
                Encounter(e["tick"], (e["pair"][0], e["pair"][1]), e["key"])
                for e in data.get("encounters", [])
            ],
            scripts=list(data.get("scripts", [])),
            target=data.get("target"),
            reflections=list(data.get("reflections", [])),
            activity_goals=dict(data.get("activity_goals", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed scenario: {exc!r}") from exc
    _validate(scenario)
    return scenario


def _validate(scenario: Scenario) -> None:
    names = [a.name for a in scenario.agents]
    if len(set(names)) != len(names):
        raise ConfigError("agent names must be unique")
    ids = [a.id for a in scenario.agents]
    if len(set(ids)) != len(ids):
        raise ConfigError("agent ids must be unique")
    seen_items: set[int] = set()
    for spec in scenario.items:
        if spec["id"] in seen_items:
            raise ConfigError(f"duplicate item id {spec['id']}")
        seen_items.add(spec["id"])
        if spec["class"] not in scenario.item_classes:
            raise ConfigError(f"item {spec['id']} has unknown class {spec['class']!r}")
        if spec["room"] not in scenario.rooms:
            raise ConfigError(f"item {spec['id']} placed in unknown room {spec['room']!r}")
    for agent in scenario.agents:
        if agent.room not in scenario.rooms:
            raise ConfigError(f"agent {agent.id} starts in unknown room {agent.room!r}")
        for a, b in zip(agent.schedule, agent.schedule[1:]):
            if b.tick <= a.tick:
                raise ConfigError(f"agent {agent.id} schedule ticks must increase")
    for enc in scenario.encounters:
        if enc.pair[0] == enc.pair[1]:
            raise ConfigError("encounter pairs must be distinct agents")
        for member in enc.pair:
            if member not in ids:
                raise ConfigError(f"encounter references unknown agent {member!r}")


def fixture_path(name: str) -> str:
    """Path to a scenario shipped with the package (e.g. 'town3')."""
    ref = resources.files("aga.fixtures") / f"{name}.json"
    return str(ref)
