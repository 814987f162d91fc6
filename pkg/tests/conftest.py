"""Shared fixtures: packaged scenarios and world-building helpers."""

from __future__ import annotations

import re

import pytest

from aga.embedding import Embedder
from aga.scenario import fixture_path, load_scenario
from aga.world import EnvironmentSnapshot, Item, ItemClass


_criterion_results: list[tuple[int, str, str]] = []


def pytest_runtest_logreport(report):
    match = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if match and report.when == "call":
        number = int(match.group(1))
        name = match.group(2).replace("_", " ")
        _criterion_results.append((number, name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("release criteria")
    for number, name, outcome in sorted(_criterion_results):
        word = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {word}  {name}")


@pytest.fixture(scope="session")
def embedder():
    return Embedder()


@pytest.fixture(scope="session")
def town3_path():
    return fixture_path("town3")


@pytest.fixture(scope="session")
def household_path():
    return fixture_path("household_day")


@pytest.fixture
def town3(town3_path):
    return load_scenario(town3_path)


@pytest.fixture
def household(household_path):
    return load_scenario(household_path)


def make_env(items, agents=("A",), rooms=("room_a", "room_b"),
             positions=None) -> EnvironmentSnapshot:
    """Small world builder for unit tests.

    ``items`` is a list of (id, class_name, properties, room, state).
    """
    catalog: dict[str, ItemClass] = {}
    instances: dict[int, Item] = {}
    for item_id, name, properties, room, state in items:
        cls = catalog.get(name)
        if cls is None:
            cls = ItemClass(name=name, properties=frozenset(properties),
                            initial_state=state)
            catalog[name] = cls
        instances[item_id] = Item(id=item_id, item_class=cls, room=room, state=state)
    return EnvironmentSnapshot(
        rooms=tuple(rooms),
        items=instances,
        agents=tuple(agents),
        agent_positions={a: rooms[0] for a in agents}
        if positions is None else dict(positions),
        held_items={a: set() for a in agents},
    )
