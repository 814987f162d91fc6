"""Tick loop for multi-agent town scenarios.

Each agent perceives, plans (policy-first when enabled, model fallback
otherwise), and acts; scripted encounters trigger dialogue between
co-located agents.  Runs are byte-deterministic for a fixed scenario,
seed, and toggle set under the mock backend.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field

from .embedding import Embedder, cosine, default_embedder
from .errors import AgaError, BackendError, ConfigError
from .gateway import Category, HttpBackend, LLMGateway, PromptRequest
from .household import run_household_day
from .memory import AgentMemory, mind_wander_sample
from .policy import PolicyStore, PolicyStoreConfig, decompose, derive_condition
from .scenario import AgentProfile, Scenario, load_scenario
from .social import (DyadState, absorb_events, build_dialogue_prompt, init_dyad,
                     quantize, update_after_conversation)
from .world import execute, observe, render_command

MAX_DIALOGUE_TURNS = 8
DIALOGUE_TERMINATOR = "<END>"
WANDER_EVENTS = 3
ACTIVITY_NOVELTY_THRESHOLD = 0.9
DEFAULT_IMPORTANCE = 5
TURN_IMPORTANCE = 4


@dataclass
class SimulationConfig:
    scenario_path: str
    days: int = 1
    ticks_per_day: int = 48
    seed: int = 0
    lifestyle_policy: bool = True
    social_memory: bool = True
    mind_wandering: bool = False
    backend: str = "mock"
    policy_store_path: str | None = None
    similarity_threshold: float = 0.95

    def __post_init__(self):
        if self.days < 1:
            raise ConfigError(f"days must be >= 1, got {self.days}")
        if self.ticks_per_day < 1:
            raise ConfigError(f"ticks_per_day must be >= 1, got {self.ticks_per_day}")

    def toggles(self) -> dict[str, bool]:
        return {
            "lifestyle_policy": self.lifestyle_policy,
            "social_memory": self.social_memory,
            "mind_wandering": self.mind_wandering,
        }


@dataclass
class ActivityLedger:
    """Canonical activity set per agent, accumulated across runs."""

    canonical: dict[str, list[tuple[str, object]]] = field(default_factory=dict)
    per_run_new: list[dict[str, int]] = field(default_factory=list)
    per_run_cumulative: list[dict[str, int]] = field(default_factory=list)

    def cumulative_counts(self) -> dict[str, int]:
        return {agent: len(entries) for agent, entries in self.canonical.items()}

    def total_cumulative(self) -> int:
        return sum(len(entries) for entries in self.canonical.values())


def track_activities(ledger: ActivityLedger, run_activities: dict[str, list[str]],
                     embedder: Embedder | None = None) -> int:
    """Fold one run's activities into the ledger; returns the new-entry count.

    An activity is new iff its best similarity to every canonical
    activity of that agent is below the novelty threshold.
    """
    embedder = embedder or default_embedder()
    new_by_agent: dict[str, int] = {}
    for agent, activities in run_activities.items():
        canonical = ledger.canonical.setdefault(agent, [])
        new_count = 0
        for text in activities:
            vec = embedder.embed(text)
            if any(cosine(vec, known_vec) >= ACTIVITY_NOVELTY_THRESHOLD
                   for _, known_vec in canonical):
                continue
            canonical.append((text, vec))
            new_count += 1
        new_by_agent[agent] = new_count
    ledger.per_run_new.append(new_by_agent)
    ledger.per_run_cumulative.append(ledger.cumulative_counts())
    return sum(new_by_agent.values())


def wander_inject(prompt: str, memory: AgentMemory, seed: int,
                  m: int = WANDER_EVENTS) -> tuple[str, int | None]:
    """Append a stray-thoughts section of cluster-sampled memory events.

    Events already present in the prompt are skipped in favor of later
    draws.  Returns the augmented prompt and the id of the first
    injected event (None when nothing was injected).
    """
    if len(memory) == 0:
        return prompt, None
    clustering = memory.cluster()
    draws = mind_wander_sample(clustering, m * 4, seed)
    by_id = {e.id: e for e in memory.events}
    injected: list[int] = []
    for event_id in draws:
        if len(injected) >= m:
            break
        event = by_id.get(event_id)
        if event is None or event.text in prompt or event_id in injected:
            continue
        injected.append(event_id)
    if not injected:
        return prompt, None
    section = "\nStray thoughts:\n" + "\n".join(f"- {by_id[i].text}" for i in injected)
    return prompt + section, injected[0]


@dataclass
class SimulationReport:
    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path: str) -> "SimulationReport":
        with open(path, encoding="utf-8") as f:
            return cls(data=json.load(f))


def _wander_seed(seed: int, agent_index: int, tick: int) -> int:
    return zlib.crc32(f"{seed}:{agent_index}:{tick}".encode())


def _slot_time(tick: int, ticks_per_day: int) -> str:
    day = tick // ticks_per_day
    minutes = (tick % ticks_per_day) * (24 * 60 // ticks_per_day)
    return f"day {day + 1} {minutes // 60:02d}:{minutes % 60:02d}"


class _TownRun:
    def __init__(self, config: SimulationConfig, scenario: Scenario,
                 gateway: LLMGateway, policy_store: PolicyStore,
                 embedder: Embedder):
        self.config = config
        self.scenario = scenario
        self.gateway = gateway
        self.store = policy_store
        self.embedder = embedder
        self.env = scenario.build_env()
        self.memories = {a.id: AgentMemory(embedder) for a in scenario.agents}
        for agent in scenario.agents:
            for text, importance in agent.memory:
                self.memories[agent.id].add_event(text, tick=0, importance=importance)
        self.dyads: dict[frozenset[str], DyadState] = {}
        ids = [a.id for a in scenario.agents]
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                dyad = init_dyad(a, b)
                self.dyads[dyad.pair] = dyad
        self.activities: dict[str, list[str]] = {a.id: [] for a in scenario.agents}
        self.activity_log: dict[str, list[dict]] = {a.id: [] for a in scenario.agents}
        self.transcripts: dict[str, list[str]] = {}
        self.failures: list[str] = []
        self.hits0 = policy_store.hits
        self.misses0 = policy_store.misses
        self.commits0 = policy_store.commits

    def run(self) -> None:
        slots = {
            agent.id: {s.tick: s.plan for s in agent.schedule}
            for agent in self.scenario.agents
        }
        for day in range(self.config.days):
            for tick in range(self.config.ticks_per_day):
                abs_tick = day * self.config.ticks_per_day + tick
                for index, agent in enumerate(self.scenario.agents):
                    plan = slots[agent.id].get(tick)
                    if plan is not None:
                        self._step_plan(agent, index, plan, abs_tick)
                for enc in self.scenario.encounters:
                    if enc.tick == tick:
                        self._dialogue(enc.pair[0], enc.pair[1], enc.key, abs_tick, day)
                for ref in self.scenario.reflections:
                    if ref["tick"] == tick:
                        self._reflect(ref["agent"], ref["key"], abs_tick)

    # -- planning --

    def _step_plan(self, agent: AgentProfile, index: int, plan: str, abs_tick: int) -> None:
        observation = observe(self.env, agent.id)
        pre_env = self.env
        actions = None
        activity_text = None
        from_policy = False

        if self.config.lifestyle_policy:
            hit = self.store.lookup(plan, self.env)
            if hit is not None:
                record, condition = hit
                actions = [c.with_agent(index) for c in condition.actions]
                activity_text = record.plan_text
                from_policy = True

        if actions is None:
            prompt = (f"{agent.profile_line()}\nCurrent room: {observation.room}\n"
                      f"Visible items: {', '.join(observation.item_classes)}\n"
                      f"Scheduled plan: {plan}\nState the activity you will do now.")
            key = f"{agent.id}:{plan}"
            if self.config.mind_wandering and len(self.memories[agent.id]) > 0:
                seed = _wander_seed(self.config.seed, index, abs_tick)
                prompt, first_id = wander_inject(prompt, self.memories[agent.id], seed)
                if first_id is not None:
                    key = f"{key}|w{first_id}"
            try:
                result = self.gateway.complete(PromptRequest(
                    category=Category.PLAN_GENERATION, prompt=prompt,
                    scenario_key=key, agent=agent.id))
                activity_text = result.text.strip()
                _, raw_actions = decompose(activity_text, observation,
                                           self.gateway, agent=agent.id)
                actions = [c.with_agent(index) for c in raw_actions]
            except BackendError as exc:
                self.failures.append(f"tick {abs_tick} {agent.id}: backend error: {exc}")
                return

        env = self.env
        try:
            for cmd in actions:
                env = execute(cmd, env)
        except AgaError as exc:
            self.failures.append(
                f"tick {abs_tick} {agent.id}: {activity_text!r} failed: {exc}")
            return
        self.env = env

        if self.config.lifestyle_policy and not from_policy:
            condition = derive_condition(actions, pre_env)
            self.store.commit(activity_text, condition, tick=abs_tick)

        self.memories[agent.id].add_event(activity_text, tick=abs_tick,
                                          importance=DEFAULT_IMPORTANCE)
        self.activities[agent.id].append(activity_text)
        self.activity_log[agent.id].append({
            "time": _slot_time(abs_tick, self.config.ticks_per_day),
            "plan": activity_text,
            "actions": [render_command(c) for c in actions],
        })

    # -- dialogue --

    def _dialogue(self, a: str, b: str, key: str, abs_tick: int, day: int) -> None:
        dyad = self.dyads[frozenset((a, b))]
        names = {p.id: p.name for p in self.scenario.agents}
        transcript: list[str] = []
        last_turn = ""
        participants = (a, b)
        for i in range(MAX_DIALOGUE_TURNS):
            speaker = participants[i % 2]
            listener = participants[(i + 1) % 2]
            topic = last_turn or f"conversation with {names[listener]}"
            profile_line = self.scenario.agent(speaker).profile_line()
            if self.config.social_memory:
                absorb_events(dyad, topic, self.memories[speaker], self.gateway,
                              now=abs_tick, agent=speaker)
                request = build_dialogue_prompt(dyad, profile_line, last_turn,
                                                scenario_key=f"{key}:{i}", agent=speaker)
            else:
                # without cached dialogue state the relationship context
                # must be regenerated from raw memory on every turn
                raw = self.memories[speaker].retrieve(topic, top_k=10, now=abs_tick)
                memories_block = "\n".join(f"- {e.text}" for e in raw)
                try:
                    context = self.gateway.complete(PromptRequest(
                        category=Category.DIALOGUE_UPDATE,
                        prompt=(f"Summarize the relationship between {names[speaker]} "
                                f"and {names[listener]} given these memories:\n"
                                + memories_block),
                        scenario_key=f"{key}:context:{i}", agent=speaker)).text
                except BackendError as exc:
                    self.failures.append(f"tick {abs_tick} dialogue {key}: {exc}")
                    return
                prompt = (f"{profile_line}\nRelationship context: {context}\n"
                          f"Relevant memories:\n{memories_block}"
                          + "\nConversation so far:\n" + "\n".join(transcript)
                          + f"\nLast turn: {last_turn}\nReply with the next line of dialogue.")
                request = PromptRequest(category=Category.DIALOGUE_TURN, prompt=prompt,
                                        scenario_key=f"{key}:{i}", agent=speaker)
            try:
                turn = self.gateway.complete(request).text
            except BackendError as exc:
                self.failures.append(f"tick {abs_tick} dialogue {key}: {exc}")
                return  # truncated conversation; no relationship update
            transcript.append(f"{names[speaker]}: {turn}")
            last_turn = turn
            for member in participants:
                self.memories[member].add_event(
                    f"{names[speaker]} said: {turn}", tick=abs_tick,
                    importance=TURN_IMPORTANCE)
            if DIALOGUE_TERMINATOR in turn:
                break
        if self.config.social_memory and transcript:
            update_after_conversation(dyad, transcript, self.gateway,
                                      now=abs_tick, scenario_key=key, agent=a)
        self.transcripts[f"{key}@day{day + 1}"] = transcript

    def _reflect(self, agent_id: str, key: str, abs_tick: int) -> None:
        recent = [e.text for e in self.memories[agent_id].events[-10:]]
        self.gateway.complete(PromptRequest(
            category=Category.REFLECTION,
            prompt="Reflect on these recent events:\n" + "\n".join(recent),
            scenario_key=key,
            agent=agent_id,
        ))


def run(config: SimulationConfig, gateway: LLMGateway | None = None,
        policy_store: PolicyStore | None = None,
        ledger: ActivityLedger | None = None,
        embedder: Embedder | None = None) -> SimulationReport:
    """Execute one simulation and assemble its deterministic report."""
    scenario = load_scenario(config.scenario_path)
    embedder = embedder or default_embedder()
    if gateway is None:
        if config.backend == "mock":
            gateway = LLMGateway(backend=scenario.mock_backend())
        elif config.backend == "http":
            gateway = LLMGateway(backend=HttpBackend())
        else:
            raise ConfigError(f"unknown backend {config.backend!r}")
    if policy_store is None:
        policy_store = PolicyStore(
            PolicyStoreConfig(similarity_threshold=config.similarity_threshold,
                              store_path=config.policy_store_path),
            embedder=embedder)
        if config.policy_store_path:
            import os
            if os.path.exists(config.policy_store_path):
                policy_store.load()
    ledger = ledger if ledger is not None else ActivityLedger()

    if scenario.kind == "household":
        return _run_household(config, scenario, gateway, policy_store, ledger)

    town = _TownRun(config, scenario, gateway, policy_store, embedder)
    town.run()
    new_count = track_activities(ledger, town.activities, embedder)

    usage = gateway.usage_report()
    dyads_out = []
    for dyad in sorted(town.dyads.values(), key=lambda d: d.pair_key):
        pair = sorted(dyad.pair)
        dyads_out.append({
            "pair": pair,
            "relationship": dyad.relationship,
            "feeling": dyad.feeling,
            "score": quantize(dyad.relationship, embedder=embedder),
            "summary_len": len(dyad.summary_events),
        })
    report = SimulationReport(data={
        "scenario": scenario.name,
        "seed": config.seed,
        "toggles": config.toggles(),
        "agents": [{"id": a.id, "name": a.name, "initials": a.initials}
                   for a in scenario.agents],
        "tokens": {
            "by_category": usage.by_category,
            "by_agent": usage.by_agent,
            "prompt": usage.prompt_tokens,
            "completion": usage.completion_tokens,
            "total": usage.total,
        },
        "policy": {
            "hits": policy_store.hits - town.hits0,
            "misses": policy_store.misses - town.misses0,
            "commits": policy_store.commits - town.commits0,
        },
        "dyads": dyads_out,
        "activities": {
            "new": new_count,
            "cumulative": ledger.total_cumulative(),
            "by_agent": ledger.cumulative_counts(),
        },
        "failures": town.failures,
        "activity_log": town.activity_log,
        "transcripts": town.transcripts,
    })
    if config.policy_store_path and config.lifestyle_policy:
        policy_store.save(config.policy_store_path)
    return report


def _run_household(config: SimulationConfig, scenario: Scenario,
                   gateway: LLMGateway, policy_store: PolicyStore,
                   ledger: ActivityLedger) -> SimulationReport:
    cache_path = (config.policy_store_path + ".activities.json"
                  if config.policy_store_path else None)
    cached = None
    if cache_path:
        import os
        if os.path.exists(cache_path):
            with open(cache_path, encoding="utf-8") as f:
                cached = json.load(f).get(scenario.target)
    day = run_household_day(
        scenario, gateway,
        policy_store=policy_store if config.lifestyle_policy else None,
        cached_activities=cached)
    agent_id = scenario.agents[0].id
    new_count = track_activities(ledger, {agent_id: day.activities})
    usage = gateway.usage_report()
    report = SimulationReport(data={
        "scenario": scenario.name,
        "seed": config.seed,
        "toggles": config.toggles(),
        "agents": [{"id": a.id, "name": a.name, "initials": a.initials}
                   for a in scenario.agents],
        "tokens": {
            "by_category": usage.by_category,
            "by_agent": usage.by_agent,
            "prompt": usage.prompt_tokens,
            "completion": usage.completion_tokens,
            "total": usage.total,
        },
        "policy": {
            "hits": day.policy_hits,
            "misses": day.policy_misses,
            "commits": policy_store.commits,
        },
        "dyads": [],
        "activities": {
            "new": new_count,
            "cumulative": ledger.total_cumulative(),
            "by_agent": ledger.cumulative_counts(),
        },
        "household": {
            "completed": day.completed,
            "failed": day.failed,
            "success_rate": day.success_rate,
        },
        "failures": [],
        "activity_log": {agent_id: [{"time": "", "plan": a, "actions": []}
                                    for a in day.activities]},
        "transcripts": {},
    })
    if config.policy_store_path and config.lifestyle_policy:
        policy_store.save(config.policy_store_path)
        if cache_path:
            with open(cache_path, "w", encoding="utf-8") as f:
                json.dump({scenario.target: day.activities}, f)
    return report
