"""Plan-policy cache: decomposition, executable conditions, and reuse.

A committed plan maps to one or more (condition, action-sequence)
variants.  Lookup embeds the incoming plan text, linearly scans the
store for records above the similarity threshold, and returns the first
stored variant whose condition the current environment satisfies.
Conditions are derived by rule from the action sequence, so a cache hit
is exactly as executable as the original decomposition was.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedder, cosine, default_embedder
from .errors import DecompositionError, StoreFormatError
from .gateway import Category, LLMGateway, PromptRequest
from .world import (ActionCommand, EnvironmentSnapshot, Observation,
                    STATE_VERBS, VERB_PROPERTY, parse_command, render_command)

DEFAULT_SIMILARITY_THRESHOLD = 0.95


@dataclass(frozen=True)
class ItemPredicate:
    item_class: str
    min_count: int = 1
    required_properties: frozenset[str] = frozenset()
    required_state: str | None = None

    def __post_init__(self):
        if not self.item_class:
            raise ValueError("item_class must be nonempty")
        if self.min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {self.min_count}")


@dataclass(frozen=True)
class ExecCondition:
    predicates: tuple[ItemPredicate, ...]
    actions: tuple[ActionCommand, ...]


@dataclass
class PolicyRecord:
    plan_text: str
    embedding: np.ndarray = field(repr=False)
    variants: list[ExecCondition] = field(default_factory=list)
    created_at: int = 0
    use_count: int = 0
    last_used: int = 0  # in-memory MRU counter; not persisted


@dataclass(frozen=True)
class PolicyStoreConfig:
    similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    store_path: str | None = None

    def __post_init__(self):
        if not 0.0 < self.similarity_threshold <= 1.0:
            raise ValueError(
                f"similarity threshold must be in (0, 1], got {self.similarity_threshold}")


def predicate_satisfied(pred: ItemPredicate, env: EnvironmentSnapshot) -> bool:
    items = env.items_of_class(pred.item_class)
    if not items:
        return False
    if not pred.required_properties <= items[0].item_class.properties:
        return False
    matching = [it for it in items
                if pred.required_state is None or it.state == pred.required_state]
    return len(matching) >= pred.min_count


def condition_satisfied(cond: ExecCondition, env: EnvironmentSnapshot) -> bool:
    return all(predicate_satisfied(p, env) for p in cond.predicates)


def derive_condition(actions: list[ActionCommand] | tuple[ActionCommand, ...],
                     env: EnvironmentSnapshot) -> ExecCondition:
    """Rule-based executability condition for an action sequence.

    One predicate per referenced item class: existence of as many
    distinct instances as the sequence uses, the properties its verbs
    demand, and the pre-execution state for state-changing verbs.
    """
    ids_by_class: dict[str, set[int]] = {}
    props_by_class: dict[str, set[str]] = {}
    state_by_class: dict[str, str | None] = {}
    order: list[str] = []
    for cmd in actions:
        cls = cmd.item_class
        if cls not in ids_by_class:
            ids_by_class[cls] = set()
            props_by_class[cls] = set()
            state_by_class[cls] = None
            order.append(cls)
        ids_by_class[cls].add(cmd.item_id)
        required = VERB_PROPERTY[cmd.verb]
        if required is not None:
            props_by_class[cls].add(required)
        if cmd.verb in STATE_VERBS and state_by_class[cls] is None:
            item = env.items.get(cmd.item_id)
            if item is None:
                instances = env.items_of_class(cls)
                item = instances[0] if instances else None
            state_by_class[cls] = item.state if item is not None else None
    predicates = tuple(
        ItemPredicate(
            item_class=cls,
            min_count=len(ids_by_class[cls]),
            required_properties=frozenset(props_by_class[cls]),
            required_state=state_by_class[cls],
        )
        for cls in order
    )
    return ExecCondition(predicates=predicates, actions=tuple(actions))


def decompose(plan_text: str, observation: Observation, gateway: LLMGateway,
              agent: str | None = None) -> tuple[list[str], list[ActionCommand]]:
    """Break a plan into sub-plans, then into concrete action commands.

    Two gateway calls: one for the sub-plan split, one batched request
    converting all sub-plans into commands.  Commands may only reference
    item classes present in the observation's catalog.
    """
    if not plan_text.strip():
        raise DecompositionError("empty plan text")
    catalog = ", ".join(observation.item_classes)
    sub_result = gateway.complete(PromptRequest(
        category=Category.PLAN_DECOMPOSITION,
        prompt=(f"Break this plan into short sub-plans, one per line.\n"
                f"Plan: {plan_text}\nCurrent room: {observation.room}\n"
                f"Available items: {catalog}"),
        scenario_key=plan_text,
        agent=agent,
    ))
    sub_plans = [line.strip() for line in sub_result.text.splitlines() if line.strip()]
    action_result = gateway.complete(PromptRequest(
        category=Category.PLAN_DECOMPOSITION,
        prompt=(f"Convert the sub-plans into action commands of the form "
                f"<charN> [verb] <class> (id), one per line.\n"
                f"Sub-plans:\n" + "\n".join(sub_plans) + f"\nAvailable items: {catalog}"),
        scenario_key=f"{plan_text}:actions",
        agent=agent,
    ))
    actions: list[ActionCommand] = []
    for line in action_result.text.splitlines():
        if not line.strip():
            continue
        try:
            cmd = parse_command(line)
        except Exception as exc:
            raise DecompositionError(f"unparseable action line: {line!r}") from exc
        if cmd.item_class not in observation.item_classes:
            raise DecompositionError(
                f"action references unknown item class {cmd.item_class!r}: {line!r}")
        actions.append(cmd)
    return sub_plans, actions


class PolicyStore:
    """Many concurrent readers, single writer; guarded by one lock."""

    def __init__(self, config: PolicyStoreConfig | None = None,
                 embedder: Embedder | None = None):
        self.config = config or PolicyStoreConfig()
        self.embedder = embedder or default_embedder()
        self.records: list[PolicyRecord] = []
        self.hits = 0
        self.misses = 0
        self.commits = 0
        self._mru = 0
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self.records)

    def lookup(self, plan_text: str,
               env: EnvironmentSnapshot) -> tuple[PolicyRecord, ExecCondition] | None:
        """Best similar record whose condition the environment satisfies.

        Candidates at or above the threshold are tried in order of
        similarity, breaking ties by most recent use then plan text;
        within a record, variants are tried most-recently-used first.
        A miss is a normal result, not an error.
        """
        with self._lock:
            query = self.embedder.embed(plan_text)
            theta = self.config.similarity_threshold
            candidates = []
            for record in self.records:
                sim = cosine(query, record.embedding)
                if sim >= theta:
                    candidates.append((sim, record))
            candidates.sort(key=lambda c: (-c[0], -c[1].last_used, c[1].plan_text))
            for _, record in candidates:
                for variant in record.variants:
                    if condition_satisfied(variant, env):
                        record.use_count += 1
                        self._mru += 1
                        record.last_used = self._mru
                        record.variants.remove(variant)
                        record.variants.insert(0, variant)
                        self.hits += 1
                        return record, variant
            self.misses += 1
            return None

    def commit(self, plan_text: str, condition: ExecCondition, tick: int = 0) -> PolicyRecord:
        """Attach the condition to a similar record, or create a new one.

        Committing an exact duplicate (same predicates and actions on a
        matching record) leaves the store unchanged.
        """
        with self._lock:
            query = self.embedder.embed(plan_text)
            theta = self.config.similarity_threshold
            best: PolicyRecord | None = None
            best_sim = -2.0
            for record in self.records:
                sim = cosine(query, record.embedding)
                if sim >= theta and sim > best_sim:
                    best, best_sim = record, sim
            if best is not None:
                if condition not in best.variants:
                    best.variants.append(condition)
                    self.commits += 1
                return best
            record = PolicyRecord(
                plan_text=plan_text,
                embedding=query,
                variants=[condition],
                created_at=tick,
            )
            self.records.append(record)
            self.commits += 1
            return record

    # -- persistence (JSON Lines, one record per line) --

    def save(self, path: str | None = None) -> None:
        path = path or self.config.store_path
        if path is None:
            raise ValueError("no store path configured")
        with self._lock, open(path, "w", encoding="utf-8") as f:
            for record in self.records:
                f.write(json.dumps(_record_to_dict(record)) + "\n")

    def load(self, path: str | None = None) -> None:
        path = path or self.config.store_path
        if path is None:
            raise ValueError("no store path configured")
        records: list[PolicyRecord] = []
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(_record_from_dict(json.loads(line)))
                except StoreFormatError:
                    raise
                except Exception as exc:
                    raise StoreFormatError(
                        f"malformed policy record: {exc}", line=lineno) from exc
        with self._lock:
            self.records = records


def _record_to_dict(record: PolicyRecord) -> dict:
    return {
        "plan": record.plan_text,
        "embedding": record.embedding.tolist(),
        "variants": [
            {
                "predicates": [
                    {
                        "class": p.item_class,
                        "min_count": p.min_count,
                        "properties": sorted(p.required_properties),
                        "state": p.required_state,
                    }
                    for p in variant.predicates
                ],
                "actions": [render_command(a) for a in variant.actions],
            }
            for variant in record.variants
        ],
        "created_at": record.created_at,
        "use_count": record.use_count,
    }


def _record_from_dict(data: dict) -> PolicyRecord:
    variants = [
        ExecCondition(
            predicates=tuple(
                ItemPredicate(
                    item_class=p["class"],
                    min_count=p["min_count"],
                    required_properties=frozenset(p["properties"]),
                    required_state=p["state"],
                )
                for p in variant["predicates"]
            ),
            actions=tuple(parse_command(a) for a in variant["actions"]),
        )
        for variant in data["variants"]
    ]
    return PolicyRecord(
        plan_text=data["plan"],
        embedding=np.asarray(data["embedding"], dtype=np.float64),
        variants=variants,
        created_at=data["created_at"],
        use_count=data["use_count"],
    )
