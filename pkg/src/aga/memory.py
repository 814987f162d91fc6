"""Per-agent event memory: scored retrieval, clustering, and stray-thought sampling.

Retrieval scores recency, importance, and relevance, min-max normalized
over the store before summing.  Clustering is DBSCAN over cosine
distance with noise points promoted to singleton clusters, so the
cluster-weighted sampler always covers every event.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedder, cosine, default_embedder
from .errors import RangeError

RECENCY_DECAY = 0.995
DEFAULT_EPS = 0.3
DEFAULT_MIN_PTS = 2
DEFAULT_IDLE_BLOCKLIST = frozenset({"idle"})


@dataclass(frozen=True)
class MemoryEvent:
    id: int
    text: str
    tick: int
    importance: int
    embedding: np.ndarray = field(repr=False, compare=False)


@dataclass
class EventClustering:
    clusters: list[list[int]]  # event ids; noise points appear as singletons
    eps: float
    min_pts: int

    @property
    def k(self) -> int:
        return len(self.clusters)


class AgentMemory:
    def __init__(self, embedder: Embedder | None = None,
                 idle_blocklist: frozenset[str] = DEFAULT_IDLE_BLOCKLIST):
        self.embedder = embedder or default_embedder()
        self.idle_blocklist = idle_blocklist
        self.events: list[MemoryEvent] = []
        self._next_id = 1

    def __len__(self) -> int:
        return len(self.events)

    def add_event(self, text: str, tick: int, importance: int) -> MemoryEvent:
        if not 1 <= importance <= 10:
            raise RangeError(f"importance must be in [1, 10], got {importance}")
        event = MemoryEvent(
            id=self._next_id,
            text=text,
            tick=tick,
            importance=importance,
            embedding=self.embedder.embed(text),
        )
        self._next_id += 1
        self.events.append(event)
        return event

    def retrieve(self, query: str, top_k: int, now: int | None = None) -> list[MemoryEvent]:
        """Rank events by recency + importance + relevance (each min-max normalized)."""
        if top_k < 1:
            raise RangeError(f"top_k must be >= 1, got {top_k}")
        if not self.events:
            return []
        if now is None:
            now = max(e.tick for e in self.events)
        qvec = self.embedder.embed(query)
        recency = [RECENCY_DECAY ** (now - e.tick) for e in self.events]
        importance = [e.importance / 10.0 for e in self.events]
        relevance = [max(0.0, cosine(qvec, e.embedding)) for e in self.events]
        scores = [sum(c) for c in zip(_minmax(recency), _minmax(importance), _minmax(relevance))]
        order = sorted(range(len(self.events)),
                       key=lambda i: (-scores[i], -self.events[i].tick, self.events[i].id))
        return [self.events[i] for i in order[:top_k]]

    def cluster(self, eps: float = DEFAULT_EPS, min_pts: int = DEFAULT_MIN_PTS) -> EventClustering:
        events = [e for e in self.events if e.text not in self.idle_blocklist]
        return cluster_events(events, eps=eps, min_pts=min_pts)

    def export_jsonl(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for e in self.events:
                f.write(json.dumps({"id": e.id, "text": e.text, "tick": e.tick,
                                    "importance": e.importance}) + "\n")


def _minmax(values: list[float]) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def cluster_events(events: list[MemoryEvent], eps: float = DEFAULT_EPS,
                   min_pts: int = DEFAULT_MIN_PTS) -> EventClustering:
    """DBSCAN over cosine distance (1 - cosine), deterministic in insertion order."""
    n = len(events)
    if n == 0:
        raise RangeError("cannot cluster an empty event store")
    vectors = np.stack([e.embedding for e in events])
    neighborhoods = _eps_neighborhoods(vectors, eps)

    UNVISITED, NOISE = -2, -1
    labels = [UNVISITED] * n
    cluster_id = 0
    for i in range(n):
        if labels[i] != UNVISITED:
            continue
        if len(neighborhoods[i]) < min_pts:
            labels[i] = NOISE
            continue
        labels[i] = cluster_id
        seeds = list(neighborhoods[i])
        j = 0
        while j < len(seeds):
            q = seeds[j]
            j += 1
            if labels[q] == NOISE:
                labels[q] = cluster_id
            if labels[q] != UNVISITED:
                continue
            labels[q] = cluster_id
            if len(neighborhoods[q]) >= min_pts:
                seeds.extend(neighborhoods[q])
        cluster_id += 1

    clusters: list[list[int]] = [[] for _ in range(cluster_id)]
    for i, label in enumerate(labels):
        if label >= 0:
            clusters[label].append(events[i].id)
    for i, label in enumerate(labels):  # noise -> singleton clusters
        if label == NOISE:
            clusters.append([events[i].id])
    return EventClustering(clusters=clusters, eps=eps, min_pts=min_pts)


def _eps_neighborhoods(vectors: np.ndarray, eps: float) -> list[list[int]]:
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = vectors / safe[:, None]
    sims = unit @ unit.T
    sims[norms == 0.0, :] = 0.0
    sims[:, norms == 0.0] = 0.0
    np.fill_diagonal(sims, 1.0)
    dist = 1.0 - sims
    return [list(np.flatnonzero(dist[i] <= eps)) for i in range(len(vectors))]


def sampling_distribution(clustering: EventClustering) -> dict[int, float]:
    """Per-event probability 1 / (k * |cluster|); sums to 1 over all events."""
    k = clustering.k
    if k == 0:
        raise RangeError("empty clustering")
    probs: dict[int, float] = {}
    for members in clustering.clusters:
        p = 1.0 / (k * len(members))
        for event_id in members:
            probs[event_id] = p
    return probs


def mind_wander_sample(clustering: EventClustering, m: int, seed: int) -> list[int]:
    """Draw m event ids with replacement from the cluster-weighted distribution."""
    if m < 1:
        raise RangeError(f"m must be >= 1, got {m}")
    probs = sampling_distribution(clustering)
    ids = sorted(probs)
    weights = np.array([probs[i] for i in ids])
    weights = weights / weights.sum()  # guard tiny float drift
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(ids), size=m, replace=True, p=weights)
    return [ids[int(d)] for d in draws]
