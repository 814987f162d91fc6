"""Analysis exports: ablation tables, relationship maps, activity curves,
and judge-questionnaire prompts."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .driver import ActivityLedger, SimulationConfig, SimulationReport, run
from .gateway import Category, PromptRequest
from .policy import PolicyStore, PolicyStoreConfig


@dataclass(frozen=True)
class AblationArm:
    name: str
    lifestyle_policy: bool
    social_memory: bool


ARMS = (
    AblationArm("baseline", lifestyle_policy=False, social_memory=False),
    AblationArm("lifestyle-only", lifestyle_policy=True, social_memory=False),
    AblationArm("social-only", lifestyle_policy=False, social_memory=True),
    AblationArm("full", lifestyle_policy=True, social_memory=True),
)


@dataclass
class AblationRow:
    arm: str
    total_tokens: int
    ratio: float
    by_category: dict[str, int] = field(default_factory=dict)
    warmed: bool = False


@dataclass
class AblationTable:
    rows: list[AblationRow]

    def row(self, arm: str) -> AblationRow:
        for r in self.rows:
            if r.arm == arm:
                return r
        raise KeyError(arm)

    def to_csv(self, path: str) -> None:
        categories = sorted(self.rows[0].by_category) if self.rows else []
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["arm", "total_tokens", "ratio", "warmed", *categories])
            for r in self.rows:
                writer.writerow([r.arm, r.total_tokens, f"{r.ratio:.6f}", int(r.warmed),
                                 *[r.by_category[c] for c in categories]])


def _run_arm(arm: AblationArm, scenario_path: str, days: int, seed: int,
             backend: str, similarity_threshold: float) -> AblationRow:
    store = PolicyStore(PolicyStoreConfig(similarity_threshold=similarity_threshold))
    warmed = False
    base_kwargs = dict(
        scenario_path=scenario_path, days=days, seed=seed, backend=backend,
        lifestyle_policy=arm.lifestyle_policy, social_memory=arm.social_memory,
        mind_wandering=False, similarity_threshold=similarity_threshold)
    if arm.lifestyle_policy:
        run(SimulationConfig(**base_kwargs), policy_store=store)
        warmed = True
    report = run(SimulationConfig(**base_kwargs), policy_store=store)
    tokens = report.data["tokens"]
    return AblationRow(
        arm=arm.name,
        total_tokens=tokens["total"],
        ratio=0.0,
        by_category=dict(tokens["by_category"]),
        warmed=warmed,
    )


def run_ablation(scenario_path: str, days: int = 2, seed: int = 42,
                 backend: str = "mock", similarity_threshold: float = 0.95,
                 parallel: bool = False) -> AblationTable:
    """Token totals for the four toggle arms on one scenario.

    Arms using the plan-policy cache get a warm-up pass first (its
    tokens are not counted) so reuse is measured, not cold-start cost.
    Each arm is an independent deterministic run, so arms may execute
    concurrently.
    """
    args = (scenario_path, days, seed, backend, similarity_threshold)
    if parallel:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=len(ARMS)) as pool:
            rows = list(pool.map(lambda arm: _run_arm(arm, *args), ARMS))
    else:
        rows = [_run_arm(arm, *args) for arm in ARMS]
    baseline_total = rows[0].total_tokens
    for r in rows:
        r.ratio = r.total_tokens / baseline_total if baseline_total else 0.0
    return AblationTable(rows=rows)


# -- relationship map --

def relationship_matrix(report: SimulationReport) -> tuple[list[str], list[list[int | None]]]:
    """Symmetric score matrix with agent initials as labels, blank diagonal."""
    agents = report.data["agents"]
    initials = [a["initials"] for a in agents]
    index = {a["id"]: i for i, a in enumerate(agents)}
    n = len(agents)
    matrix: list[list[int | None]] = [[0] * n for _ in range(n)]
    for row in range(n):
        matrix[row][row] = None
    for dyad in report.data["dyads"]:
        a, b = dyad["pair"]
        i, j = index[a], index[b]
        matrix[i][j] = matrix[j][i] = dyad["score"]
    return initials, matrix


def write_relmap_csv(report: SimulationReport, path: str) -> None:
    initials, matrix = relationship_matrix(report)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["", *initials])
        for label, row in zip(initials, matrix):
            writer.writerow([label, *["" if v is None else v for v in row]])


def read_relmap_csv(path: str) -> tuple[list[str], list[list[int | None]]]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    initials = rows[0][1:]
    matrix = [[None if cell == "" else int(cell) for cell in row[1:]]
              for row in rows[1:]]
    return initials, matrix


# -- activity curve --

def activity_curve_rows(ledger: ActivityLedger) -> tuple[list[str], list[list[int]]]:
    """One row per run with cumulative distinct-activity counts per agent."""
    agents = sorted({a for snapshot in ledger.per_run_cumulative for a in snapshot})
    rows = [[snapshot.get(a, 0) for a in agents] for snapshot in ledger.per_run_cumulative]
    return agents, rows


def write_activity_csv(ledger: ActivityLedger, path: str) -> None:
    agents, rows = activity_curve_rows(ledger)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["run", *agents])
        for i, row in enumerate(rows, start=1):
            writer.writerow([i, *row])


def read_activity_csv(path: str) -> tuple[list[str], list[list[int]]]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    return rows[0][1:], [[int(c) for c in row[1:]] for row in rows[1:]]


def run_activity_series(scenario_path: str, runs: int, seed: int = 0,
                        vary_seeds: bool = True, days: int = 1,
                        lifestyle_policy: bool = False,
                        mind_wandering: bool = False) -> ActivityLedger:
    """Repeat a scenario, accumulating the distinct-activity ledger."""
    ledger = ActivityLedger()
    for i in range(runs):
        config = SimulationConfig(
            scenario_path=scenario_path, days=days,
            seed=seed + i if vary_seeds else seed,
            lifestyle_policy=lifestyle_policy, social_memory=True,
            mind_wandering=mind_wandering)
        run(config, ledger=ledger)
    return ledger


# -- judge questionnaires --

_RATING_CLAUSE = ("Please rate on a scale of 1 to 5, with 1 being most like an AI "
                  "and 5 being most like a human.")
_JSON_CLAUSE = ('Please strictly follow the JSON format for your response:\n'
                '{\n    "reason": <str>,\n    "score": <int>\n}')
_ACTIVITY_HEADER = ("Please evaluate the following daily activities of an agent and "
                    "determine whether it is generated by a Large Language Model(LLM) "
                    "AI or a real human: ")
_ACTIVITY_FORMAT = ('The activities will be printed in the format of '
                    '"time:current plan(The specific actions, if there are any)":')
_DIALOGUE_HEADER = ("Please evaluate the following dialogue of an agent and determine "
                    "whether it is generated by a Large Language Model(LLM) AI or "
                    "a real human: ")


@dataclass(frozen=True)
class EvaluatorPrompt:
    kind: str  # "activity" or "dialogue"
    body: str

    def request(self) -> PromptRequest:
        return PromptRequest(category=Category.EVALUATOR, prompt=self.body,
                             scenario_key=self.kind)


def build_evaluator_prompt(kind: str, records: list[str]) -> EvaluatorPrompt:
    """Fill the questionnaire template with activity or dialogue lines."""
    if not records:
        raise ValueError("records must be nonempty")
    lines = "\n".join(f"    - {r}" for r in records)
    if kind == "activity":
        body = (f"{_ACTIVITY_HEADER}\n\n{_ACTIVITY_FORMAT}\n{lines}\n\n"
                f"{_RATING_CLAUSE}\n\n{_JSON_CLAUSE}")
    elif kind == "dialogue":
        body = (f"{_DIALOGUE_HEADER}\n\nThe dialogue:\n\n{lines}\n\n"
                f"{_RATING_CLAUSE}\n\n{_JSON_CLAUSE}")
    else:
        raise ValueError(f"unknown evaluator kind {kind!r}")
    return EvaluatorPrompt(kind=kind, body=body)


def activity_records(report: SimulationReport, agent_id: str) -> list[str]:
    entries = report.data["activity_log"].get(agent_id, [])
    out = []
    for entry in entries:
        suffix = f"({','.join(entry['actions'])})" if entry["actions"] else ""
        out.append(f"{entry['time']}:{entry['plan']}{suffix}")
    return out


def dialogue_records(report: SimulationReport, transcript_key: str) -> list[str]:
    return list(report.data["transcripts"].get(transcript_key, []))
