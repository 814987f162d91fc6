"""Single-agent household day: activity generation, action pipeline, critic.

The day driver turns a broad target into activities, then builds each
activity's command sequence step by step: a rough verb-noun proposal,
item-id resolution, and rendering, with failed commands collected into a
forbidden set that future proposals must avoid.  Successful activities
are committed to the policy store so a warmed replay needs no model
calls at all.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ActivityStuck, PreconditionFailed, NoSuchItem
from .gateway import Category, LLMGateway, PromptRequest
from .policy import PolicyStore, derive_condition
from .scenario import Scenario
from .world import (ActionCommand, EnvironmentSnapshot, ForbiddenSet, VERBS,
                    execute, render_command)

log = logging.getLogger(__name__)

MAX_PROPOSAL_RETRIES = 5
MAX_STEPS_PER_ACTIVITY = 20


def generate_activities(target: str, env: EnvironmentSnapshot,
                        gateway: LLMGateway, agent: str | None = None) -> list[str]:
    """One gateway call turning the day's target into an ordered activity list."""
    catalog = ", ".join(sorted(env.class_names()))
    result = gateway.complete(PromptRequest(
        category=Category.PLAN_GENERATION,
        prompt=(f"Target: {target}\nInteractive items: {catalog}\n"
                f"List the activities for the day, one per line."),
        scenario_key=target,
        agent=agent,
    ))
    return [line.strip() for line in result.text.splitlines() if line.strip()]


def next_action(activity: str, executed: list[ActionCommand], forbidden: ForbiddenSet,
                env: EnvironmentSnapshot, gateway: LLMGateway,
                agent_index: int = 0, agent: str | None = None) -> ActionCommand:
    """Propose the next concrete command for an activity.

    Three stages: a rough verb-noun proposal from the gateway, item-id
    resolution (a second call only when several instances exist), and
    rendering.  Proposals matching the forbidden set are rejected and
    re-prompted, at most MAX_PROPOSAL_RETRIES times.
    """
    if not activity:
        raise ValueError("activity must be nonempty")
    step = len(executed)
    executed_lines = "\n".join(render_command(c) for c in executed) or "(none)"
    forbidden_lines = "\n".join(forbidden.lines()) or "(none)"
    for attempt in range(MAX_PROPOSAL_RETRIES):
        key = f"{activity}:{step}" if attempt == 0 else f"{activity}:{step}~{attempt}"
        rough = gateway.complete(PromptRequest(
            category=Category.PLAN_GENERATION,
            prompt=(f"Activity: {activity}\nExecuted actions:\n{executed_lines}\n"
                    f"Forbidden actions:\n{forbidden_lines}\n"
                    f"Give the next rough command as 'verb noun'."),
            scenario_key=key,
            agent=agent,
        )).text.strip()
        parts = rough.split(None, 1)
        if len(parts) != 2 or parts[0] not in VERBS:
            log.debug("rejecting malformed rough command %r", rough)
            continue
        verb, noun = parts
        instances = env.items_of_class(noun)
        if not instances:
            forbidden.add(rough, "no such item class")
            continue
        if len(instances) == 1:
            item_id = instances[0].id
        else:
            listing = "\n".join(
                f"id {it.id}: {noun} in {it.room}" + (f", state {it.state}" if it.state else "")
                for it in sorted(instances, key=lambda i: i.id))
            pick = gateway.complete(PromptRequest(
                category=Category.PLAN_GENERATION,
                prompt=(f"Activity: {activity}\nCommand: {rough}\n"
                        f"Candidates:\n{listing}\nAnswer with the best item id."),
                scenario_key=f"{activity}:{step}:pick",
                agent=agent,
            )).text.strip()
            try:
                item_id = int(pick)
            except ValueError:
                log.debug("rejecting unparseable item pick %r", pick)
                continue
            if item_id not in {it.id for it in instances}:
                continue
        cmd = ActionCommand(agent_index, verb, noun, item_id)
        if render_command(cmd) in forbidden:
            continue
        return cmd
    raise ActivityStuck(f"no viable command for {activity!r} after "
                        f"{MAX_PROPOSAL_RETRIES} proposals")


def check_completion(activity: str, executed: list[ActionCommand],
                     env: EnvironmentSnapshot, gateway: LLMGateway,
                     agent: str | None = None) -> bool:
    """Ask the critic whether the activity is finished.

    An unparseable verdict counts as not-done (with a warning).
    """
    states = "\n".join(
        f"{it.item_class.name} ({it.id}): {it.state}"
        for it in sorted(env.items.values(), key=lambda i: i.id) if it.state)
    verdict = gateway.complete(PromptRequest(
        category=Category.CRITIC,
        prompt=(f"Activity: {activity}\nActions taken:\n"
                + ("\n".join(render_command(c) for c in executed) or "(none)")
                + f"\nItem states:\n{states}\nIs the activity complete? Answer yes or no."),
        scenario_key=f"{activity}:{len(executed)}",
        agent=agent,
    )).text.strip().lower()
    if verdict.startswith(("yes", "done")):
        return True
    if verdict.startswith("no"):
        return False
    log.warning("unparseable critic verdict %r for %r; treating as not done",
                verdict, activity)
    return False


def rule_critic(goal_states: list[dict], env: EnvironmentSnapshot) -> bool:
    """Auxiliary critic: done iff every scripted target state is reached."""
    for goal in goal_states:
        item = env.items.get(goal["item_id"])
        if item is None or item.state != goal["state"]:
            return False
    return True


@dataclass
class HouseholdReport:
    activities: list[str]
    completed: list[str]
    failed: list[str]
    policy_hits: int = 0
    policy_misses: int = 0
    action_log: list[str] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return len(self.completed) / len(self.activities) if self.activities else 0.0


def run_household_day(scenario: Scenario, gateway: LLMGateway,
                      policy_store: PolicyStore | None = None,
                      cached_activities: list[str] | None = None) -> HouseholdReport:
    """Run one full day for the scenario's single agent.

    With a warmed policy store and a cached activity list, the whole day
    replays without any gateway calls.
    """
    if scenario.target is None:
        raise ValueError(f"scenario {scenario.name!r} has no day target")
    env = scenario.build_env()
    agent_id = scenario.agents[0].id
    if cached_activities is not None:
        activities = list(cached_activities)
    else:
        activities = generate_activities(scenario.target, env, gateway, agent=agent_id)

    report = HouseholdReport(activities=activities, completed=[], failed=[])
    for activity in activities:
        pre_env = env
        if policy_store is not None:
            hit = policy_store.lookup(activity, env)
            if hit is not None:
                _, condition = hit
                replayed = _replay(condition.actions, env)
                if replayed is not None:
                    env = replayed
                    report.policy_hits += 1
                    report.completed.append(activity)
                    report.action_log.extend(render_command(c.with_agent(0))
                                             for c in condition.actions)
                    continue
                env = pre_env  # cached sequence failed; fall back to the model
            report.policy_misses += 1

        executed: list[ActionCommand] = []
        forbidden = ForbiddenSet()
        done = False
        while len(executed) < MAX_STEPS_PER_ACTIVITY:
            try:
                cmd = next_action(activity, executed, forbidden, env, gateway,
                                  agent_index=0, agent=agent_id)
            except ActivityStuck:
                break
            try:
                env = execute(cmd, env)
            except (PreconditionFailed, NoSuchItem) as exc:
                forbidden.add(render_command(cmd), str(exc))
                continue
            executed.append(cmd)
            report.action_log.append(render_command(cmd))
            if check_completion(activity, executed, env, gateway, agent=agent_id):
                done = True
                break
        if done:
            report.completed.append(activity)
            if policy_store is not None:
                condition = derive_condition(executed, pre_env)
                policy_store.commit(activity, condition)
        else:
            report.failed.append(activity)
    return report


def _replay(actions: tuple[ActionCommand, ...],
            env: EnvironmentSnapshot) -> EnvironmentSnapshot | None:
    for cmd in actions:
        try:
            env = execute(cmd.with_agent(0), env)
        except (PreconditionFailed, NoSuchItem):
            return None
    return env
