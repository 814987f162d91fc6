"""Command-line interface: simulation runs, ablations, and exports.

Delimited exports get a rendered figure written alongside them
(same basename, .png).
"""

from __future__ import annotations

import os
import sys

import click

from . import figures, reporting
from .driver import SimulationConfig, SimulationReport, run
from .errors import BackendError, ConfigError

EXIT_CONFIG_ERROR = 2
EXIT_BACKEND_ERROR = 3


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    except BackendError as exc:
        click.echo(f"backend error: {exc}", err=True)
        sys.exit(EXIT_BACKEND_ERROR)


@click.group()
def main():
    """Believable-agent simulator with plan-policy caching."""


def _sim_options(fn):
    fn = click.option("--scenario", required=True, help="Scenario JSON path.")(fn)
    fn = click.option("--days", default=1, show_default=True)(fn)
    fn = click.option("--seed", default=0, show_default=True)(fn)
    fn = click.option("--backend", type=click.Choice(["mock", "http"]),
                      default="mock", show_default=True)(fn)
    return fn


@main.command("run")
@_sim_options
@click.option("--policy-store", default=None, help="Policy store JSONL path.")
@click.option("--no-lifestyle-policy", is_flag=True, help="Disable plan-policy reuse.")
@click.option("--no-social-memory", is_flag=True, help="Disable compressed dialogue state.")
@click.option("--mind-wandering", is_flag=True, help="Inject stray-thought memory samples.")
@click.option("--report", "report_path", default=None, help="Write the report JSON here.")
def run_cmd(scenario, days, seed, backend, policy_store, no_lifestyle_policy,
            no_social_memory, mind_wandering, report_path):
    """Run one simulation and print (or save) its report."""
    config = _guarded(SimulationConfig,
                      scenario_path=scenario, days=days, seed=seed, backend=backend,
                      lifestyle_policy=not no_lifestyle_policy,
                      social_memory=not no_social_memory,
                      mind_wandering=mind_wandering,
                      policy_store_path=policy_store)
    report = _guarded(run, config)
    if report_path:
        report.save(report_path)
        click.echo(f"report written to {report_path}")
    else:
        click.echo(report.to_json())


@main.command("ablate")
@_sim_options
@click.option("--out", default="ablation.csv", show_default=True,
              help="CSV output path; a .png figure is written alongside.")
@click.option("--parallel-arms", is_flag=True, help="Run the four arms concurrently.")
def ablate_cmd(scenario, days, seed, backend, out, parallel_arms):
    """Compare token totals across the four toggle arms."""
    table = _guarded(reporting.run_ablation, scenario, days=days, seed=seed,
                     backend=backend, parallel=parallel_arms)
    for row in table.rows:
        note = " (after warm-up pass)" if row.warmed else ""
        click.echo(f"{row.arm:15s} {row.total_tokens:10d} tokens  "
                   f"ratio {row.ratio:.1%}{note}")
    table.to_csv(out)
    figures.render_ablation(table, _png_path(out))
    click.echo(f"wrote {out} and {_png_path(out)}")


@main.command("export-relmap")
@click.option("--report", "report_path", required=True, help="Run report JSON.")
@click.option("--out", default="relmap.csv", show_default=True)
def relmap_cmd(report_path, out):
    """Export the quantized relationship score matrix."""
    report = SimulationReport.load(report_path)
    reporting.write_relmap_csv(report, out)
    initials, matrix = reporting.relationship_matrix(report)
    figures.render_relmap(initials, matrix, _png_path(out))
    click.echo(f"wrote {out} and {_png_path(out)}")


@main.command("export-activity")
@_sim_options
@click.option("--runs", default=10, show_default=True)
@click.option("--vary-seeds/--same-seed", default=True, show_default=True)
@click.option("--mind-wandering", is_flag=True)
@click.option("--out", default="activity_curve.csv", show_default=True)
def activity_cmd(scenario, days, seed, backend, runs, vary_seeds, mind_wandering, out):
    """Repeat runs and export cumulative distinct-activity counts."""
    if backend != "mock":
        click.echo("export-activity supports the mock backend only", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    ledger = _guarded(reporting.run_activity_series, scenario, runs, seed=seed,
                      vary_seeds=vary_seeds, days=days,
                      mind_wandering=mind_wandering)
    reporting.write_activity_csv(ledger, out)
    agents, rows = reporting.activity_curve_rows(ledger)
    figures.render_activity_curve(agents, rows, _png_path(out))
    click.echo(f"wrote {out} and {_png_path(out)}")


@main.command("eval-prompts")
@click.option("--report", "report_path", required=True, help="Run report JSON.")
@click.option("--kind", type=click.Choice(["activity", "dialogue"]), required=True)
@click.option("--out", "out_dir", default="eval_prompts", show_default=True,
              help="Directory for the generated questionnaire prompts.")
def eval_cmd(report_path, kind, out_dir):
    """Build judge questionnaires from a run report."""
    report = SimulationReport.load(report_path)
    os.makedirs(out_dir, exist_ok=True)
    written = 0
    if kind == "activity":
        for agent in report.data["agents"]:
            records = reporting.activity_records(report, agent["id"])
            if not records:
                continue
            prompt = reporting.build_evaluator_prompt("activity", records)
            _write(os.path.join(out_dir, f"activity_{agent['id']}.txt"), prompt.body)
            written += 1
    else:
        for key in sorted(report.data["transcripts"]):
            records = reporting.dialogue_records(report, key)
            if not records:
                continue
            prompt = reporting.build_evaluator_prompt("dialogue", records)
            safe = key.replace("/", "_").replace("@", "_")
            _write(os.path.join(out_dir, f"dialogue_{safe}.txt"), prompt.body)
            written += 1
    click.echo(f"wrote {written} prompt file(s) to {out_dir}")


def _png_path(csv_path: str) -> str:
    base, _ = os.path.splitext(csv_path)
    return base + ".png"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


if __name__ == "__main__":
    main()
