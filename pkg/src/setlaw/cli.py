"""Command-line driver: counterexample sweeps, convergence experiments,
invariant suites, and plotting.

Exit codes: 0 success / all properties hold, 1 a property failed,
2 usage or configuration error.
"""

from __future__ import annotations

import os
import sys

import click

from . import reporting, runconfig, verification
from .experiments import (
    CounterexampleReport,
    ExperimentReport,
    IntermediateReport,
    experiment_counterexample,
    experiment_fd_slln,
    experiment_intermediate_fd,
    experiment_reduced,
)
from .randomsets import GateError


@click.group()
def main():
    """Exact polytope calculus and random-set averaging experiments."""


def _ensure_out(out: str) -> str:
    os.makedirs(out, exist_ok=True)
    return out


def _counterexample_json(report: CounterexampleReport) -> dict:
    return {
        "experiment": "counterexample",
        "n_max": report.n_max,
        "n_sets": report.n_sets,
        "patterns_evaluated": len(report.patterns),
        "floor": report.floor,
        "min_certificate": report.min_certificate,
        "min_exact": report.min_exact,
        "passed": report.passed,
    }


def _fit_json(fit) -> dict:
    return {
        "status": fit.status,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "n_points": fit.n_points,
    }


def _report_json(report) -> dict:
    if isinstance(report, IntermediateReport):
        return {
            "experiment": report.experiment_id,
            "aggregates": list(report.aggregates),
            "noise_fit": _fit_json(report.noise_fit),
            "body_fit": _fit_json(report.body_fit),
            "max_triangle_violation": report.max_triangle_violation,
            "passed": report.passed,
            "trajectories": [
                {
                    "trajectory_id": tr.trajectory_id,
                    "seed": tr.seed,
                    "rows": [
                        {
                            "n": row.n,
                            "total": row.total,
                            "noise_term": row.noise_term,
                            "body_term": row.body_term,
                        }
                        for row in tr.rows
                    ],
                }
                for tr in report.trajectories
            ],
        }
    assert isinstance(report, ExperimentReport)
    return {
        "experiment": report.experiment_id,
        "aggregates": list(report.aggregates),
        "fit": _fit_json(report.fit),
        "passed": report.passed,
        "extras": report.extras,
        "trajectories": [
            {
                "trajectory_id": tr.trajectory_id,
                "seed": tr.seed,
                "mode": tr.mode,
                "rows": [
                    {
                        "n": row.n,
                        "distance": row.distance,
                        "gens_draw": row.gens_draw,
                        "gens_mean": row.gens_mean,
                    }
                    for row in tr.rows
                ],
            }
            for tr in report.trajectories
        ],
    }


@main.command()
@click.option("--n", "n_max", type=int, required=True, help="Block count (1 or 2).")
@click.option(
    "--mode",
    type=click.Choice(["certificate", "exact"]),
    default="certificate",
    show_default=True,
)
@click.option(
    "--omega",
    default="all",
    show_default=True,
    help="Pattern policy: 'all', 'sample:K', or 'psi:HEX' for a single pattern.",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out", show_default=True)
def counterexample(n_max, mode, omega, seed, out):
    """Evaluate the divergence floor over Bernoulli patterns."""
    if n_max >= 3:
        raise click.UsageError(
            f"--n {n_max} is not materializable: block 3 alone needs 2^48 "
            "coordinates (about 2.8e14 floats); only --n 1 or --n 2 fit in memory"
        )
    if n_max < 1:
        raise click.UsageError("--n must be 1 or 2")
    if mode == "exact" and n_max != 1:
        raise click.UsageError("--mode exact requires --n 1 (dimension 16)")
    try:
        report = experiment_counterexample(n_max, omega, seed, mode)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    out = _ensure_out(out)
    rows = [
        (exp_id, format(traj, "#x"), n, dist, md)
        for exp_id, traj, n, dist, md in report.csv_rows()
    ]
    reporting.write_csv(os.path.join(out, "counterexample_patterns.csv"), rows)
    reporting.write_json(
        os.path.join(out, "counterexample_summary.json"), _counterexample_json(report)
    )
    floor_txt = reporting.fmt_real(report.floor)
    click.echo(
        f"evaluated {len(report.patterns)} patterns at N={report.n_sets}: "
        f"min certificate {reporting.fmt_real(report.min_certificate)}"
        + (
            f", min exact {reporting.fmt_real(report.min_exact)}"
            if report.min_exact is not None
            else ""
        )
        + f", floor {floor_txt}"
    )
    if not report.passed:
        click.echo("FAIL: a pattern fell below the floor", err=True)
        sys.exit(1)
    click.echo("PASS: every evaluated pattern stays above the floor")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(file_okay=False), default="out", show_default=True)
@click.option("--seed", type=int, default=None, help="Override the config's master seed.")
def slln(config_path, out, seed):
    """Run a configured convergence experiment and persist its results."""
    try:
        run = runconfig.load_file(config_path)
        if seed is not None:
            run = runconfig.from_payload({**run.payload, "seed": seed})
    except runconfig.ConfigError as exc:
        raise click.UsageError("invalid configuration:\n" + "\n".join(exc.messages)) from exc
    out = _ensure_out(out)
    runners = {
        "fd_slln": experiment_fd_slln,
        "reduced": experiment_reduced,
        "intermediate_fd": experiment_intermediate_fd,
    }
    try:
        report = runners[run.experiment](run.config)
    except GateError as exc:
        raise click.UsageError(f"process rejected: {exc}") from exc
    reporting.write_json(os.path.join(out, "config.json"), run.payload)
    csv_path = os.path.join(out, f"{run.experiment}_trajectories.csv")
    if run.emit_csv:
        reporting.write_csv(csv_path, report.csv_rows())
    if run.emit_json:
        reporting.write_json(os.path.join(out, f"{run.experiment}_report.json"), _report_json(report))
    if run.emit_svg:
        reporting.write_svg(os.path.join(out, f"{run.experiment}.svg"), report.csv_rows())
    if isinstance(report, IntermediateReport):
        click.echo(
            f"{run.experiment}: noise slope {_slope_txt(report.noise_fit)}, "
            f"body slope {_slope_txt(report.body_fit)}, "
            f"max triangle violation {reporting.fmt_real(report.max_triangle_violation)}"
        )
    else:
        click.echo(f"{run.experiment}: median-decay slope {_slope_txt(report.fit)}")
    if report.passed is False:
        click.echo("FAIL: declared thresholds not met", err=True)
        sys.exit(1)


def _slope_txt(fit) -> str:
    return reporting.fmt_real(fit.slope) if fit.status == "ok" else f"({fit.status})"


@main.command()
@click.argument("suite", type=click.Choice(verification.SUITES))
def verify(suite):
    """Run one invariant suite and print per-property results."""
    results = verification.run_suite(suite)
    failed = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        click.echo(f"{status} {name} [{detail}]")
        if not ok:
            failed += 1
    if failed:
        click.echo(f"{failed} of {len(results)} properties failed", err=True)
        sys.exit(1)
    click.echo(f"all {len(results)} properties hold")


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def plot(in_path, out_path):
    """Render a per-checkpoint CSV as a self-contained log-log SVG chart."""
    try:
        rows = reporting.read_csv(in_path)
        svg = reporting.render_svg(rows)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
