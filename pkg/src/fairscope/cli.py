"""Batch command-line interface.

Subcommands: run (full pipeline -> results file), validate (composite table
from a results file), profile (cluster-metrics table), heatmap (delimited
distance-change matrix), synth (generate a synthetic portfolio), serve
(HTTP API). Exit codes: 0 success, 1 validation/configuration error,
2 numerical failure, 64 usage error. FAIRSCOPE_LOG sets the log level
(error|warn|info|debug).
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from .constraints import ConstraintConfig
from .errors import FairscopeError, NumericalError, PipelineStageError
from .pipeline import PipelineConfig, run as run_pipeline
from .portfolio import load_portfolio, save_portfolio
from .synth import SynthConfig, generate

VALIDATE_HEADER = (
    "k, Silhouette (↑), Calinski–Harabasz (↑), "
    "Davies–Bouldin (↓), Dunn (↑), Composite Score (↑)"
)
PROFILE_HEADER = "Cluster, n_points, Total Variance, Performance (±SD), Fairness (±SD)"


def _configure_logging() -> None:
    level = os.environ.get("FAIRSCOPE_LOG", "warn").lower()
    numeric = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "warning": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }.get(level, logging.WARNING)
    logging.basicConfig(level=numeric, format="%(levelname)s %(name)s: %(message)s")


@click.group()
def cli() -> None:
    """Explore fairness-performance model portfolios."""


@cli.command("run")
@click.option("--portfolio", "portfolio_path", required=True, type=click.Path())
@click.option("--format", "fmt", default="auto",
              type=click.Choice(["auto", "structured-object", "delimited-table"]))
@click.option("--sim-threshold", default=0.05, show_default=True)
@click.option("--dissim-threshold", default=0.2, show_default=True)
@click.option("--k-min", default=3, show_default=True)
@click.option("--k-max", default=20, show_default=True)
@click.option("--k-override", default=None, type=int)
@click.option("--baseline", is_flag=True, help="Cluster raw importances (identity metric).")
@click.option("--seed", default=42, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--timings", is_flag=True,
              help="Include wall-clock stage timings (makes the file non-reproducible).")
def run_cmd(portfolio_path, fmt, sim_threshold, dissim_threshold, k_min, k_max,
            k_override, baseline, seed, out_path, timings) -> None:
    """Run the full pipeline and write the results file."""
    p = load_portfolio(portfolio_path, format=fmt)
    cfg = PipelineConfig(
        constraint=ConstraintConfig(
            sim_threshold=sim_threshold, dissim_threshold=dissim_threshold
        ),
        k_grid=tuple(range(k_min, k_max + 1)),
        k_override=k_override,
        baseline_mode=baseline,
        seed=seed,
    )
    result = run_pipeline(p, cfg)
    Path(out_path).write_text(result.to_json(include_timings=timings), encoding="utf-8")
    click.echo(f"k*={result.validation.k_star}, chosen k={result.chosen_k} "
               f"({result.k_source}); results written to {out_path}")


def _load_results(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FairscopeError(f"cannot read results file {path}: {exc}") from exc


@cli.command("validate")
@click.option("--results", "results_path", required=True, type=click.Path())
@click.option("--top", default=5, show_default=True, help="Rows to print (by composite).")
def validate_cmd(results_path, top) -> None:
    """Print the composite validation table, best composite first."""
    data = _load_results(results_path)
    rows = sorted(data["validation"]["rows"], key=lambda r: (-r["composite"], r["k"]))
    click.echo(f"Composite validation metrics (top {top} by composite score)")
    click.echo(VALIDATE_HEADER)
    for row in rows[:top]:
        click.echo(
            f"{row['k']}, {row['silhouette']:.5f}, {row['calinski_harabasz']:.2f}, "
            f"{row['davies_bouldin']:.5f}, {row['dunn']:.5f}, {row['composite']:.5f}"
        )
    click.echo(f"k* = {data['validation']['k_star']}")


@cli.command("profile")
@click.option("--results", "results_path", required=True, type=click.Path())
def profile_cmd(results_path) -> None:
    """Print per-cluster size, total variance, and outcome means."""
    data = _load_results(results_path)
    click.echo("Cluster metrics")
    click.echo(PROFILE_HEADER)
    for c in data["clusters"]:
        click.echo(
            f"{c['cluster_id']}, {c['n_points']}, {c['total_variance']:.6f}, "
            f"{c['performance_mean']:.4f} ± {c['performance_sd']:.4f}, "
            f"{c['fairness_mean']:.4f} ± {c['fairness_sd']:.4f}"
        )


@cli.command("heatmap")
@click.option("--results", "results_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def heatmap_cmd(results_path, out_path) -> None:
    """Export the pairwise distance-change matrix as a delimited file."""
    data = _load_results(results_path)
    hm = data["heatmap"]
    lines = ["id," + ",".join(hm["ordered_ids"])]
    for mid, row in zip(hm["ordered_ids"], hm["delta"]):
        lines.append(mid + "," + ",".join(repr(v) for v in row))
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    click.echo(f"heatmap ({hm['ordering']} order) written to {out_path}")


@cli.command("synth")
@click.option("--models", default=200, show_default=True)
@click.option("--features", default=12, show_default=True)
@click.option("--archetypes", default=5, show_default=True)
@click.option("--noise-sd", default=0.01, show_default=True)
@click.option("--exp-a", default=1.0, show_default=True)
@click.option("--exp-b", default=1.0, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--format", "fmt", default="auto",
              type=click.Choice(["auto", "structured-object", "delimited-table"]))
def synth_cmd(models, features, archetypes, noise_sd, exp_a, exp_b, seed, out_path, fmt) -> None:
    """Generate a synthetic portfolio with planted archetypes."""
    cfg = SynthConfig(
        n_models=models,
        n_features=features,
        n_archetypes=archetypes,
        noise_sd=noise_sd,
        exponent_a=exp_a,
        exponent_b=exp_b,
        seed=seed,
    )
    save_portfolio(generate(cfg), out_path, format=fmt)
    click.echo(f"synthetic portfolio ({models} models, {features} features) "
               f"written to {out_path}")


@cli.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--portfolio", "portfolio_path", default=None, type=click.Path())
@click.option("--cors-origin", default=None, help="Allowed origin for the explorer UI.")
@click.option("--persist-dir", default=None, type=click.Path(),
              help="Directory to mirror each run's results file into.")
def serve_cmd(port, host, portfolio_path, cors_origin, persist_dir) -> None:
    """Start the HTTP API for the explorer UI."""
    import uvicorn

    from .server import create_app

    initial = load_portfolio(portfolio_path) if portfolio_path else None
    app = create_app(initial_portfolio=initial, cors_origin=cors_origin,
                     persist_dir=persist_dir)
    uvicorn.run(app, host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    _configure_logging()
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.UsageError as exc:
        click.echo(exc.format_message(), err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return 64
    except click.exceptions.Abort:
        return 64
    except click.exceptions.ClickException as exc:
        exc.show()
        return 1
    except PipelineStageError as exc:
        kind = 2 if isinstance(exc.cause, NumericalError) else 1
        click.echo(f"error: {exc}", err=True)
        return kind
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 2
    except FairscopeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
