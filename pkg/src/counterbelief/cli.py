"""Command-line interface exposing every pipeline stage.

Exit codes: 0 on success, 1 when inputs are well-formed but inconsistent
(validation or evidence failures, oracle mismatches), 2 on usage errors.
All randomness is controlled by ``--seed``; no environment variable
influences results.
"""

import json
import sys

import click

from .errors import CounterbeliefError
from .experiments import (
    export_simplex_pmf,
    monte_carlo_errors,
    write_error_curve_csv,
    write_simplex_csv,
)
from .forward import forward_pass, posterior_document
from .graph import expand_belief_graph, graph_document
from .model import load_model, model_hash
from .oracle import DEFAULT_SEQUENCE_CAP, enumerate_posterior, total_variation
from .simulate import RngStream, load_trajectory, save_trajectory, simulate_episode
from .smoothing import backward_pass, smooth

_model_option = click.option(
    "--model",
    "model_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Model JSON file.",
)


@click.group(name="counterbelief")
def cli():
    """Estimate an adversary's sequence of beliefs from its observed actions."""


@cli.command()
@_model_option
@click.option("--horizon", type=click.IntRange(min=1), required=True, help="Number of steps N.")
@click.option("--seed", type=int, required=True, help="Master RNG seed.")
@click.option("--stream", type=int, default=0, show_default=True, help="RNG stream index.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Trajectory JSON output.")
def simulate(model_path, horizon, seed, stream, out):
    """Simulate one episode and write the trajectory."""
    model = load_model(model_path)
    traj = simulate_episode(model, horizon, RngStream(seed, stream))
    save_trajectory(traj, out)
    click.echo(f"simulated {horizon} steps with seed {seed} stream {stream} -> {out}")


@cli.command()
@_model_option
@click.option("--traj", "traj_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Trajectory JSON file.")
@click.option("--mode", type=click.Choice(["filter", "smooth"]), default="filter",
              show_default=True, help="Posterior to compute.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Posterior JSON output.")
@click.option("--dump-graph", "graph_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the reachable-belief graph as JSON.")
def infer(model_path, traj_path, mode, out, graph_path):
    """Compute the per-step posterior over the adversary's beliefs."""
    model = load_model(model_path)
    traj = load_trajectory(traj_path)
    if traj.model_digest is not None and traj.model_digest != model_hash(model):
        raise click.ClickException(
            "trajectory was produced by a different model (hash mismatch); "
            "pass the model file used for simulation"
        )
    graph = expand_belief_graph(model, traj.horizon)
    alpha = forward_pass(model, graph, traj.x, traj.a)
    if mode == "smooth":
        beta = backward_pass(model, graph, traj.x, traj.a)
        pmfs = smooth(alpha, beta, graph)
        doc = posterior_document(graph, pmfs, "smoothed")
    else:
        doc = posterior_document(graph, alpha, "filter")
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    if graph_path is not None:
        with open(graph_path, "w", encoding="utf-8") as fh:
            json.dump(graph_document(graph), fh)
        click.echo(f"wrote graph with layer sizes {graph.layer_sizes} -> {graph_path}")
    click.echo(f"wrote {doc['mode']} posteriors for N={traj.horizon} -> {out}")


@cli.command()
@_model_option
@click.option("--horizon", type=click.IntRange(min=1), required=True, help="Episode length N.")
@click.option("--runs", type=click.IntRange(min=1), required=True, help="Number of episodes R.")
@click.option("--seed", type=int, required=True, help="Master RNG seed; run r uses stream r.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Error-curve CSV output.")
def evaluate(model_path, horizon, runs, seed, out):
    """Monte Carlo mean error curves for the filter and the smoother."""
    model = load_model(model_path)
    curve = monte_carlo_errors(model, horizon, runs, seed)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_error_curve_csv(curve, fh)
    click.echo(f"averaged {runs} runs at horizon {horizon} -> {out}")


@cli.command("export-simplex")
@_model_option
@click.option("--traj", "traj_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Trajectory JSON file; omit to simulate one with --seed.")
@click.option("--seed", type=int, default=None, help="Seed for a fresh episode when --traj is omitted.")
@click.option("--stream", type=int, default=0, show_default=True, help="RNG stream index.")
@click.option("--k", "step", type=click.IntRange(min=0), required=True, help="Query step k.")
@click.option("--horizon", type=click.IntRange(min=1), default=None,
              help="Smoothing horizon N (defaults to the trajectory length).")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="CSV output.")
def export_simplex(model_path, traj_path, seed, stream, step, horizon, out):
    """Per-node filter and smoother masses at one step, as plot-ready CSV."""
    model = load_model(model_path)
    if traj_path is not None:
        traj = load_trajectory(traj_path)
        if horizon is None:
            horizon = traj.horizon
    else:
        if seed is None:
            raise click.UsageError("either --traj or --seed is required")
        if horizon is None:
            raise click.UsageError("--horizon is required when simulating via --seed")
        traj = simulate_episode(model, horizon, RngStream(seed, stream))
    export = export_simplex_pmf(model, traj, step, horizon)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_simplex_csv(export, fh)
    click.echo(f"exported layer {step} of horizon {horizon} ({len(export.rows)} rows) -> {out}")


@cli.command("oracle-check")
@_model_option
@click.option("--horizon", type=click.IntRange(min=1), required=True, help="Episode length N.")
@click.option("--runs", type=click.IntRange(min=1), required=True, help="Number of episodes.")
@click.option("--seed", type=int, required=True, help="Master RNG seed; run r uses stream r.")
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="Maximum allowed total-variation distance.")
@click.option("--max-sequences", type=int, default=DEFAULT_SEQUENCE_CAP, show_default=True,
              help="Enumeration cap on observation sequences.")
def oracle_check(model_path, horizon, runs, seed, tol, max_sequences):
    """Check the recursive posteriors against brute-force enumeration."""
    model = load_model(model_path)
    graph = expand_belief_graph(model, horizon)
    worst = 0.0
    failures = 0
    for r in range(runs):
        traj = simulate_episode(model, horizon, RngStream(seed, r))
        alpha = forward_pass(model, graph, traj.x, traj.a)
        beta = backward_pass(model, graph, traj.x, traj.a)
        gamma = smooth(alpha, beta, graph)
        for k in range(horizon + 1):
            for mode, pmfs in (("filter", alpha), ("smoother", gamma)):
                oracle = enumerate_posterior(
                    model, traj.x, traj.a, k, mode,
                    graph=graph, max_sequences=max_sequences,
                )
                dist = total_variation(pmfs[k].mass, oracle.mass)
                worst = max(worst, dist)
                if dist > tol:
                    failures += 1
                    click.echo(
                        f"mismatch: run {r} step {k} {mode} "
                        f"total variation {dist:.3e} > {tol:.3e}",
                        err=True,
                    )
    if failures:
        click.echo(f"{failures} mismatches across {runs} runs (worst {worst:.3e})", err=True)
        return 1
    click.echo(f"all {runs} runs match the oracle (worst total variation {worst:.3e})")
    return 0


def cli_main(argv=None):
    """Run the CLI programmatically; returns the process exit code."""
    try:
        rv = cli.main(args=argv, prog_name="counterbelief", standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except CounterbeliefError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


def main():
    sys.exit(cli_main())
