"""
Scale-free graph generator CLI - Main Entry Point

Usage:
    python -m graph.main generate --algorithm se-b --n 10000 --m 5 --z 5 --seed 7 --out g.txt
    python -m graph.main analyze --in g.txt --degree-hist hist.csv --clustering --m 5
    python -m graph.main verify --mode inclusion --algorithm se-c --n 60 --m 4 --trials 1000000
    python -m graph.main selftest

Exit codes: 0 success, 1 usage or IO error, 2 infeasible initial graph,
3 failed verification.
"""

import logging
import os
import sys
import time

import click
import numpy as np
import orjson
from pydantic import BaseModel, ValidationError
from scipy.stats import norm

from analysis.clustering import clustering_stats, theoretical_lcc_constants
from analysis.degree import degree_histogram, fit_report, write_histogram_csv
from graph.data import EdgeListError, format_tableau, read_edge_list, write_edge_list
from graph.generate import SEED_BOUND, Generator, GeneratorConfig
from graph.initial import InitialGraphError, InitialGraphSpec
from graph.nodes import Algorithm
from graph.settings import configure_logging
from graph.state import triangle_count
from verify.harness import invariant_harness
from verify.oracle import binomial_z, inclusion_oracle, joint_oracle
from verify.selftest import run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS


def _emit_json(model: BaseModel | dict, out: str | None = None) -> None:
    data = model.model_dump(mode="json", by_alias=True) if isinstance(model, BaseModel) else model
    payload = orjson.dumps(data, option=JSON_OPTIONS)
    if out is None:
        click.echo(payload.decode())
    else:
        with open(out, "wb") as fh:
            fh.write(payload + b"\n")
        logger.info("wrote report to %s", out)


def _resolve_seed(seed: int | None) -> int:
    """Absent seeds are drawn from OS entropy and printed so the run can be repeated."""
    if seed is not None:
        return seed
    seed = np.random.SeedSequence().entropy % SEED_BOUND
    click.echo(f"seed: {seed}", err=True)
    return seed


def _parse_initial(_ctx, _param, value: str | None) -> InitialGraphSpec | None:
    if value is None:
        return None
    try:
        return InitialGraphSpec.parse(value)
    except (ValueError, ValidationError) as exc:
        raise click.BadParameter(str(exc)) from None


def generator_options(func):
    """Flags shared by every command that builds a GeneratorConfig."""
    options = [
        click.option("--algorithm", type=click.Choice([a.value for a in Algorithm]), default="se-a", show_default=True),
        click.option("--n", "n", type=int, required=True, help="Target vertex count."),
        click.option("--m", "m", type=int, default=2, show_default=True, help="Edges per newborn vertex."),
        click.option("--z", "z", type=int, default=1, show_default=True, help="Edges or hyperedges drawn per round."),
        click.option("--seed", type=click.IntRange(0, SEED_BOUND - 1), default=None),
        click.option("--initial", callback=_parse_initial, default=None,
                     help="complete:K, gnm:V or file:PATH (default K_m, or K_{m+1} for se-b-star)."),
        click.option("--sec-width", type=int, default=None, help="Hyperedges re-partitioned per se-c round."),
        click.option("--checked", is_flag=True, help="Check every inserted edge for simplicity."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_config(algorithm, n, m, z, seed, initial, sec_width, checked) -> GeneratorConfig:
    return GeneratorConfig(
        algorithm=Algorithm(algorithm),
        n=n,
        m=m,
        z=z,
        seed=_resolve_seed(seed),
        initial=initial,
        sec_shuffle_width=sec_width,
        checked=checked,
    )


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
def cli(verbose: bool):
    configure_logging("DEBUG" if verbose else None)


@cli.command()
@generator_options
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
@click.option("--dump-tableau", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Also write the final tableau, one sorted hyperedge per line.")
@click.option("--progress", is_flag=True)
def generate(out, dump_tableau, progress, **flags) -> int:
    """Grow a graph and write it as an edge list."""
    config = _build_config(**flags)
    started = time.perf_counter()
    gen = Generator(config)
    g = gen.run(progress=progress)
    elapsed = time.perf_counter() - started

    write_edge_list(g, out)
    if dump_tableau and gen.tableau is not None:
        with open(dump_tableau, "w", encoding="ascii", newline="") as fh:
            fh.write(format_tableau(gen.tableau.edges))
    click.echo(f"n={g.num_vertices} edges={g.num_edges} seconds={elapsed:.3f}")
    return EXIT_OK


@cli.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--degree-hist", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--clustering", is_flag=True, help="Report local clustering statistics.")
@click.option("--m", "m", type=int, default=None, help="Edges per vertex, for the theoretical degree law.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def analyze(in_path, degree_hist, clustering, m, out) -> int:
    """Degree histogram, degree-law fit and clustering of an edge list."""
    g = read_edge_list(in_path)
    summary: dict = {"vertices": g.num_vertices, "edges": g.num_edges}

    h = degree_histogram(g)
    if degree_hist:
        write_histogram_csv(h, m, degree_hist)
    if m is not None:
        try:
            summary["fit"] = fit_report(h, m).model_dump(mode="json")
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
    if clustering:
        stats = clustering_stats(g)
        c_avg, variance = theoretical_lcc_constants()
        summary["clustering"] = {
            "mean": stats.mean,
            "variance": stats.variance,
            "triangles": triangle_count(g),
            "theoretical_mean": c_avg,
            "theoretical_variance": variance,
        }
    _emit_json(summary, out)
    return EXIT_OK


def _parse_set(value: str | None) -> list[int] | None:
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated vertex ids, got {value!r}") from None


@cli.command()
@generator_options
@click.option("--mode", type=click.Choice(["inclusion", "joint", "invariants"]), required=True)
@click.option("--trials", type=click.IntRange(1), default=100_000, show_default=True)
@click.option("--set", "target_set", default=None, help="Comma-separated target set for joint mode.")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.01, show_default=True)
@click.option("--workers", type=click.IntRange(1), default=None,
              help="Worker threads; fixes how trials split into RNG streams (default: all cores).")
@click.option("--steps-to-check", type=click.IntRange(0), default=1_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--progress", is_flag=True)
def verify(mode, trials, target_set, alpha, workers, steps_to_check, out, progress, **flags) -> int:
    """
    Check a generator: inclusion and joint modes grow a state to --n and
    replay its next round --trials times; invariants mode runs the harness.
    """
    config = _build_config(**flags)
    workers = workers or os.cpu_count() or 1

    if mode == "invariants":
        report = invariant_harness(config, steps_to_check)
        _emit_json(report, out)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

    gen = Generator(config)
    gen.run()
    # Replays draw from a stream separate from the one that grew the state.
    replay_seed = config.seed + 1

    if mode == "inclusion":
        report = inclusion_oracle(gen, trials, replay_seed, alpha=alpha, workers=workers, progress=progress)
        _emit_json(report, out)
        return EXIT_OK if report.summary.passed else EXIT_VERIFY_FAILED

    members = _parse_set(target_set)
    if members is None:
        raise click.UsageError("joint mode needs --set")
    try:
        report = joint_oracle(gen, members, trials, replay_seed, workers=workers, progress=progress)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--set") from None
    _emit_json(report, out)
    if report.exact is None:
        return EXIT_OK
    z = binomial_z(report.hits, report.trials, report.exact)
    return EXIT_OK if abs(z) < norm.isf(alpha / 2) else EXIT_VERIFY_FAILED


@cli.command()
@click.option("--seed", type=click.IntRange(0, SEED_BOUND - 1), default=None)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def selftest(seed, out) -> int:
    """Fast acceptance checks for CI smoke testing."""
    report = run_selftest(_resolve_seed(seed))
    _emit_json(report, out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def main(argv: list[str] | None = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="graph.main", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except InitialGraphError as exc:
        click.echo(f"error: {exc.message}", err=True)
        return EXIT_INFEASIBLE
    except ValidationError as exc:
        click.echo(f"error: invalid configuration\n{exc}", err=True)
        return EXIT_USAGE
    except (EdgeListError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
