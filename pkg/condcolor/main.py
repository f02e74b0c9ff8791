# main.py - condcolor CLI (solver + theorem oracle harness)

import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional, Tuple

import click
from dotenv import load_dotenv
from pydantic import ValidationError

# Allow running from repo root or ./condcolor directory
ROOT_DIR = Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from condcolor.condcolor_modules.graph_core import Family, FamilySpec, Graph, GraphError, build_family
from condcolor.condcolor_modules.graph_io import format_graph, read_coloring, read_graph, write_coloring
from condcolor.condcolor_modules.oracles import (
    SHALLOW_LINE_NOTE,
    Prediction,
    hint_for,
    predict_bipartite_common,
    predict_complete,
    predict_gear,
    predict_line_kary,
    predict_path,
    predict_uniqueness,
    predict_wheel,
)
from condcolor.condcolor_modules.reports import TIMEOUT, Report, ReportFormat, ReportWriter, compare
from condcolor.condcolor_modules.solver import (
    SolverTimeout,
    chi_r,
    is_uniquely_colorable,
    lower_bound,
    remaining_ms,
    verify,
)
from condcolor.sweep_engine import CheckKind, SweepConfig, SweepEngine, load_sweep_config

# Load environment variables from .env if present
load_dotenv()

DEFAULT_TIMEOUT_MS = 10_000.0

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_TIMEOUT = 3

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool):
    level = "DEBUG" if verbose else os.getenv("CONDCOLOR_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def env_number(name: str, default, cast=float):
    """Positive number from the environment; a malformed value is a usage error (exit 1)."""
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        value = cast(raw)
    except ValueError:
        raise click.ClickException(f"{name} must be a positive number, got {raw!r}")
    if value <= 0:
        raise click.ClickException(f"{name} must be a positive number, got {raw!r}")
    return value


def graph_input_options(func):
    """--family/--params or --graph, shared by the commands that take one instance."""
    options = [
        click.option("--family", type=click.Choice([f.value for f in Family]), default=None,
                     help="Generated family, e.g. gear"),
        click.option("--params", default="", help="Family parameters, e.g. n=3 or k=2,h=3"),
        click.option("--graph", "graph_path", type=click.Path(path_type=Path), default=None,
                     help="Graph file (p edge n m / e u v / l v tag)"),
        click.option("--seed", type=int, default=None, help="Seed for random-tree / prop2-chain"),
        click.option("--allow-disconnected", is_flag=True, help="Accept disconnected graph files"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def output_options(func):
    options = [
        click.option("--format", "fmt", type=click.Choice([f.value for f in ReportFormat]),
                     default=ReportFormat.JSON.value, show_default=True),
        click.option("--out", type=click.Path(path_type=Path), default=None, help="Report file (default stdout)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _family_spec(family: str, params: str, seed: Optional[int]) -> FamilySpec:
    spec = FamilySpec.parse(family, params)
    if seed is not None and "seed" not in spec.params and spec.family in (Family.RANDOM_TREE, Family.PROP2_CHAIN):
        spec = FamilySpec(family=spec.family, params={**spec.params, "seed": seed})
    return spec


def load_instance(
    family: Optional[str],
    params: str,
    graph_path: Optional[Path],
    seed: Optional[int],
    allow_disconnected: bool,
) -> Tuple[Graph, str, Optional[FamilySpec]]:
    """Resolve the CLI input into (graph, instance name, family spec or None)."""
    if (family is None) == (graph_path is None):
        raise click.ClickException("give exactly one of --family or --graph")
    try:
        if graph_path is not None:
            return read_graph(graph_path, allow_disconnected=allow_disconnected), str(graph_path), None
        spec = _family_spec(family, params, seed)
        return build_family(spec), spec.key, spec
    except (GraphError, ValidationError, ValueError, OSError) as e:
        raise click.ClickException(str(e)) from e


def _spec_seed(spec: Optional[FamilySpec]) -> Optional[int]:
    if spec is None:
        return None
    seed = spec.params.get("seed")
    return seed if isinstance(seed, int) else None


def family_prediction(
    spec: Optional[FamilySpec], g: Graph, r: int, timeout_ms: float, allow_shallow: bool = False
) -> Optional[Prediction]:
    """Closed-form chi_r claim for the generated family, when one exists and applies."""
    if spec is None:
        return None
    family = spec.family
    try:
        if family is Family.GEAR:
            prediction = predict_gear(spec.int_param("n"), r, timeout_ms=timeout_ms)
        elif family is Family.WHEEL:
            prediction = predict_wheel(spec.int_param("n"), r, timeout_ms=timeout_ms)
        elif family is Family.PATH:
            prediction = predict_path(spec.int_param("n"), r)
        elif family is Family.COMPLETE:
            prediction = predict_complete(spec.int_param("n"), r)
        elif family is Family.COMPLETE_BIPARTITE:
            prediction = predict_bipartite_common(g, r)
        elif family is Family.LINE_OF_KARY_TREE:
            prediction = predict_line_kary(spec.int_param("k"), spec.int_param("h"), r, allow_shallow=allow_shallow)
        else:
            return None
    except (SolverTimeout, ValueError) as e:
        logger.warning(f"[Oracle] no prediction for {spec.key}: {e}")
        return None
    return prediction if prediction.applicable else None


def _emit(report: Report, fmt: str, out: Optional[Path]):
    try:
        ReportWriter(ReportFormat(fmt), out).write_all([report])
    except OSError as e:
        raise click.ClickException(f"cannot write report: {e}") from e


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="DEBUG logging on stderr")
def cli(verbose: bool):
    """Exact conditional (k, r)-coloring solver and theorem checks."""
    _configure_logging(verbose)


@cli.command()
@click.option("--family", type=click.Choice([f.value for f in Family]), required=True)
@click.option("--params", default="", help="Family parameters, e.g. n=3")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Graph file (default stdout)")
def gen(family: str, params: str, seed: Optional[int], out: Optional[Path]):
    """Generate a family instance in the graph file format."""
    g, _, _ = load_instance(family, params, None, seed, False)
    text = format_graph(g)
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise click.ClickException(f"cannot write {out}: {e}") from e


@cli.command()
@graph_input_options
@click.option("--r", "r", type=click.IntRange(min=1), required=True)
@click.option("--timeout-ms", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Per-instance budget (default: CONDCOLOR_TIMEOUT_MS or 10000)")
@click.option("--witness", type=click.Path(path_type=Path), default=None, help="Write the witness coloring here")
@click.option("--allow-shallow", is_flag=True, help="Run the line-graph prediction at h = 2 as well")
@output_options
def chi(family, params, graph_path, seed, allow_disconnected, r, timeout_ms, witness, allow_shallow, fmt, out):
    """Compute chi_r with a certified witness."""
    timeout_ms = timeout_ms or env_number("CONDCOLOR_TIMEOUT_MS", DEFAULT_TIMEOUT_MS)
    g, instance, spec = load_instance(family, params, graph_path, seed, allow_disconnected)
    prediction = family_prediction(spec, g, r, timeout_ms, allow_shallow)
    shallow = prediction is not None and prediction.note == SHALLOW_LINE_NOTE
    base = dict(instance=instance, n=g.n, m=g.m, r=r, seed=_spec_seed(spec),
                in_paper_scope=not (allow_disconnected or shallow))
    try:
        solved = chi_r(g, r, timeout_ms=timeout_ms)
    except SolverTimeout as e:
        _emit(Report(**base, chi_r=TIMEOUT, lower_bound=lower_bound(g, r), prediction=prediction,
                     theorem=prediction.source.value if prediction else None,
                     nodes_explored=e.nodes, elapsed_ms=e.elapsed_ms), fmt, out)
        click.echo(f"timeout: {e}", err=True)
        sys.exit(EXIT_TIMEOUT)

    if witness is not None:
        try:
            write_coloring(solved.witness, witness)
        except OSError as e:
            raise click.ClickException(f"cannot write witness: {e}") from e
    report = Report(
        **base,
        theorem=prediction.source.value if prediction else None,
        chi_r=solved.chi_r,
        lower_bound=solved.lower_bound_used,
        prediction=prediction,
        match=compare(prediction, solved.chi_r),
        nodes_explored=solved.nodes_explored,
        elapsed_ms=solved.elapsed_ms,
        note=prediction.note if prediction else None,
    )
    _emit(report, fmt, out)


@cli.command()
@graph_input_options
@click.option("--r", "r", type=click.IntRange(min=1), required=True)
@click.option("--timeout-ms", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Per-instance budget (default: CONDCOLOR_TIMEOUT_MS or 10000)")
@output_options
def unique(family, params, graph_path, seed, allow_disconnected, r, timeout_ms, fmt, out):
    """Decide unique (chi_r, r)-colorability; partitions are counted up to 2."""
    timeout_ms = timeout_ms or env_number("CONDCOLOR_TIMEOUT_MS", DEFAULT_TIMEOUT_MS)
    g, instance, spec = load_instance(family, params, graph_path, seed, allow_disconnected)
    base = dict(instance=instance, n=g.n, m=g.m, r=r, seed=_spec_seed(spec), in_paper_scope=not allow_disconnected)
    started = time.perf_counter()
    try:
        prediction = predict_uniqueness(g, r, hint_for(spec, g), timeout_ms=timeout_ms) if spec else None
        if prediction is not None and not prediction.applicable:
            prediction = None
        is_unique, result = is_uniquely_colorable(g, r, timeout_ms=remaining_ms(timeout_ms, started))
    except SolverTimeout as e:
        _emit(Report(**base, chi_r=TIMEOUT, lower_bound=lower_bound(g, r),
                     nodes_explored=e.nodes, elapsed_ms=e.elapsed_ms), fmt, out)
        click.echo(f"timeout: {e}", err=True)
        sys.exit(EXIT_TIMEOUT)

    report = Report(
        **base,
        theorem=prediction.source.value if prediction else None,
        chi_r=result.k,
        lower_bound=lower_bound(g, r),
        unique=is_unique,
        partitions=len(result.partitions),
        prediction=prediction,
        match=compare(prediction, result.k, is_unique),
        nodes_explored=result.nodes_explored,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        note=prediction.note if prediction else None,
    )
    _emit(report, fmt, out)


@cli.command(name="verify")
@graph_input_options
@click.option("--coloring", "coloring_path", type=click.Path(path_type=Path), required=True,
              help="Witness file, one 'v<id> <color>' line per vertex")
@click.option("--r", "r", type=click.IntRange(min=1), required=True)
def verify_cmd(family, params, graph_path, seed, allow_disconnected, coloring_path, r):
    """Check a coloring against (C1), (C2) and surjectivity."""
    g, _, _ = load_instance(family, params, graph_path, seed, allow_disconnected)
    try:
        coloring = read_coloring(coloring_path)
        verdict = verify(g, coloring, r)
    except (GraphError, ValidationError, ValueError, OSError) as e:
        raise click.ClickException(str(e)) from e
    click.echo(verdict.describe())
    sys.exit(EXIT_OK if verdict.ok else EXIT_MISMATCH)


@cli.command(name="check-theorems")
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Sweep config JSON (default: packaged grid)")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes")
@click.option("--timeout-ms", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Per-instance timeout, overrides the config")
@click.option("--allow-shallow", is_flag=True, help="Include h = 2 in line-graph checks")
@click.option("--format", "fmt", type=click.Choice([f.value for f in ReportFormat]), default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def check_theorems(config_path, jobs, timeout_ms, allow_shallow, fmt, out):
    """Sweep the grid, compare solver output to every applicable oracle."""
    try:
        config = load_sweep_config(config_path)
    except (ValidationError, ValueError, OSError) as e:
        raise click.ClickException(f"invalid sweep config: {e}") from e

    updates = {}
    env_timeout = env_number("CONDCOLOR_TIMEOUT_MS", None)
    if timeout_ms is not None:
        updates["timeout_ms"] = timeout_ms
    elif env_timeout is not None:
        updates["timeout_ms"] = env_timeout
    if allow_shallow:
        updates["entries"] = [
            e.model_copy(update={"allow_shallow": True}) if e.check is CheckKind.LINE_KARY else e
            for e in config.entries
        ]
    try:
        config = SweepConfig.model_validate(config.model_copy(update=updates).model_dump())
    except ValidationError as e:
        raise click.ClickException(f"invalid sweep config: {e}") from e

    workers = jobs or env_number("CONDCOLOR_JOBS", config.jobs, cast=int)
    result = SweepEngine(config, jobs=workers).run()

    target = out or (Path(config.output) if config.output else None)
    try:
        ReportWriter(ReportFormat(fmt or config.format), target).write_all(result.rows)
    except OSError as e:
        raise click.ClickException(f"cannot write report: {e}") from e

    click.echo(result.summary.describe(), err=True)
    for error in result.errors:
        click.echo(f"error: {error}", err=True)
    sys.exit(result.exit_code)


def main():
    """Console entry; usage errors exit 1 so 2 and 3 stay reserved for verdicts."""
    try:
        cli.main(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    except click.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
