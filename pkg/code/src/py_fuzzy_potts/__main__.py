# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""CLI entry point: build measures, run the exact checks and print reports."""
import functools
import os
import pathlib
import sys
from typing import Any, Callable, Optional

import click

from py_fuzzy_potts import coupling
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import report, runner
from py_fuzzy_potts.common import config, error, logger
from py_fuzzy_potts.dto import run_config

_LOGGER = logger.get(__name__)
_CLI_LOG_LEVEL: str = "WARNING"

_OPTIONS = [
    click.option(
        "--config-file",
        required=False,
        help="JSON file with a run configuration; command line options win",
        type=click.Path(file_okay=True, dir_okay=False, resolve_path=True, path_type=pathlib.Path),
    ),
    click.option(
        "--graph-file",
        required=False,
        help="Graph text file: 'vertices N' then one 'u v' line per edge",
        type=click.Path(file_okay=True, dir_okay=False, resolve_path=True, path_type=pathlib.Path),
    ),
    click.option(
        "--family",
        required=False,
        help="Built-in graph family (ignored with --graph-file)",
        type=click.Choice(sorted(graph_mod.FAMILIES), case_sensitive=False),
    ),
    click.option("--size", required=False, type=int, help="Size of the family"),
    click.option("--m", "m", required=False, type=int, help="Paths of length two in the figure1 family"),
    click.option(
        "--measure",
        required=False,
        help="Edge measure. Default: random-cluster",
        type=click.Choice(run_config.MeasureKind.values(), case_sensitive=False),
    ),
    click.option("--p", "p", required=False, help="Edge parameter 'a/b', or comma separated, one per edge"),
    click.option("--q", "q", required=False, help="Cluster weight 'a/b'"),
    click.option("--alpha", required=False, help="Probability 'a/b' of coloring a cluster +1; selects nu"),
    click.option("--q-values", required=False, help="Comma separated q values for sweeps"),
    click.option("--p-values", required=False, help="Comma separated p values for sweeps"),
    click.option("--alpha-values", required=False, help="Comma separated alpha values for sweeps"),
    click.option("--edge", required=False, type=int, help="Edge index e. Default: 0"),
    click.option("--vertex", required=False, type=int, help="Vertex x. Default: lower endpoint of e"),
    click.option(
        "--rule",
        required=False,
        help="Next-edge rule of the coupling",
        type=click.Choice(coupling.EdgeRule.values(), case_sensitive=False),
    ),
    click.option("--samples", required=False, type=int, help="Coupling draws"),
    click.option("--seed", required=False, type=int, help="Random generator seed"),
    click.option("--workers", required=False, type=int, help="Worker processes"),
    click.option(
        "--format",
        "output_format",
        required=False,
        help="Report format. Default: json",
        type=click.Choice(run_config.OutputFormat.values(), case_sensitive=False),
    ),
    click.option("--max-edges", required=False, type=int, help="Cap on |E| for exact tables"),
    click.option("--max-pa-vertices", required=False, type=int, help="Cap on coordinates for all up-set pairs"),
    click.option("--max-joint-bits", required=False, type=int, help="Cap on joint edge/spin table size in bits"),
]


def _run_options(func: Callable) -> Callable:
    for option in reversed(_OPTIONS):
        func = option(func)
    return func


def _override(command: run_config.Command, **kwargs: Any) -> run_config.RunConfig:
    caps = config.Caps(
        max_edges=kwargs.pop("max_edges"),
        max_pa_vertices=kwargs.pop("max_pa_vertices"),
        max_joint_bits=kwargs.pop("max_joint_bits"),
    )
    graph_file: Optional[pathlib.Path] = kwargs.pop("graph_file")
    return run_config.RunConfig(
        command=command,
        graph_file=None if graph_file is None else str(graph_file),
        family=kwargs.pop("family"),
        size=kwargs.pop("size"),
        m=kwargs.pop("m"),
        measure=run_config.MeasureKind.from_str(kwargs.pop("measure")),
        p=kwargs.pop("p"),
        q=kwargs.pop("q"),
        alpha=kwargs.pop("alpha"),
        q_values=kwargs.pop("q_values"),
        p_values=kwargs.pop("p_values"),
        alpha_values=kwargs.pop("alpha_values"),
        edge=kwargs.pop("edge"),
        vertex=kwargs.pop("vertex"),
        caps=None if caps.is_empty() else caps,
        output_format=run_config.OutputFormat.from_str(kwargs.pop("output_format")),
        seed=kwargs.pop("seed"),
        samples=kwargs.pop("samples"),
        workers=kwargs.pop("workers"),
        rule=coupling.EdgeRule.from_str(kwargs.pop("rule")),
        full=kwargs.pop("full", None),
    )


def _execute(command: run_config.Command, config_file: Optional[pathlib.Path], **kwargs: Any) -> None:
    try:
        cfg = runner.load_run_config(config_file, _override(command, **kwargs))
        result = runner.run(cfg)
    except error.SizeCapError as err:
        click.echo(f"Refused: {err}", err=True)
        sys.exit(runner.EXIT_FAILURE)
    except (error.FuzzyPottsError, ValueError, TypeError) as err:
        click.echo(f"Error: {err}", err=True)
        sys.exit(runner.EXIT_FAILURE)
    click.echo(report.render(result, cfg.output_format), nl=False)  # type: ignore
    sys.exit(result.exit_code)


def _command(command: run_config.Command, help_text: str, *extra: Callable) -> Callable:
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(config_file: Optional[pathlib.Path], **kwargs: Any) -> None:
            _LOGGER.debug("Starting '%s' using: '%s'", command.value, kwargs)
            _execute(command, config_file, **kwargs)

        decorated = _run_options(wrapper)
        for option in extra:
            decorated = option(decorated)
        return cli.command(name=command.value, help=help_text)(decorated)

    return decorator


@click.group(help="Exact random cluster, fuzzy Potts and divide and color measures on small graphs.")
def cli() -> None:
    """Click entry-point."""
    logger.set_package_level(os.environ.get(logger.LOG_LEVEL_ENV_VAR_NAME, _CLI_LOG_LEVEL))


@_command(run_config.Command.MEASURE, "Build phi (or nu with --alpha) and print its table")
def measure() -> None:
    """Table of probabilities."""


@_command(run_config.Command.CHECK_PLC, "Positive lattice condition of phi (or nu with --alpha)")
def check_plc() -> None:
    """Lattice condition."""


@_command(run_config.Command.CHECK_PA, "Positive association of phi (or nu with --alpha) over all up-set pairs")
def check_pa() -> None:
    """Positive association."""


@_command(run_config.Command.CHECK_LEMMA2, "Up-sets against {eta_e = 1} given sigma_x = +1, and the induction step")
def check_lemma2() -> None:
    """Conditional edge correlation."""


@_command(run_config.Command.COUPLE, "Build, verify and sample the coupling of phi given eta_e = 1 and eta_e = 0")
def couple() -> None:
    """Coupling."""


@_command(run_config.Command.FIGURE1, "Uniform forest counterexample on the two-terminal family (--m)")
def figure1() -> None:
    """Two-terminal family."""


@_command(run_config.Command.PROBE_Q, "Positive association of nu for q < 1 over a grid; exit 2 on violations")
def probe_q() -> None:
    """Conjecture probe."""


@_command(run_config.Command.BOUNDARY, "Lattice condition of nu around alpha q >= 1, (1 - alpha) q >= 1")
def boundary() -> None:
    """Boundary scan."""


@_command(run_config.Command.ES_CHECK, "Potts Gibbs measure against divide and color of the random cluster model")
def es_check() -> None:
    """Edwards-Sokal cross-check."""


@_command(
    run_config.Command.CORPUS,
    "Acceptance suite over the default corpus",
    click.option("--full", is_flag=True, default=None, help="Complete positive association grid"),
)
def corpus() -> None:
    """Acceptance suite."""


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as err:
        err.show()
        sys.exit(runner.EXIT_FAILURE)
    except click.exceptions.Abort:
        sys.exit(runner.EXIT_FAILURE)


if __name__ == "__main__":
    main()
