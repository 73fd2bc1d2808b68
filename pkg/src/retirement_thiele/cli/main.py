"""
The ``retirement-thiele`` command.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from beartype import beartype
from rich.console import Console
from rich.logging import RichHandler

from retirement_thiele.cli.config import CHECKS, load_scenario
from retirement_thiele.cli.report import emit_report
from retirement_thiele.cli.runner import EXIT_INVALID, run_scenario
from retirement_thiele.exceptions import ScenarioConfigError

LOGGER = logging.getLogger(__name__)


def _names(value: str) -> list[str]:
    """
    Names from a comma separated list.
    """
    return [name.strip() for name in value.split(",") if name.strip()]


def _parser() -> argparse.ArgumentParser:
    """
    The command line parser.
    """
    parser = argparse.ArgumentParser(
        prog="retirement-thiele",
        description=(
            "Solve the reserves of a scenario under each information regime "
            "and compare them with Monte Carlo estimates."
        ),
    )
    parser.add_argument(
        "--config",
        type=Path,
        required=True,
        help="A JSON model file with a scenario object.",
    )
    parser.add_argument("--out-dir", type=Path, help="Where to write.")
    parser.add_argument("--paths", type=int, help="Paths to sample.")
    parser.add_argument("--seed", type=int, help="The master seed.")
    parser.add_argument("--grid-step", type=float, help="The grid step.")
    parser.add_argument(
        "--regimes",
        type=_names,
        help="Comma separated regimes among full, G1, G2 and practice.",
    )
    parser.add_argument(
        "--checks",
        type=_names,
        help=f"Comma separated checks among {', '.join(CHECKS)}.",
    )
    parser.add_argument(
        "--dump-paths",
        action="store_true",
        default=None,
        help="Write the sampled paths.",
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Log debug messages.",
    )
    return parser


@beartype
def main(argv: Sequence[str] | None = None) -> int:
    """
    Run a scenario and print its report; return the exit code.
    """
    arguments = _parser().parse_args(args=argv)
    logging.basicConfig(
        level=logging.DEBUG if arguments.verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True))],
        force=True,
    )
    overrides: dict[str, Any] = {
        key: value
        for key, value in {
            "out_dir": arguments.out_dir,
            "paths": arguments.paths,
            "seed": arguments.seed,
            "grid_step": arguments.grid_step,
            "regimes": arguments.regimes,
            "checks": arguments.checks,
            "dump_paths": arguments.dump_paths,
        }.items()
        if value is not None
    }
    try:
        config = load_scenario(path=arguments.config, overrides=overrides)
    except ScenarioConfigError as exc:
        LOGGER.error("%s", exc)  # noqa: TRY400
        return EXIT_INVALID
    result = run_scenario(config=config)
    if result.exit_code != EXIT_INVALID:
        emit_report(out_dir=result.out_dir, console=Console())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
