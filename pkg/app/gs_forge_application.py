"""gs-forge command-line application module."""

import argparse
import logging
import os
import sys
from collections.abc import Mapping

from pydantic import ValidationError

from app.constants import DEFAULT_MAGNUS_CAP, DEFAULT_SERIES_ORDER, JOBS_ENV_VAR, METRICS_FILE_ENV_VAR, ExitCode
from app.gs_forge_controller import OutputMode, RunConfig, run
from app.sanitization import sanitize_for_logging

# Create a custom logger
logger = logging.getLogger(__name__)

# Constants
DEFAULT_MAX_DEGREE = 8
DEFAULT_MAX_N = 8
DEFAULT_STEPS = 10
MAX_DEFAULT_JOBS = 8


def configure_logging(level: str | None = None) -> None:
    """Configure logging from the flag, else the LOG_LEVEL environment variable.

    Logs go to stderr; stdout carries the report.
    """
    log_level = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    known = logging.getLevelNamesMapping()
    logging.basicConfig(
        level=known.get(log_level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    if log_level not in known:
        logger.warning("Unknown log level %s, using INFO", sanitize_for_logging(log_level))
    else:
        logger.debug("Log level set to %s", log_level)


def default_jobs() -> int:
    return min(MAX_DEFAULT_JOBS, os.cpu_count() or 1)


def resolve_jobs(flag: int | None, environ: Mapping[str, str]) -> int:
    """GS_FORGE_JOBS overrides --jobs; an unusable value is ignored with a warning."""
    override = environ.get(JOBS_ENV_VAR)
    if override is not None:
        if override.strip().isdigit() and int(override) >= 1:
            if flag is not None and flag != int(override):
                logger.warning("%s=%s overrides --jobs %d", JOBS_ENV_VAR, sanitize_for_logging(override), flag)
            return int(override)
        logger.warning("Ignoring %s=%r, expected a positive integer", JOBS_ENV_VAR, sanitize_for_logging(override))
    return flag if flag is not None else default_jobs()


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="Emit one JSON object instead of the text report")
    parser.add_argument("--jobs", type=int, default=None, help=f"Worker threads for per-degree fan-out (default min({MAX_DEFAULT_JOBS}, CPUs); {JOBS_ENV_VAR} overrides)")
    parser.add_argument("--metrics-file", type=str, default=None, help=f"Write Prometheus text exposition here after the run (or set {METRICS_FILE_ENV_VAR})")
    parser.add_argument("--log-level", type=str, default=None, help="Logging level (default LOG_LEVEL or INFO)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(prog="gs-forge", description="Exact checks of Golod-Shafarevich type inequalities for graded algebras and groups")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        subparser = subparsers.add_parser(name, help=help_text)
        _add_common_arguments(subparser)
        return subparser

    for name, help_text in (
        ("dims", "Graded dimensions b_n of a presented algebra"),
        ("gs-check", "Degreewise Golod-Shafarevich inequality"),
        ("koszul", "Exactness and Euler identity of the Koszul complex"),
        ("hilbert", "h(X), h(R), H(B) and (1 - h(X) + h(R)) H(B)"),
    ):
        subparser = add(name, help_text)
        subparser.add_argument("alg", help="Presentation in the .alg format")
        subparser.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE, help="Largest degree")
        if name == "koszul":
            subparser.add_argument("--kernel-basis", action="store_true", help="Print a basis of the boundary kernel")
        if name == "hilbert":
            subparser.add_argument("--grid", nargs="+", default=[], help="Points p/q in (0, 1) for the negative-value test")

    golod = add("golod", "Golod's relation-count certificate")
    golod.add_argument("--gens", type=int, required=True, help="Number of generators k")
    golod.add_argument("--eps", type=str, required=True, help="epsilon as p/q with 0 <= epsilon <= k/2")
    golod.add_argument("--max-degree", type=int, default=DEFAULT_SERIES_ORDER, help="Truncation order")

    serre = add("serre", "Growth of sequences with a_(n+2) >= d1 a_(n+1) - d2 a_n + 1")
    for flag in ("--d1", "--d2", "--a1"):
        serre.add_argument(flag, type=str, default=None, help="Exact rational p/q")
    serre.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="Sequence length a_0..a_steps")
    serre.add_argument("--grp", type=str, default=None, help="Take d1 = |X|, d2 = |R| and a_1 = 1 from a .grp presentation instead")

    fox = add("fox", "Fox derivatives of the relators with reconstruction and cocycle checks")
    fox.add_argument("grp", help="Group presentation in the .grp format")
    fox.add_argument("--prime", type=int, default=None, help="Work over GF(p) instead of Q")
    fox.add_argument("--cap", type=int, default=DEFAULT_MAGNUS_CAP, help="Magnus truncation degree")

    filtration = add("group-filtration", "Dimensions a_n of KG modulo powers of the augmentation ideal")
    filtration.add_argument("gtab", help="Multiplication table in the .gtab format")
    filtration.add_argument("--prime", type=int, required=True, help="Characteristic p")
    filtration.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="Largest index")

    vinberg = add("vinberg", "Vinberg's inequality for a presentation of a finite group")
    vinberg.add_argument("grp", help="Group presentation in the .grp format")
    vinberg.add_argument("gtab", help="Multiplication table of the same group")
    vinberg.add_argument("--prime", type=int, required=True, help="Characteristic p")
    vinberg.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="Largest index")
    vinberg.add_argument("--cap", type=int, default=DEFAULT_MAGNUS_CAP, help="Magnus truncation degree")
    vinberg.add_argument("--grid", nargs="+", default=[], help="Points p/q in (0, 1) for the negative-value test")

    dab = add("dab", "Smith normal form, d(G^ab) and the relation-count bound for p-groups")
    dab.add_argument("grp", help="Group presentation in the .grp format")
    return parser


def config_from_args(args: argparse.Namespace, environ: Mapping[str, str]) -> RunConfig:
    """Build the validated RunConfig; raises pydantic's ValidationError on bad values."""
    inputs = [getattr(args, name) for name in ("alg", "grp", "gtab") if getattr(args, name, None) is not None]
    values: dict[str, object] = {
        "command": args.command,
        "inputs": inputs,
        "output": OutputMode.JSON if args.json else OutputMode.TEXT,
        "jobs": resolve_jobs(args.jobs, environ),
        "metrics_file": args.metrics_file or environ.get(METRICS_FILE_ENV_VAR) or None,
        "kernel_basis": getattr(args, "kernel_basis", False),
        "grid": getattr(args, "grid", []),
    }
    for name, target in (("max_degree", "max_degree"), ("max_n", "max_n"), ("steps", "steps"), ("prime", "prime"), ("gens", "gens"), ("eps", "epsilon"), ("d1", "d1"), ("d2", "d2"), ("a1", "a1"), ("cap", "cap")):
        value = getattr(args, name, None)
        if value is not None:
            values[target] = value
    return RunConfig.model_validate(values)


def main(argv: list[str] | None = None) -> None:
    """Parse the command line, run the subcommand and exit with its code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = config_from_args(args, os.environ)
    except ValidationError as e:
        for error in e.errors():
            logger.error("Invalid %s: %s", ".".join(str(part) for part in error["loc"]), sanitize_for_logging(error["msg"]))
        sys.exit(ExitCode.INPUT_ERROR)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
