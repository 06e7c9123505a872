"""Prometheus metric collectors for gs-forge runs.

The command-line tool exports them once per run in the node-exporter text file
format, so a scheduled batch of checks can be scraped like a service.
"""

import os
from importlib import metadata

from prometheus_client import REGISTRY, Counter, Gauge, Histogram, Info, write_to_textfile

from app.constants import VALID_COMMANDS
from app.run_metrics import get_run_metrics

SERVICE_VERSION = os.getenv("GS_FORGE_VERSION", "dev")


def _sanitize_command_label(command: str) -> str:
    """Sanitize a subcommand name for use as a Prometheus label.

    Validates the command against the allowlist to prevent label cardinality explosion.

    Args:
        command: The subcommand name.

    Returns:
        The command if valid, otherwise "unknown".
    """
    return command if command in VALID_COMMANDS else "unknown"


def _package_version(name: str) -> str:
    try:
        return metadata.version(name)
    except metadata.PackageNotFoundError:
        return "unknown"


# Counters
gs_forge_runs_total = Counter(
    "gs_forge_runs_total",
    "Total number of gs-forge command runs by exit code",
    ["command", "exit_code"],
)

gs_forge_checks_total = Counter(
    "gs_forge_checks_total",
    "Total number of individual checks evaluated",
    ["command"],
)

gs_forge_check_failures_total = Counter(
    "gs_forge_check_failures_total",
    "Total number of individual checks that failed",
    ["command"],
)

# Histograms
gs_forge_run_duration_seconds = Histogram(
    "gs_forge_run_duration_seconds",
    "Duration of gs-forge command runs in seconds",
    ["command"],
    buckets=(0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0),
)

# Gauges
gs_forge_degrees_computed = Gauge(
    "gs_forge_degrees_computed",
    "Number of degrees or indices computed in this process",
)

gs_forge_check_failure_rate_percent = Gauge(
    "gs_forge_check_failure_rate_percent",
    "Failed checks as a percentage of all checks in this process",
)

avg_gs_forge_degree_time_seconds = Gauge(
    "avg_gs_forge_degree_time_seconds",
    "Average compute time per degree in seconds",
)

# Info
gs_forge_info = Info(
    "gs_forge",
    "gs-forge build information",
)

gs_forge_info.info(
    {
        "service_version": SERVICE_VERSION,
        "numpy": _package_version("numpy"),
        "sympy": _package_version("sympy"),
    }
)


def increment_run(command: str, exit_code: int) -> None:
    gs_forge_runs_total.labels(command=_sanitize_command_label(command), exit_code=str(exit_code)).inc()


def increment_checks(command: str, total: int, failed: int) -> None:
    """Add a batch of evaluated checks.

    Args:
        command: The subcommand that ran them.
        total: Number of checks evaluated.
        failed: How many of them failed.
    """
    safe_command = _sanitize_command_label(command)
    gs_forge_checks_total.labels(command=safe_command).inc(total)
    gs_forge_check_failures_total.labels(command=safe_command).inc(failed)


def observe_run_duration(command: str, duration_seconds: float) -> None:
    gs_forge_run_duration_seconds.labels(command=_sanitize_command_label(command)).observe(duration_seconds)


def update_gauges_from_run_metrics() -> None:
    """Update gauge values from the internal run metrics."""
    metrics = get_run_metrics()
    gs_forge_degrees_computed.set(metrics.degrees_computed)
    gs_forge_check_failure_rate_percent.set(metrics.get_failure_rate_percent())
    avg_gs_forge_degree_time_seconds.set(metrics.get_avg_degree_time_seconds())


def write_metrics_file(path: str) -> None:
    """Refresh the gauges and write every collector to ``path`` in text exposition format."""
    update_gauges_from_run_metrics()
    write_to_textfile(path, REGISTRY)
