"""Shared constants for gs-forge."""

from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes of the command-line front end."""

    OK = 0
    CHECK_FAILED = 1
    INPUT_ERROR = 2


# Subcommands with the input files each of them reads
COMMANDS = {
    "dims": {"inputs": ("alg",)},
    "gs-check": {"inputs": ("alg",)},
    "koszul": {"inputs": ("alg",)},
    "hilbert": {"inputs": ("alg",)},
    "golod": {"inputs": ()},
    "serre": {"inputs": ()},
    "fox": {"inputs": ("grp",)},
    "group-filtration": {"inputs": ("gtab",)},
    "vinberg": {"inputs": ("grp", "gtab")},
    "dab": {"inputs": ("grp",)},
}

# Frozenset of valid subcommand names (derived from COMMANDS)
VALID_COMMANDS: frozenset[str] = frozenset(COMMANDS.keys())

JSON_SCHEMA_VERSION = 1

# Default truncation order for series certificates
DEFAULT_SERIES_ORDER = 20

# Default truncation degree of the Magnus expansion when a relator degree is computed
DEFAULT_MAGNUS_CAP = 12

# Largest prime accepted for GF(p)
MAX_PRIME = 2**31

# Group tables up to this order get an exhaustive associativity check
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 64

JOBS_ENV_VAR = "GS_FORGE_JOBS"
METRICS_FILE_ENV_VAR = "GS_FORGE_METRICS_FILE"
