"""Log-safe rendering of user text and validated reading of input files."""

import re
from pathlib import Path

from pathvalidate import ValidationError, validate_filepath

from app.exceptions import InputError

CONTROL_CHARACTERS = re.compile(r"[\x00-\x1f\x7f-\x9f]")
TRUNCATION_MARKER = "...[truncated]"


def sanitize_for_logging(text: object, max_length: int = 1000) -> str:
    """Render ``text`` for a log record.

    Presentation files and command-line values reach the logs through here: control
    characters (newlines included) are dropped and the result is cut at ``max_length``.
    """
    rendered = CONTROL_CHARACTERS.sub("", text if isinstance(text, str) else str(text))
    return rendered if len(rendered) <= max_length else rendered[:max_length] + TRUNCATION_MARKER


def normalize_line_endings(content: str) -> str:
    """CRLF and lone CR become LF."""
    return re.sub(r"\r\n?", "\n", content)


def read_input_file(path_text: str) -> str:
    """Validate a user supplied path and read it as UTF-8 text.

    Args:
        path_text: Path as given on the command line.

    Returns:
        str: File content with normalized line endings.

    Raises:
        InputError: If the path is malformed, missing or unreadable.
    """
    try:
        validate_filepath(path_text, platform="auto")
    except ValidationError as e:
        raise InputError(f"Invalid file path {sanitize_for_logging(path_text)!r}: {e.reason.name}") from e

    path = Path(path_text)
    if not path.is_file():
        raise InputError(f"Input file not found: {sanitize_for_logging(path_text)}")
    try:
        content = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read {sanitize_for_logging(path_text)}: {e}") from e
    return normalize_line_endings(content)
