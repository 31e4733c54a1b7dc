"""
STRUCTURED ERROR HANDLING FOR THE CLI
=====================================
Maps exceptions raised anywhere in the toolkit to a logged record, a single
diagnostic line on stderr and a process exit code.

EXIT CODES:
- 0: success
- 1: runtime failure (bad data, diverged simulation, internal error)
- 2: usage error (unknown flags, missing files, invalid config)
"""

import logging
import sys
import traceback
from typing import Optional, TextIO

from .exceptions import BlimpError, ErrorCode

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1


def format_diagnostic(exc: BaseException) -> str:
    """One-line diagnostic, newlines collapsed."""
    if isinstance(exc, BlimpError):
        text = f"error [{exc.code.value}]: {exc.message}"
    else:
        text = f"error [{ErrorCode.SYS_INTERNAL_ERROR.value}]: {type(exc).__name__}: {exc}"
    return " ".join(text.split())


def handle_cli_exception(exc: BaseException, stream: Optional[TextIO] = None) -> int:
    """
    Log an exception and convert it to an exit code.

    Args:
        exc: Exception raised by a subcommand
        stream: Where the diagnostic line goes (default stderr)

    Returns:
        Process exit code
    """
    stream = stream or sys.stderr

    if isinstance(exc, BlimpError):
        record = exc.to_dict()["error"]
        logger.error(
            f"{type(exc).__name__}: {record['code']} - {record['message']}",
            extra={"error_code": record["code"], "details": record["details"], "reported": True}
        )
        exit_code = exc.exit_code
    else:
        logger.error(
            f"Unhandled exception: {type(exc).__name__} - {exc}",
            extra={"traceback": "".join(traceback.format_exception(type(exc), exc, exc.__traceback__)), "reported": True}
        )
        exit_code = EXIT_FAILURE

    print(format_diagnostic(exc), file=stream)
    return exit_code
