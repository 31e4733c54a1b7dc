"""
Structured logging configuration
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

# Run-context fields copied into JSON records when present
CONTEXT_FIELDS = ("run_id", "generation", "controller", "error_code", "details", "traceback")


class ReportedErrorFilter(logging.Filter):
    """Drop records already shown to the user as the CLI diagnostic line."""

    def filter(self, record: logging.LogRecord) -> bool:
        return not getattr(record, "reported", False)


class JSONFormatter(logging.Formatter):
    """Format logs as JSON for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        for field in CONTEXT_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None, log_format: str = "console"):
    """
    Setup application logging

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional log file path (always JSON lines)
        log_format: "console" or "json" for the stderr handler
    """
    json_formatter = JSONFormatter()
    console_formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # stderr keeps stdout free for tables and CSV
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(json_formatter if log_format == "json" else console_formatter)
    console_handler.addFilter(ReportedErrorFilter())

    handlers = [console_handler]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(json_formatter)
        handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        handlers=handlers,
        force=True
    )

    # pandas may pull in numexpr, which logs thread setup at INFO
    logging.getLogger("numexpr").setLevel(logging.WARNING)
