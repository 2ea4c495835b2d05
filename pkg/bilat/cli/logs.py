"""Structured progress lines on standard error: `time level logger event key=value ...`."""

import json
import logging
import sys


class StructuredFormatter(logging.Formatter):
    """Renders `extra={"fields": {...}}` as sorted key=value pairs after the event name."""

    def format(self, record: logging.LogRecord) -> str:
        fields = getattr(record, "fields", None) or {}
        parts = [
            self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            record.levelname.lower(),
            record.name,
            record.getMessage().replace(" ", "_"),
        ]
        parts.extend(f"{key}={_render(value)}" for key, value in sorted(fields.items()))
        line = " ".join(parts)
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


def _render(value) -> str:
    if isinstance(value, str):
        return json.dumps(value) if (not value or any(c.isspace() or c in '"=' for c in value)) else value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    return str(value)


def configure_logging(level: int = logging.INFO, stream=None) -> logging.Handler:
    """Install the single stderr handler of the `bilat` logger, replacing a previous one."""
    logger = logging.getLogger("bilat")
    for handler in list(logger.handlers):
        if getattr(handler, "_bilat_cli", False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(StructuredFormatter())
    handler._bilat_cli = True
    logger.addHandler(handler)
    logger.setLevel(level)
    return handler
