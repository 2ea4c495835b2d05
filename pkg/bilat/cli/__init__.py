"""Command-line entry point."""

from .errors import ConfigError, UsageError
from .main import build_parser, dispatch, main


__all__ = ["ConfigError", "UsageError", "build_parser", "dispatch", "main"]
