"""Errors mapped to process exit codes by the command-line entry point."""

from ..errors import BilatError


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class UsageError(BilatError):
    """Unknown subcommand, unknown flag or malformed flag value."""

    exit_code = EXIT_USAGE


class ConfigError(BilatError):
    """The run configuration is missing, unreadable or violates an invariant."""

    exit_code = EXIT_CONFIG
