"""bilat: collect demonstrations, augment, train, roll out and evaluate language-conditioned bilateral policies.

Exit status: 0 success, 1 usage error, 2 configuration error, 3 runtime failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from ..config import RunConfig
from ..errors import BilatError
from ..lang.encoders.precomputed import PrecomputedEncoder
from . import commands
from .errors import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, ConfigError, UsageError
from .logs import configure_logging


logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _override(text: str) -> tuple[str, object]:
    key, separator, raw = text.partition("=")
    if not separator or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bilat", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug progress lines")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def stage(name: str, help_text: str, config_required: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text, description=help_text,
                                    formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sub.add_argument("--config", required=config_required, help="run configuration (JSON)")
        sub.add_argument("--set", dest="overrides", action="append", type=_override, default=[],
                         metavar="KEY=VALUE", help="override a top-level config key (value parsed as JSON)")
        sub.add_argument("--seed", type=int, help="override the config seed")
        return sub

    collect = stage("collect", "record scripted teleoperation demonstrations")
    collect.add_argument("--instruction", help="only this instruction (default: every configured one)")
    collect.add_argument("--episodes", type=int, help="episodes per instruction")
    collect.add_argument("--out", help="output directory")

    augment = stage("augment", "split high-rate episodes into phase-offset image-rate episodes",
                    config_required=False)
    augment.add_argument("--in", dest="input", required=True, help="directory of source episodes")
    augment.add_argument("--factor", type=int, help="decimation factor")
    augment.add_argument("--out", required=True, help="output directory")

    train = stage("train", "train the policy on the training split")
    train.add_argument("--data", help="directory of training episodes")
    train.add_argument("--epochs", type=int, help="override the number of epochs")
    train.add_argument("--out", help="checkpoint path")
    train.add_argument("--log", help="training log CSV path")

    rollout = stage("rollout", "run the trained policy in closed loop")
    rollout.add_argument("--checkpoint", help="checkpoint path")
    rollout.add_argument("--instruction", help="only this instruction (default: every configured one)")
    rollout.add_argument("--trials", type=int, help="rollouts per instruction")
    rollout.add_argument("--out", help="output directory")

    evaluate = stage("eval", "score rollouts and write the report")
    evaluate.add_argument("--in", dest="input", help="directory of rollout episodes")
    evaluate.add_argument("--compare", action="append", metavar="DIR",
                          help="further rollout directories to rate (one per model or encoder)")
    evaluate.add_argument("--bins", type=int, default=40, help="histogram bins")
    evaluate.add_argument("--series", action="store_true", help="also write per-tick CSVs of every rollout")
    evaluate.add_argument("--out", help="report path")

    plot = stage("plotdata", "write per-tick and histogram CSVs for plotting", config_required=False)
    plot.add_argument("--in", dest="input", required=True, help="episode file or directory")
    plot.add_argument("--bins", type=int, default=40, help="histogram bins")
    plot.add_argument("--out", help="output directory")

    validate = stage("validate", "check the config and every artifact without writing anything",
                     config_required=False)
    validate.add_argument("paths", nargs="*", help="artifacts or directories to check")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig | None:
    """Effective config: the file, then `--set` overrides, then `--seed`."""
    if args.config is None:
        return None
    path = Path(args.config)
    try:
        config = RunConfig.load(path)
        overrides = dict(args.overrides)
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            config = config.with_overrides(overrides)
    except FileNotFoundError as error:
        raise ConfigError(f"config file {path} does not exist") from error
    except ValidationError as error:
        raise ConfigError(f"{path}: {error}") from error
    for encoder in [config.encoder, *config.comparison_encoders]:
        if isinstance(encoder, PrecomputedEncoder) and not encoder.path.exists():
            raise ConfigError(f"{path}: precomputed embedding file {encoder.path} does not exist")
    return config


_STAGES = {
    "collect": commands.collect,
    "augment": commands.augment,
    "train": commands.train_command,
    "rollout": commands.rollout,
    "eval": commands.evaluate,
    "plotdata": commands.plotdata,
    "validate": commands.validate,
}


def dispatch(argv: list[str]) -> int:
    """Run one subcommand; returns the process exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as error:
        configure_logging(logging.WARNING)
        logger.error(str(error))
        return EXIT_USAGE
    configure_logging(logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO)
    try:
        config = load_config(args)
        _STAGES[args.command](args, config)
    except ConfigError as error:
        logger.error(str(error), extra={"fields": {"command": args.command}})
        return EXIT_CONFIG
    except UsageError as error:
        logger.error(str(error), extra={"fields": {"command": args.command}})
        return EXIT_USAGE
    except (BilatError, OSError, ValueError, KeyError) as error:
        logger.error(f"{type(error).__name__}: {error}", extra={"fields": {"command": args.command}})
        return EXIT_RUNTIME
    logger.info("command finished", extra={"fields": {"command": args.command}})
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
