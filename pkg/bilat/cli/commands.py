"""Pipeline stages behind the subcommands. Each takes the parsed arguments and the effective config."""

import argparse
import json
import logging
import re
from pathlib import Path

from ..config import RunConfig
from ..datasets.codec import read_episode, write_episode
from ..datasets.dabi import DabiConfig, dabi_augment
from ..datasets.episode import Episode
from ..datasets.manifest import EPISODE_SUFFIX, MANIFEST_NAME, episode_files, read_manifest, write_manifest
from ..datasets.recorder import collect_demonstration
from ..evaluation.errors import EmptyWindowError, MissingSceneLogError
from ..evaluation.force import force_accuracy
from ..evaluation.histograms import Histogram, grip_histogram, pooled_histogram
from ..evaluation.outcomes import TaskOutcome, detect_outcome, hold_window
from ..evaluation.plotdata import write_histogram_csv, write_series_csv
from ..evaluation.report import read_report, write_report
from ..lang import encode
from ..policy.checkpoint import load_checkpoint, save_checkpoint
from ..policy.train import LOG_COLUMNS, TrainingLog, train
from ..runtime.rollout import run_rollout
from .errors import ConfigError


logger = logging.getLogger(__name__)

CHECKPOINT_SUFFIX = ".blatm"
TORQUE_RANGE = (-0.05, 0.35)


def slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def _instructions(args: argparse.Namespace, config: RunConfig) -> list[str]:
    if getattr(args, "instruction", None) is None:
        return config.instructions
    if args.instruction not in config.experts:
        known = ", ".join(repr(text) for text in config.instructions)
        raise ConfigError(f"instruction {args.instruction!r} has no expert targets in the config (known: {known})")
    return [args.instruction]


def _load_dir(directory: Path, split: str) -> list[tuple[Path, Episode]]:
    files = episode_files(directory, split)
    if not files:
        raise ConfigError(f"{directory} holds no `{split}` episodes")
    return [(path, read_episode(path)) for path in files]


def _relist(directory: Path, split: str) -> None:
    """Rewrite the manifest so `split` lists every episode file of the directory."""
    entries = read_manifest(directory) if (directory / MANIFEST_NAME).exists() else {}
    entries[split] = sorted(path.name for path in directory.glob(f"*{EPISODE_SUFFIX}"))
    write_manifest(directory, entries)


def collect(args: argparse.Namespace, config: RunConfig) -> None:
    out = Path(args.out or config.paths.demos)
    out.mkdir(parents=True, exist_ok=True)
    count = args.episodes or config.episodes_per_instruction
    sim = config.simulation(with_leaders=True)
    controller = config.controller()
    for instruction in _instructions(args, config):
        index = config.instructions.index(instruction)
        for trial in range(count):
            seed = config.seed * 1000 + index * 100 + trial
            episode = collect_demonstration(
                sim, controller, config.experts[instruction], instruction, config.demo_duration, seed,
                template=config.template, operator=config.operator,
                annotations={"run_config": config.provenance()},
            )
            write_episode(episode, out / f"{config.task.task}_{slug(instruction)}_{trial:03d}{EPISODE_SUFFIX}")
    _relist(out, "train")


def augment(args: argparse.Namespace, config: RunConfig | None) -> None:
    source = Path(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    factor = args.factor or (config.dabi.factor if config is not None else 10)
    written = 0
    for path, episode in _load_dir(source, "train"):
        if factor < 1 or episode.control_rate % factor:
            raise ConfigError(f"factor {factor} does not divide the {episode.control_rate} Hz rate of {path}")
        cfg = DabiConfig(source_rate=episode.control_rate, target_rate=episode.control_rate // factor)
        for offset, augmented in enumerate(dabi_augment(episode, cfg)):
            write_episode(augmented, out / f"{path.stem}_o{offset:02d}{EPISODE_SUFFIX}")
            written += 1
    _relist(out, "train")
    logger.info("augmentation finished", extra={"fields": {"episodes": written, "factor": factor}})


def train_command(args: argparse.Namespace, config: RunConfig) -> None:
    source = Path(args.data or config.paths.augmented)
    episodes = [episode for _, episode in _load_dir(source, "train")]
    for episode in episodes:
        if episode.control_rate != episode.image_rate:
            logger.warning("training episode is not at the image rate; augment it first",
                           extra={"fields": {"control_rate": episode.control_rate, "image_rate": episode.image_rate}})
            break
    encoder = config.language_encoder()
    embeddings = [encode(episode.instruction, encoder, config.template).values for episode in episodes]
    settings = config.training
    if args.epochs is not None:
        settings = settings.model_copy(update={"epochs": args.epochs})
    policy, log = train(episodes, embeddings, config.policy_config(encoder.dim), settings,
                        seed=config.seed, encoder_id=encoder.encoder_id)
    save_checkpoint(policy, args.out or config.paths.checkpoint, run_config=config.provenance())
    log.write_csv(args.log or config.paths.training_log)


def rollout(args: argparse.Namespace, config: RunConfig) -> None:
    policy, _ = load_checkpoint(args.checkpoint or config.paths.checkpoint)
    out = Path(args.out or config.paths.rollouts)
    out.mkdir(parents=True, exist_ok=True)
    trials = args.trials or config.rollout.trials
    encoder = config.language_encoder()
    for instruction in _instructions(args, config):
        index = config.instructions.index(instruction)
        for trial in range(trials):
            seed = config.seed * 1000 + 500 + index * 100 + trial
            name = f"{config.task.task}_{slug(instruction)}_{trial:03d}"
            episode, _ = run_rollout(policy, config.task, config.controller(), encoder,
                                     config.rollout_config(instruction, seed), template=config.template,
                                     bands=config.bands, telemetry_path=out / f"{name}.telemetry.csv")
            episode = episode.model_copy(update={
                "annotations": {**episode.annotations, "run_config": config.provenance()}})
            write_episode(episode, out / f"{name}{EPISODE_SUFFIX}")
    _relist(out, "rollout")


def _angle_range(config: RunConfig) -> tuple[float, float]:
    return (min(band.angle[0] for band in config.bands.bands) - 0.2,
            max(band.angle[1] for band in config.bands.bands) + 0.2)


def _hold_histograms(groups: dict[str, list[Episode]], config: RunConfig, bins: int) -> dict[str, Histogram]:
    """Gripper torque and angle histograms over the hold windows of every rollout, per instruction."""
    histograms = {}
    for instruction, episodes in groups.items():
        band = config.bands.find(episodes[0])
        held = [(episode, hold_window(episode, band)) for episode in episodes]
        held = [(episode, window) for episode, window in held if window is not None]
        if not held:
            continue
        for channel, value_range in (("torque", TORQUE_RANGE), ("angle", _angle_range(config))):
            histograms[f"{slug(instruction)}.{channel}"] = pooled_histogram(
                [grip_histogram(episode, channel, window, bins, value_range) for episode, window in held])
    return histograms


def _score_dir(directory: Path, config: RunConfig) -> tuple[list[TaskOutcome], dict[str, list[Episode]],
                                                              dict[str, Episode]]:
    outcomes, groups, named = [], {}, {}
    split = "rollout" if (directory / MANIFEST_NAME).exists() and "rollout" in read_manifest(directory) else "train"
    for path, episode in _load_dir(directory, split):
        outcome = detect_outcome(episode, bands=config.bands).model_copy(update={"label": path.stem})
        outcomes.append(outcome)
        groups.setdefault(episode.instruction, []).append(episode)
        named[path.stem] = episode
    return outcomes, groups, named


def evaluate(args: argparse.Namespace, config: RunConfig) -> None:
    primary = Path(args.input or config.paths.rollouts)
    outcomes, groups, named = _score_dir(primary, config)
    runs = [(primary.name, groups)]
    for extra in args.compare or []:
        _, extra_groups, _ = _score_dir(Path(extra), config)
        runs.append((Path(extra).name, extra_groups))
    ratings = []
    for label, run in runs:
        try:
            ratings.append(force_accuracy(run, config.bands, bins=args.bins, label=label))
        except EmptyWindowError as error:
            logger.warning("force accuracy not rated", extra={"fields": {"run": label, "reason": str(error)}})
    histograms = _hold_histograms(groups, config, args.bins)
    write_report(outcomes, histograms, args.out or config.paths.report, force=ratings,
                 episodes=named if args.series else None, run_config=config.provenance())


def plotdata(args: argparse.Namespace, config: RunConfig | None) -> None:
    source = Path(args.input)
    out = Path(args.out or (config.paths.plotdata if config is not None else "plotdata"))
    paths = [source] if source.is_file() else sorted(source.glob(f"*{EPISODE_SUFFIX}"))
    if not paths:
        raise ConfigError(f"{source} holds no episode files")
    histograms = {}
    for path in paths:
        episode = read_episode(path)
        write_series_csv(episode, out / f"{path.stem}.csv")
        band = config.bands.find(episode) if config is not None else None
        try:
            window = hold_window(episode, band)
        except MissingSceneLogError:
            window = None
        if window is not None:
            histograms[f"{path.stem}.torque"] = grip_histogram(episode, "torque", window, args.bins, TORQUE_RANGE)
            histograms[f"{path.stem}.angle"] = grip_histogram(episode, "angle", window, args.bins)
    write_histogram_csv(histograms, out / "histograms.csv")
    logger.info("plot data written", extra={"fields": {"episodes": len(paths), "out": str(out)}})


def validate(args: argparse.Namespace, config: RunConfig | None) -> None:
    """Read every artifact named on the command line or in the config; writes nothing."""
    targets = [Path(path) for path in args.paths]
    if not targets and config is not None:
        targets = [path for path in (config.paths.demos, config.paths.augmented, config.paths.rollouts,
                                     config.paths.checkpoint, config.paths.report, config.paths.training_log)
                   if Path(path).exists()]
    checked = 0
    for target in targets:
        checked += _validate_path(target)
    logger.info("validation passed", extra={"fields": {"artifacts": checked}})


def _validate_path(path: Path) -> int:
    if not path.exists():
        raise ConfigError(f"{path} does not exist")
    if path.is_dir():
        if (path / MANIFEST_NAME).exists():
            entries = read_manifest(path)
            for files in entries.values():
                for relative in files:
                    if not (path / relative).exists():
                        raise ConfigError(f"{path / MANIFEST_NAME} lists missing file {relative}")
        return sum(_validate_path(child) for child in sorted(path.iterdir())
                   if child.suffix in (EPISODE_SUFFIX, CHECKPOINT_SUFFIX))
    if path.suffix == EPISODE_SUFFIX:
        read_episode(path)
    elif path.suffix == CHECKPOINT_SUFFIX:
        load_checkpoint(path)
    elif path.suffix == ".json":
        document = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(document, dict) and "outcomes" in document:
            read_report(path)
        else:
            RunConfig.model_validate(document)
    elif path.suffix == ".csv" and path.read_text(encoding="utf-8").startswith(",".join(LOG_COLUMNS)):
        TrainingLog.read_csv(path)
    return 1
