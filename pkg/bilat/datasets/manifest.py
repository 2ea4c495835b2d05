"""Plain-text dataset manifests: one `split<TAB>relative/path` line per episode file."""

import logging
from pathlib import Path

from .errors import EpisodeFormatError


logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"
EPISODE_SUFFIX = ".blat"


def write_manifest(directory: str | Path, entries: dict[str, list[str]]) -> Path:
    """Write `entries` (split name to relative paths) as the manifest of `directory`."""
    directory = Path(directory)
    lines = [f"{split}\t{relative}" for split in sorted(entries) for relative in entries[split]]
    path = directory / MANIFEST_NAME
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("manifest written", extra={"fields": {"path": str(path), "entries": len(lines)}})
    return path


def read_manifest(directory: str | Path) -> dict[str, list[str]]:
    path = Path(directory) / MANIFEST_NAME
    entries: dict[str, list[str]] = {}
    for line_number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise EpisodeFormatError(f"{path}:{line_number}: expected `split<TAB>path`, got {line!r}")
        entries.setdefault(parts[0], []).append(parts[1])
    return entries


def episode_files(directory: str | Path, split: str = "train") -> list[Path]:
    """Episode files of `split`, from the manifest when present, else every episode file sorted by name."""
    directory = Path(directory)
    if (directory / MANIFEST_NAME).exists():
        return [directory / relative for relative in read_manifest(directory).get(split, [])]
    return sorted(directory.glob(f"*{EPISODE_SUFFIX}"))
