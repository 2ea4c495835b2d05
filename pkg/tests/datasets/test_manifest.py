"""Tests for bilat.datasets.manifest."""

import pytest

from bilat.datasets.errors import EpisodeFormatError
from bilat.datasets.manifest import MANIFEST_NAME, episode_files, read_manifest, write_manifest


def test_write_then_read(tmp_path):
    write_manifest(tmp_path, {"train": ["a.blat", "b.blat"], "rollout": ["r.blat"]})
    assert read_manifest(tmp_path) == {"rollout": ["r.blat"], "train": ["a.blat", "b.blat"]}
    assert episode_files(tmp_path, "train") == [tmp_path / "a.blat", tmp_path / "b.blat"]
    assert episode_files(tmp_path, "test") == []


def test_without_manifest_every_episode_file_is_listed_by_name(tmp_path):
    for name in ("c.blat", "a.blat", "notes.txt", "b.blat"):
        (tmp_path / name).write_bytes(b"")
    assert [path.name for path in episode_files(tmp_path)] == ["a.blat", "b.blat", "c.blat"]


def test_malformed_line(tmp_path):
    (tmp_path / MANIFEST_NAME).write_text("train\ta.blat\n\ntrain b.blat\n", encoding="utf-8")
    with pytest.raises(EpisodeFormatError, match=":3:"):
        read_manifest(tmp_path)
