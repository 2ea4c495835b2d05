"""Demonstration recording, the BLAT1 episode format and downsampling augmentation."""

from .codec import MAGIC, decode_episode, encode_episode, read_episode, write_episode
from .dabi import DabiConfig, dabi_augment
from .episode import CHANNELS, Episode
from .errors import (AugmentationError, BadMagicError, EpisodeFormatError, HeaderError,
                     PayloadLengthError)
from .expert import (ExpertScript, ExpertTargets, OperatorConfig, ScriptPhase, ScriptedOperator,
                     build_expert_script, minimum_jerk)
from .manifest import EPISODE_SUFFIX, MANIFEST_NAME, episode_files, read_manifest, write_manifest
from .recorder import collect_demonstration, record_session

__all__ = [
    "AugmentationError",
    "BadMagicError",
    "CHANNELS",
    "DabiConfig",
    "EPISODE_SUFFIX",
    "Episode",
    "EpisodeFormatError",
    "ExpertScript",
    "ExpertTargets",
    "HeaderError",
    "MAGIC",
    "MANIFEST_NAME",
    "OperatorConfig",
    "PayloadLengthError",
    "ScriptPhase",
    "ScriptedOperator",
    "build_expert_script",
    "collect_demonstration",
    "dabi_augment",
    "decode_episode",
    "encode_episode",
    "episode_files",
    "minimum_jerk",
    "read_episode",
    "read_manifest",
    "record_session",
    "write_episode",
    "write_manifest",
]
