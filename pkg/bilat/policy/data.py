"""Training batches drawn from recorded episodes.

Observations are the follower triples at a start step; targets are the next K
leader triples, zero-padded and masked past the end of the episode.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..datasets.episode import Episode
from .config import NormalizationStats, PolicyConfig
from .errors import ShapeMismatchError


def flatten_stream(stream: np.ndarray) -> np.ndarray:
    """[T, arms, joints, 3] -> [T, arms * joints * 3] in float64."""
    stream = np.asarray(stream, dtype=np.float64)
    return stream.reshape(stream.shape[0], -1)


def compute_normalization(episodes: list[Episode]) -> NormalizationStats:
    """Per-channel statistics of the follower (observations) and leader (actions) streams."""
    if not episodes:
        raise ValueError("normalization needs at least one episode")
    observations = np.concatenate([flatten_stream(e.follower) for e in episodes])
    actions = np.concatenate([flatten_stream(e.leader) for e in episodes])
    return NormalizationStats.from_arrays(observations, actions)


class TrainingBatch(BaseModel):
    """Normalized model inputs and targets for B samples."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    observations: np.ndarray
    """[B, observation_dim]"""
    frames: np.ndarray
    """[B, cameras, H, W, 3] uint8"""
    language: np.ndarray
    """[B, language_dim]"""
    actions: np.ndarray
    """[B, K, action_dim]"""
    is_pad: np.ndarray
    """[B, K], True past the end of the source episode"""

    @model_validator(mode="after")
    def _shapes(self):
        batch = self.observations.shape[0]
        for name in ("frames", "language", "actions", "is_pad"):
            if getattr(self, name).shape[0] != batch:
                raise ValueError(f"`{name}` holds {getattr(self, name).shape[0]} samples, expected {batch}")
        if self.is_pad.shape != self.actions.shape[:2]:
            raise ValueError(f"padding mask {self.is_pad.shape} does not match actions {self.actions.shape}")
        return self

    @property
    def size(self) -> int:
        return self.observations.shape[0]


class EpisodeSampler:
    """Episodic sampling: every epoch draws `samples_per_episode` random start steps per episode."""

    def __init__(self, episodes: list[Episode], embeddings: list[np.ndarray], config: PolicyConfig,
                 stats: NormalizationStats, samples_per_episode: int = 1):
        if not episodes:
            raise ValueError("training needs at least one episode")
        if len(embeddings) != len(episodes):
            raise ValueError(f"{len(embeddings)} embeddings for {len(episodes)} episodes")
        for embedding in embeddings:
            if np.shape(embedding) != (config.language_dim,):
                raise ShapeMismatchError("language embedding", (config.language_dim,), np.shape(embedding))
        for episode in episodes:
            if episode.arms_per_side * episode.joint_count * 3 != config.action_dim:
                raise ShapeMismatchError("episode channels", config.action_dim,
                                         episode.arms_per_side * episode.joint_count * 3)
            if episode.camera_count != config.camera_count:
                raise ShapeMismatchError("episode cameras", config.camera_count, episode.camera_count)
            if episode.image_size != (config.image_height, config.image_width):
                raise ShapeMismatchError("episode frames", (config.image_height, config.image_width),
                                         episode.image_size)
        self.episodes = episodes
        self.config = config
        self.stats = stats
        self.samples_per_episode = samples_per_episode
        self._observations = [stats.normalize_observation(flatten_stream(e.follower)) for e in episodes]
        self._actions = [stats.normalize_action(flatten_stream(e.leader)) for e in episodes]
        self._language = [np.asarray(embedding, dtype=np.float64) for embedding in embeddings]

    def epoch(self, rng: np.random.Generator) -> list[tuple[int, int]]:
        """Shuffled (episode, start step) pairs for one epoch."""
        items = [(index, int(rng.integers(episode.sample_count)))
                 for index, episode in enumerate(self.episodes)
                 for _ in range(self.samples_per_episode)]
        order = rng.permutation(len(items))
        return [items[i] for i in order]

    def batch(self, items: list[tuple[int, int]]) -> TrainingBatch:
        k = self.config.chunk_size
        observations, frames, language, actions, is_pad = [], [], [], [], []
        for index, start in items:
            episode = self.episodes[index]
            stream = self._actions[index][start:start + k]
            padded = np.zeros((k, self.config.action_dim))
            padded[:len(stream)] = stream
            mask = np.arange(k) >= len(stream)
            observations.append(self._observations[index][start])
            frames.append(np.stack(episode.frames_at(start)))
            language.append(self._language[index])
            actions.append(padded)
            is_pad.append(mask)
        return TrainingBatch(observations=np.stack(observations), frames=np.stack(frames),
                             language=np.stack(language), actions=np.stack(actions), is_pad=np.stack(is_pad))

    def batches(self, rng: np.random.Generator, batch_size: int):
        items = self.epoch(rng)
        for first in range(0, len(items), batch_size):
            yield self.batch(items[first:first + batch_size])
