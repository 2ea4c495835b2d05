"""Deterministic inference: one ActionChunk per query, decoded at the prior mean."""

import numpy as np

from ..lang.embedding import LanguageEmbedding
from .autograd import no_grad
from .chunk import ActionChunk
from .errors import EncoderMismatchError, ShapeMismatchError
from .model import ActionChunkingPolicy, forward


def infer(policy: ActionChunkingPolicy, follower_obs: np.ndarray, frames: list[np.ndarray],
          embedding: LanguageEmbedding) -> ActionChunk:
    """Predict the next K leader triples in physical units.

    Args:
        follower_obs: follower (angle, velocity, reaction torque), [arms, joints, 3] or flat.
        frames: the latest frame of every camera, each [H, W, 3].
        embedding: must come from the encoder the policy was trained with.
    """
    config = policy.config
    if embedding.encoder_id != policy.encoder_id:
        raise EncoderMismatchError(policy.encoder_id, embedding.encoder_id)
    if embedding.dim != config.language_dim:
        raise ShapeMismatchError("language embedding", (config.language_dim,), (embedding.dim,))
    observation = np.asarray(follower_obs, dtype=np.float64).reshape(-1)
    if observation.shape != (config.observation_dim,):
        raise ShapeMismatchError("follower observation", (config.observation_dim,), observation.shape)
    stats = config.normalization
    if stats is not None:
        observation = stats.normalize_observation(observation)
    with no_grad():
        pred, _, _ = forward(policy, observation[None], np.stack(frames)[None], embedding.values[None])
    values = pred.data[0].astype(np.float64)
    if stats is not None:
        values = stats.denormalize_action(values)
    return ActionChunk(values=values, joint_count=config.joint_count, arms=config.arms_per_side)
