"""The language-conditioned action-chunking CVAE.

Memory layout seen by the decoder, in order: every visual token of every camera,
then one joint token (follower observation), one language token and one latent token.
"""

import logging

import numpy as np

from .autograd import Tensor, concat
from .config import PolicyConfig
from .errors import ShapeMismatchError
from .layers import (Conv2d, DecoderLayer, EncoderLayer, LayerNorm, Linear, Module,
                     sinusoidal_grid, sinusoidal_table)


logger = logging.getLogger(__name__)


def _constant(values: np.ndarray, dtype) -> Tensor:
    return Tensor(np.asarray(values, dtype=dtype))


class ActionChunkingPolicy(Module):
    """All learnable tensors of the model, built from a PolicyConfig and a seeded generator."""

    def __init__(self, config: PolicyConfig, rng: np.random.Generator | int = 0, encoder_id: str = ""):
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        self.config = config
        self.encoder_id = encoder_id
        dtype = np.dtype(config.dtype)
        d = config.model_dim
        self.dtype = dtype

        # vision backbone: three stride-2 blocks and a 3x3 valid convolution
        channels = (3, *config.backbone_channels)
        self.backbone = [
            Conv2d(channels[0], channels[1], 4, 2, 1, rng, dtype),
            Conv2d(channels[1], channels[2], 4, 2, 1, rng, dtype),
            Conv2d(channels[2], channels[3], 4, 2, 1, rng, dtype),
            Conv2d(channels[3], channels[4], 3, 1, 0, rng, dtype),
        ]
        self.visual_projection = Linear(channels[4], d, rng, dtype)
        self.camera_embedding = Tensor((0.02 * rng.standard_normal((config.camera_count, 1, d))).astype(dtype),
                                       requires_grad=True)
        rows, columns = config.grid
        self.grid_position = _constant(sinusoidal_grid(rows, columns, d), dtype)

        # CVAE encoder
        self.cls_token = Tensor((0.02 * rng.standard_normal((1, 1, d))).astype(dtype), requires_grad=True)
        self.encoder_joint = Linear(config.observation_dim, d, rng, dtype)
        self.encoder_action = Linear(config.action_dim, d, rng, dtype)
        self.encoder_position = _constant(sinusoidal_table(config.chunk_size + 2, d), dtype)
        self.encoder = [EncoderLayer(d, config.head_count, config.feedforward_dim, rng, dtype)
                        for _ in range(config.encoder_layers)]
        self.latent_head = Linear(d, 2 * config.latent_dim, rng, dtype)

        # decoder
        self.joint_projection = Linear(config.observation_dim, d, rng, dtype)
        self.language_projection = Linear(config.language_dim, d, rng, dtype)
        self.latent_projection = Linear(config.latent_dim, d, rng, dtype)
        self.extra_position = Tensor((0.02 * rng.standard_normal((3, d))).astype(dtype), requires_grad=True)
        self.query_position = Tensor((0.02 * rng.standard_normal((config.chunk_size, d))).astype(dtype),
                                     requires_grad=True)
        self.decoder = [DecoderLayer(d, config.head_count, config.feedforward_dim, rng, dtype)
                        for _ in range(config.decoder_layers)]
        self.decoder_norm = LayerNorm(d, dtype)
        self.action_head = Linear(d, config.action_dim, rng, dtype)

        logger.debug("policy built", extra={"fields": {
            "parameters": sum(p.data.size for p in self.parameters()),
            "encoder_id": encoder_id,
        }})

    def load_state(self, tensors: dict[str, np.ndarray]) -> None:
        """Replace every parameter by the same-named array; names and shapes must match exactly."""
        parameters = self.named_parameters()
        missing = sorted(set(parameters) - set(tensors))
        unexpected = sorted(set(tensors) - set(parameters))
        if missing or unexpected:
            raise ShapeMismatchError("parameter names", "missing none, unexpected none",
                                     f"missing {missing}, unexpected {unexpected}")
        for name, parameter in parameters.items():
            value = np.asarray(tensors[name])
            if value.shape != parameter.shape:
                raise ShapeMismatchError(f"parameter `{name}`", parameter.shape, value.shape)
            parameter.data = value.astype(parameter.dtype, copy=True)

    def state(self) -> dict[str, np.ndarray]:
        return {name: parameter.data for name, parameter in self.named_parameters().items()}


def _check(what: str, actual: tuple, expected: tuple) -> None:
    if tuple(actual) != tuple(expected):
        raise ShapeMismatchError(what, tuple(expected), tuple(actual))


def vision_features(policy: ActionChunkingPolicy, frames: np.ndarray) -> Tensor:
    """Spatial tokens of every camera.

    Args:
        frames: [B, cameras, H, W, 3]; uint8 frames are scaled to [0, 1].

    Returns:
        Tensor [B, cameras * rows * columns, d] with the 2-D grid position and a
        per-camera embedding already added.
    """
    config = policy.config
    frames = np.asarray(frames)
    if frames.ndim != 5:
        raise ShapeMismatchError("frames", ("B", config.camera_count, config.image_height, config.image_width, 3),
                                 frames.shape)
    batch = frames.shape[0]
    _check("frames", frames.shape,
           (batch, config.camera_count, config.image_height, config.image_width, 3))
    if frames.dtype == np.uint8:
        pixels = frames.astype(policy.dtype) / 255.0
    else:
        pixels = frames.astype(policy.dtype)
    x = Tensor(pixels.reshape(batch * config.camera_count, config.image_height, config.image_width, 3))
    for conv in policy.backbone:
        x = conv(x).relu()
    rows, columns = config.grid
    tokens = policy.visual_projection(x.reshape(batch * config.camera_count, rows * columns, x.shape[-1]))
    tokens = tokens + policy.grid_position
    tokens = tokens.reshape(batch, config.camera_count, rows * columns, config.model_dim) + policy.camera_embedding
    return tokens.reshape(batch, config.camera_count * rows * columns, config.model_dim)


def cvae_encode(policy: ActionChunkingPolicy, joint_obs: np.ndarray, target_actions: np.ndarray,
                is_pad: np.ndarray | None = None) -> tuple[Tensor, Tensor]:
    """Posterior (mu, logvar), each [B, latent_dim], read from the class token.

    `joint_obs` is [B, observation_dim] and `target_actions` [B, K, action_dim], both
    normalized; `is_pad` [B, K] hides padded action steps from attention.
    """
    config = policy.config
    joint_obs = np.asarray(joint_obs, dtype=policy.dtype)
    target_actions = np.asarray(target_actions, dtype=policy.dtype)
    batch = joint_obs.shape[0]
    _check("joint observation", joint_obs.shape, (batch, config.observation_dim))
    _check("target actions", target_actions.shape, (batch, config.chunk_size, config.action_dim))
    if is_pad is None:
        is_pad = np.zeros((batch, config.chunk_size), dtype=bool)
    _check("padding mask", np.shape(is_pad), (batch, config.chunk_size))

    d = config.model_dim
    cls = policy.cls_token + _constant(np.zeros((batch, 1, d)), policy.dtype)
    joint = policy.encoder_joint(Tensor(joint_obs)).reshape(batch, 1, d)
    actions = policy.encoder_action(Tensor(target_actions))
    x = concat([cls, joint, actions], axis=1)
    mask = np.concatenate([np.zeros((batch, 2), dtype=bool), np.asarray(is_pad, dtype=bool)], axis=1)
    for layer in policy.encoder:
        x = layer(x, policy.encoder_position, mask)
    latent = policy.latent_head(x[:, 0])
    z = config.latent_dim
    return latent[:, :z], latent[:, z:]


def reparameterize(mu, logvar, noise) -> Tensor:
    """z = mu + exp(logvar / 2) * noise."""
    mu = mu if isinstance(mu, Tensor) else Tensor(np.asarray(mu, dtype=np.float64))
    logvar = logvar if isinstance(logvar, Tensor) else Tensor(np.asarray(logvar, dtype=mu.dtype))
    return mu + (logvar * 0.5).exp() * np.asarray(noise, dtype=mu.dtype)


def decode(policy: ActionChunkingPolicy, joint_obs: np.ndarray, visual: Tensor, language: np.ndarray,
           z) -> Tensor:
    """Normalized action predictions [B, K, action_dim].

    `language` is [B, language_dim]; it is replaced by zeros when the config
    disables the language channel.
    """
    config = policy.config
    joint_obs = np.asarray(joint_obs, dtype=policy.dtype)
    language = np.asarray(language, dtype=policy.dtype)
    batch = joint_obs.shape[0]
    d = config.model_dim
    _check("joint observation", joint_obs.shape, (batch, config.observation_dim))
    _check("language embedding", language.shape, (batch, config.language_dim))
    _check("visual tokens", visual.shape, (batch, config.visual_token_count, d))
    if not isinstance(z, Tensor):
        z = _constant(z, policy.dtype)
    _check("latent", z.shape, (batch, config.latent_dim))
    if not config.use_language:
        language = np.zeros_like(language)

    memory = concat([
        visual,
        policy.joint_projection(Tensor(joint_obs)).reshape(batch, 1, d),
        policy.language_projection(Tensor(language)).reshape(batch, 1, d),
        policy.latent_projection(z).reshape(batch, 1, d),
    ], axis=1)
    memory_position = concat([_constant(np.zeros((config.visual_token_count, d)), policy.dtype),
                              policy.extra_position], axis=0)
    x = _constant(np.zeros((batch, config.chunk_size, d)), policy.dtype)
    for layer in policy.decoder:
        x = layer(x, policy.query_position, memory, memory_position)
    return policy.action_head(policy.decoder_norm(x))


def forward(policy: ActionChunkingPolicy, joint_obs: np.ndarray, frames: np.ndarray, language: np.ndarray,
            target_actions: np.ndarray | None = None, is_pad: np.ndarray | None = None,
            noise: np.ndarray | None = None) -> tuple[Tensor, Tensor | None, Tensor | None]:
    """Full pass; with targets the latent is sampled from the posterior, otherwise z = 0."""
    batch = np.shape(joint_obs)[0]
    visual = vision_features(policy, frames)
    if target_actions is None:
        z = np.zeros((batch, policy.config.latent_dim))
        return decode(policy, joint_obs, visual, language, z), None, None
    mu, logvar = cvae_encode(policy, joint_obs, target_actions, is_pad)
    if noise is None:
        noise = np.zeros(mu.shape)
    z = reparameterize(mu, logvar, noise)
    return decode(policy, joint_obs, visual, language, z), mu, logvar
