"""The language-conditioned action-chunking policy: autograd engine, model, training and checkpoints."""

from .autograd import Tensor, no_grad
from .checkpoint import decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from .chunk import ActionChunk
from .config import NormalizationStats, PolicyConfig
from .data import EpisodeSampler, TrainingBatch, compute_normalization, flatten_stream
from .errors import (CheckpointFormatError, EncoderMismatchError, PolicyError, ShapeMismatchError,
                     TrainingDivergedError)
from .infer import infer
from .loss import LossTerms, kl_divergence, loss
from .model import ActionChunkingPolicy, cvae_encode, decode, forward, reparameterize, vision_features
from .optim import Adam
from .train import EpochLog, OptimizerSettings, TrainingLog, train, training_step


__all__ = [
    "ActionChunk",
    "ActionChunkingPolicy",
    "Adam",
    "CheckpointFormatError",
    "EncoderMismatchError",
    "EpisodeSampler",
    "EpochLog",
    "LossTerms",
    "NormalizationStats",
    "OptimizerSettings",
    "PolicyConfig",
    "PolicyError",
    "ShapeMismatchError",
    "Tensor",
    "TrainingBatch",
    "TrainingDivergedError",
    "TrainingLog",
    "compute_normalization",
    "cvae_encode",
    "decode",
    "decode_checkpoint",
    "encode_checkpoint",
    "flatten_stream",
    "forward",
    "infer",
    "kl_divergence",
    "load_checkpoint",
    "loss",
    "no_grad",
    "reparameterize",
    "save_checkpoint",
    "train",
    "training_step",
    "vision_features",
]
