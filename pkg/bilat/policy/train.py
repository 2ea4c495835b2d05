"""Mini-batch training of the action-chunking policy and its per-epoch log."""

import csv
import logging
import math
import time
from pathlib import Path
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..datasets.episode import Episode
from .config import PolicyConfig
from .data import EpisodeSampler, TrainingBatch, compute_normalization
from .errors import TrainingDivergedError
from .loss import LossTerms, loss
from .model import ActionChunkingPolicy, forward
from .optim import Adam


logger = logging.getLogger(__name__)

LOG_COLUMNS = ("epoch", "recon", "kl", "total")


class OptimizerSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=1e-4, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    batch_size: int = Field(default=8, gt=0)
    epochs: int = Field(default=200, gt=0)
    samples_per_episode: int = Field(default=1, gt=0)


class EpochLog(BaseModel):
    """Sample-weighted mean losses over one epoch."""

    model_config = ConfigDict(frozen=True)

    epoch: int
    recon: float
    kl: float
    total: float


class TrainingLog(BaseModel):
    entries: list[EpochLog] = Field(default_factory=list)

    def append(self, entry: EpochLog) -> None:
        self.entries.append(entry)

    @property
    def recon(self) -> list[float]:
        return [entry.recon for entry in self.entries]

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(LOG_COLUMNS)
            for entry in self.entries:
                writer.writerow([entry.epoch, repr(entry.recon), repr(entry.kl), repr(entry.total)])
        return path

    @classmethod
    def read_csv(cls, path: str | Path) -> "TrainingLog":
        with Path(path).open(newline="") as file:
            rows = list(csv.DictReader(file))
        return cls(entries=[EpochLog(epoch=int(row["epoch"]), recon=float(row["recon"]),
                                     kl=float(row["kl"]), total=float(row["total"])) for row in rows])


def training_step(policy: ActionChunkingPolicy, batch: TrainingBatch, noise: np.ndarray) -> LossTerms:
    """Forward and backward pass for one batch; gradients accumulate on the parameters."""
    pred, mu, logvar = forward(policy, batch.observations, batch.frames, batch.language,
                               batch.actions, batch.is_pad, noise)
    terms = loss(pred, batch.actions, mu, logvar, policy.config.kl_weight, batch.is_pad)
    terms.total.backward()
    return terms


def train(episodes: list[Episode], embeddings: list[np.ndarray], config: PolicyConfig,
          settings: OptimizerSettings = OptimizerSettings(), seed: int = 0, encoder_id: str = "",
          on_epoch: Callable[[EpochLog], None] | None = None) -> tuple[ActionChunkingPolicy, TrainingLog]:
    """Fit a policy to the training episodes.

    Args:
        episodes: the training split; normalization statistics come from these alone.
        embeddings: one instruction embedding per episode.
        config: architecture; its `normalization` is replaced by the computed statistics.
        settings: optimizer and schedule.
        seed: drives initialization, sampling order and latent noise.
        encoder_id: stored on the policy so inference can reject foreign embeddings.

    Raises:
        TrainingDivergedError: the loss of some batch was not finite.
    """
    stats = compute_normalization(episodes)
    config = PolicyConfig(**{**config.model_dump(), "normalization": stats})
    init_seed, sample_seed = np.random.SeedSequence(seed).spawn(2)
    policy = ActionChunkingPolicy(config, np.random.default_rng(init_seed), encoder_id)
    rng = np.random.default_rng(sample_seed)
    sampler = EpisodeSampler(episodes, embeddings, config, stats, settings.samples_per_episode)
    optimizer = Adam(policy.parameters(), settings.learning_rate, settings.beta1, settings.beta2, settings.eps)
    log = TrainingLog()

    for epoch in range(settings.epochs):
        started = time.perf_counter()
        sums = np.zeros(3)
        samples = 0
        for batch_index, batch in enumerate(sampler.batches(rng, settings.batch_size)):
            optimizer.zero_grad()
            noise = rng.standard_normal((batch.size, config.latent_dim))
            terms = training_step(policy, batch, noise)
            total = float(terms.total.data)
            if not math.isfinite(total):
                raise TrainingDivergedError(epoch, batch_index, total)
            optimizer.step()
            sums += batch.size * np.array([float(terms.recon.data), float(terms.kl.data), total])
            samples += batch.size
        recon, kl, total = (sums / samples).tolist()
        entry = EpochLog(epoch=epoch, recon=recon, kl=kl, total=total)
        log.append(entry)
        logger.info("epoch finished", extra={"fields": {
            "epoch": epoch, "recon": round(recon, 6), "kl": round(kl, 6),
            "seconds": round(time.perf_counter() - started, 3),
        }})
        if on_epoch is not None:
            on_epoch(entry)
    return policy, log
