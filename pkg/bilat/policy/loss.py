"""Masked L1 reconstruction plus the weighted KL term of the CVAE objective."""

from typing import NamedTuple

import numpy as np

from .autograd import Tensor
from .errors import ShapeMismatchError


class LossTerms(NamedTuple):
    total: Tensor
    recon: Tensor
    kl: Tensor


def kl_divergence(mu: Tensor, logvar: Tensor) -> Tensor:
    """0.5 * sum(exp(logvar) + mu^2 - 1 - logvar) over latent dims, averaged over the batch."""
    per_dim = logvar.exp() + mu * mu - 1.0 - logvar
    return per_dim.sum(axis=-1).mean() * 0.5


def loss(pred: Tensor, target: np.ndarray, mu: Tensor | None, logvar: Tensor | None, kl_weight: float,
         is_pad: np.ndarray | None = None) -> LossTerms:
    """Return (total, recon, kl) for predictions [B, K, A] against targets of the same shape.

    Padded steps contribute nothing, whatever their target values.
    """
    target = np.asarray(target, dtype=pred.dtype)
    if target.shape != pred.shape:
        raise ShapeMismatchError("loss target", pred.shape, target.shape)
    if is_pad is None:
        is_pad = np.zeros(pred.shape[:2], dtype=bool)
    valid = ~np.asarray(is_pad, dtype=bool)
    weights = np.broadcast_to(valid[..., None], pred.shape).astype(pred.dtype)
    clean = np.where(weights > 0, target, 0.0).astype(pred.dtype)
    count = max(int(valid.sum()), 1) * pred.shape[-1]
    recon = ((pred - clean).abs() * weights).sum() * (1.0 / count)
    if mu is None or logvar is None:
        kl = Tensor(np.zeros((), dtype=pred.dtype))
    else:
        kl = kl_divergence(mu, logvar)
    return LossTerms(recon + kl * kl_weight, recon, kl)
