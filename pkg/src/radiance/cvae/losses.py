"""Training losses: KL regularizers, double-sided contrastive, reconstruction."""

from __future__ import annotations

import numpy as np
import torch
from torch import Tensor
from torch.nn import functional as F

from .types import GraphEmbedding, LatentBlock


def kl_diag_gaussian(mu: Tensor, sigma: Tensor, prior_mean: Tensor) -> Tensor:
    """KL(N(mu, diag sigma^2) || N(prior_mean, I)) per row, closed form."""
    var = sigma**2
    return 0.5 * torch.sum(var + (mu - prior_mean) ** 2 - 1.0 - torch.log(var), dim=-1)


def kl_loss(
    lb: LatentBlock,
    center: np.ndarray,
    lambda1: float = 0.8,
    lambda2: float = 0.6,
) -> float:
    """Weighted KL of one block's posteriors against N(0, I) and N(center, I)."""
    mu = torch.tensor(lb.mu)
    sigma = torch.tensor(lb.sigma)
    mu_vec = torch.tensor(lb.mu_vec)
    sigma_vec = torch.tensor(lb.sigma_vec)
    c = torch.tensor(np.asarray(center, dtype=np.float64))
    scalar = kl_diag_gaussian(mu[None], sigma[None], torch.zeros_like(mu)[None])
    coord = kl_diag_gaussian(mu_vec[None], sigma_vec[None], c[None])
    return float(lambda1 * scalar + lambda2 * coord)


def contrastive_loss_tensors(keys: Tensor, values: Tensor, tau: float) -> Tensor:
    """Double-sided InfoNCE over raw inner products, mean over the batch."""
    if keys.shape != values.shape:
        raise ValueError(f"keys {tuple(keys.shape)} and values {tuple(values.shape)} disagree")
    if tau <= 0:
        raise ValueError("tau must be positive")
    logits = keys @ values.t() / tau
    target = torch.arange(keys.shape[0])
    return F.cross_entropy(logits, target) + F.cross_entropy(logits.t(), target)


def contrastive_loss(
    keys: list[GraphEmbedding], values: list[GraphEmbedding], tau: float = 0.07
) -> float:
    if len(keys) != len(values):
        raise ValueError(f"{len(keys)} keys vs {len(values)} values")
    k = torch.tensor(np.stack([e.vec for e in keys]), dtype=torch.float64)
    v = torch.tensor(np.stack([e.vec for e in values]), dtype=torch.float64)
    return float(contrastive_loss_tensors(k, v, tau))


def recon_loss(
    pred_type_logits: Tensor,
    true_type: Tensor,
    pred_field: Tensor,
    true_field: Tensor,
) -> tuple[Tensor, Tensor]:
    """(cross-entropy over block types, MSE over velocity fields)."""
    if pred_field.shape != true_field.shape:
        raise ValueError("field shapes disagree")
    ce = F.cross_entropy(pred_type_logits, true_type)
    mse = torch.mean((pred_field - true_field) ** 2)
    return ce, mse
