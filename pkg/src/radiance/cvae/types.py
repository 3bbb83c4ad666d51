"""Latent-space data types for the contrastive VAE."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from ..molgraph.types import RigidTransform

KIND_KEY = "key"
KIND_VALUE = "value"


@dataclass
class LatentBlock:
    """Per-block Gaussian posterior and a sample from it."""

    mu: np.ndarray  # (d,)
    sigma: np.ndarray  # (d,) > 0
    z: np.ndarray  # (d,)
    mu_vec: np.ndarray  # (3,)
    sigma_vec: np.ndarray  # (3,) > 0
    z_vec: np.ndarray  # (3,)
    block_index: int = 0

    def __post_init__(self) -> None:
        for name in ("mu", "sigma", "z", "mu_vec", "sigma_vec", "z_vec"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if np.any(self.sigma <= 0) or np.any(self.sigma_vec <= 0):
            raise ValueError("posterior scales must be strictly positive")
        if not all(
            np.all(np.isfinite(getattr(self, n)))
            for n in ("mu", "sigma", "z", "mu_vec", "sigma_vec", "z_vec")
        ):
            raise ValueError("latent block has non-finite entries")


@dataclass
class LatentCloud:
    blocks: list[LatentBlock]
    frame: RigidTransform = field(default_factory=RigidTransform.identity)

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("latent cloud must be non-empty")

    def __len__(self) -> int:
        return len(self.blocks)

    def z_matrix(self) -> np.ndarray:
        return np.stack([b.z for b in self.blocks])

    def z_vec_matrix(self) -> np.ndarray:
        return np.stack([b.z_vec for b in self.blocks])

    @staticmethod
    def from_tensors(
        mu: torch.Tensor,
        sigma: torch.Tensor,
        mu_vec: torch.Tensor,
        sigma_vec: torch.Tensor,
        z: torch.Tensor | None = None,
        z_vec: torch.Tensor | None = None,
        frame: RigidTransform | None = None,
    ) -> "LatentCloud":
        z = mu if z is None else z
        z_vec = mu_vec if z_vec is None else z_vec
        blocks = [
            LatentBlock(
                mu=mu[i].detach().numpy(),
                sigma=sigma[i].detach().numpy(),
                z=z[i].detach().numpy(),
                mu_vec=mu_vec[i].detach().numpy(),
                sigma_vec=sigma_vec[i].detach().numpy(),
                z_vec=z_vec[i].detach().numpy(),
                block_index=i,
            )
            for i in range(mu.shape[0])
        ]
        return LatentCloud(blocks=blocks, frame=frame or RigidTransform.identity())


@dataclass
class GraphEmbedding:
    """Mean-pooled encoder hidden state of a whole graph."""

    vec: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        self.vec = np.asarray(self.vec, dtype=np.float64)
        if self.kind not in (KIND_KEY, KIND_VALUE):
            raise ValueError(f"unknown embedding kind {self.kind!r}")
        if not np.all(np.isfinite(self.vec)):
            raise ValueError("embedding has non-finite entries")


@dataclass
class LossWeights:
    recon_type: float = 1.0
    recon_field: float = 1.0
    kl_scalar: float = 0.8  # sequence-latent KL strength
    kl_coord: float = 0.6  # structure-latent KL strength
    contrastive: float = 1.0
    local_distance: float = 0.5
    bond: float = 0.5
    tau: float = 0.07


@dataclass
class VaeLossReport:
    """Loss components; KL fields carry their internal lambda weights."""

    recon_type: float
    recon_field: float
    kl_scalar: float
    kl_coord: float
    contrastive: float
    bond: float
    local_distance: float
    total: float
    weights: LossWeights = field(default_factory=LossWeights)

    def recomputed_total(self) -> float:
        w = self.weights
        return (
            w.recon_type * self.recon_type
            + w.recon_field * self.recon_field
            + self.kl_scalar
            + self.kl_coord
            + w.contrastive * self.contrastive
            + w.local_distance * self.local_distance
            + w.bond * self.bond
        )

    def as_dict(self) -> dict:
        return {
            "recon_type": self.recon_type,
            "recon_field": self.recon_field,
            "kl_scalar": self.kl_scalar,
            "kl_coord": self.kl_coord,
            "contrastive": self.contrastive,
            "bond": self.bond,
            "local_distance": self.local_distance,
            "total": self.total,
        }
