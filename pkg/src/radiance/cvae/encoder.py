"""Equivariant message-passing encoder producing per-block latents and pooled embeddings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import Tensor, nn

from ..molgraph.types import MolecularGraph, ROLE_BINDING_SITE
from ..nn import EquivariantLayer, sinusoidal_embedding
from ..vocab import VOCAB_SIZE

SIGMA_FLOOR = 1e-6

_MAX_CHAIN_SLOTS = 8
_SEQ_SEP_CLIP = 8  # relative-offset buckets [-8, 8] plus cross-chain


@dataclass
class EncoderConfig:
    hidden_size: int = 512
    latent_size: int = 8
    n_layers: int = 6
    n_heads: int = 8
    edge_size: int = 64
    n_rbf: int = 16
    rbf_cutoff: float = 10.0


def graph_tensors(graph: MolecularGraph) -> dict[str, Tensor]:
    """Invariant node descriptors, block centers, and directed edges."""
    if not graph.blocks:
        raise ValueError("cannot encode an empty graph")
    types = torch.tensor([b.block_type for b in graph.blocks], dtype=torch.long)
    res_index = torch.tensor([b.residue_index for b in graph.blocks], dtype=torch.float64)
    chain_slots: dict[str, int] = {}
    slots = []
    for b in graph.blocks:
        slot = chain_slots.setdefault(b.chain_id, len(chain_slots))
        slots.append(min(slot, _MAX_CHAIN_SLOTS - 1))
    chains = torch.tensor(slots, dtype=torch.long)
    role = torch.tensor(
        [1 if graph.role == ROLE_BINDING_SITE else 0] * len(graph.blocks), dtype=torch.long
    )
    x = torch.tensor(np.array(graph.centers()), dtype=torch.float64)
    if graph.edges:
        edges = torch.tensor(graph.edges, dtype=torch.long).t().contiguous()
    else:
        edges = torch.zeros((2, 0), dtype=torch.long)
    # Sequence-separation bucket per edge; cross-chain pairs get a sentinel.
    if edges.numel():
        src, dst = edges[0], edges[1]
        same_chain = chains[src] == chains[dst]
        sep = (res_index[dst] - res_index[src]).clamp(-_SEQ_SEP_CLIP, _SEQ_SEP_CLIP).long()
        bucket = torch.where(
            same_chain, sep + _SEQ_SEP_CLIP, torch.full_like(sep, 2 * _SEQ_SEP_CLIP + 1)
        )
    else:
        bucket = torch.zeros((0,), dtype=torch.long)
    return {
        "types": types,
        "res_index": res_index,
        "chains": chains,
        "role": role,
        "x": x,
        "edges": edges,
        "edge_bucket": bucket,
    }


class EquivariantEncoder(nn.Module):
    """Shared encoder for binders and binding sites.

    Scalar features are rigid-invariant, so the pooled graph embedding is
    invariant; the predicted latent coordinate starts at each block
    center and moves only along learned displacement directions, so it is
    rigid-equivariant.
    """

    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        h = config.hidden_size
        self.type_emb = nn.Embedding(VOCAB_SIZE, h)
        self.chain_emb = nn.Embedding(_MAX_CHAIN_SLOTS, h)
        self.role_emb = nn.Embedding(2, h)
        self.pos_proj = nn.Linear(32, h)
        self.edge_bucket_emb = nn.Embedding(2 * _SEQ_SEP_CLIP + 2, config.edge_size)
        self.layers = nn.ModuleList(
            EquivariantLayer(
                hidden_size=h,
                n_heads=config.n_heads,
                edge_size=config.edge_size,
                n_rbf=config.n_rbf,
                rbf_cutoff=config.rbf_cutoff,
                update_coords=True,
            )
            for _ in range(config.n_layers)
        )
        d = config.latent_size
        self.mu_head = nn.Linear(h, d)
        self.sigma_head = nn.Linear(h, d)
        self.sigma_vec_head = nn.Linear(h, 3)
        self.to(torch.float64)

    def forward(self, graph: MolecularGraph) -> dict[str, Tensor]:
        g = graph_tensors(graph)
        h = (
            self.type_emb(g["types"])
            + self.chain_emb(g["chains"])
            + self.role_emb(g["role"])
            + self.pos_proj(sinusoidal_embedding(g["res_index"], 32))
        )
        x = g["x"]
        edge_attr = self.edge_bucket_emb(g["edge_bucket"]) if g["edges"].numel() else None
        for layer in self.layers:
            h, x = layer(h, x, g["edges"], edge_attr=edge_attr)
        softplus = nn.functional.softplus
        return {
            "mu": self.mu_head(h),
            "sigma": softplus(self.sigma_head(h)) + SIGMA_FLOOR,
            "mu_vec": x,
            "sigma_vec": softplus(self.sigma_vec_head(h)) + SIGMA_FLOOR,
            "hidden": h,
            "pooled": h.mean(dim=0),
            "centers": g["x"],
        }
