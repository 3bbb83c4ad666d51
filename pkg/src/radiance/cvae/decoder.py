"""Decoder: block-type head, bond head, and a flow-matching coordinate field.

Atom coordinates are reconstructed by Euler-integrating a learned
velocity field from a Gaussian prior centered at each block's latent
coordinate. The training target is the constant velocity of the linear
path x_t = (1 - t) x0 + t x1, i.e. v = x1 - x0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import torch
from torch import Tensor, nn

from ..molgraph.types import Atom, Block, MolecularGraph, RigidTransform
from ..nn import EquivariantLayer, mlp, sinusoidal_embedding
from ..vocab import ATOM_TEMPLATES, MAX_TEMPLATE_ATOMS, VOCAB, VOCAB_SIZE, element_of
from .types import LatentCloud


@dataclass
class DecoderConfig:
    hidden_size: int = 512
    latent_size: int = 8
    n_layers: int = 6
    n_heads: int = 8
    edge_size: int = 64
    n_rbf: int = 16
    rbf_cutoff: float = 10.0
    context_k: int = 4
    flow_steps: int = 10


def integrate_flow(
    x0: Tensor, field: Callable[[Tensor, float], Tensor], steps: int
) -> Tensor:
    """Euler integration of dx/dt = field(x, t) over t in [0, 1]."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = x0
    for k in range(steps):
        x = x + field(x, k / steps) / steps
    return x


class FlowField(nn.Module):
    """Equivariant velocity field over template atoms with latent context."""

    def __init__(self, config: DecoderConfig):
        super().__init__()
        self.config = config
        h = config.hidden_size
        self.slot_emb = nn.Embedding(MAX_TEMPLATE_ATOMS, h)
        self.type_emb = nn.Embedding(VOCAB_SIZE, h)
        self.node_kind_emb = nn.Embedding(3, h)  # atom / binder latent / site latent
        self.z_proj = nn.Linear(config.latent_size, h)
        self.t_proj = nn.Linear(16, h)
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

    def build_context(
        self,
        block_types: Tensor,
        zx: Tensor,
        zx_vec: Tensor,
        site_types: Tensor,
        zy: Tensor,
        zy_vec: Tensor,
        atom_block: Tensor,
        atom_slot: Tensor,
    ) -> dict:
        """Static node features and edges for one decoding problem.

        Node order: atoms, then binder latents, then site latents. Edges
        connect atoms within a block, atoms to their own latent, and
        atoms to the context_k nearest other latent nodes of their block.
        """
        m = zx.shape[0]
        s = zy.shape[0]
        n_atoms = atom_block.shape[0]

        atom_feat = (
            self.slot_emb(atom_slot)
            + self.type_emb(block_types[atom_block])
            + self.z_proj(zx[atom_block])
            + self.node_kind_emb(torch.zeros_like(atom_slot))
        )
        binder_feat = (
            self.type_emb(block_types)
            + self.z_proj(zx)
            + self.node_kind_emb(torch.ones(m, dtype=torch.long))
        )
        site_feat = (
            self.type_emb(site_types)
            + self.z_proj(zy)
            + self.node_kind_emb(torch.full((s,), 2, dtype=torch.long))
        )
        feats = torch.cat([atom_feat, binder_feat, site_feat], dim=0)

        ctx_coords = torch.cat([zx_vec, zy_vec], dim=0)  # (m + s, 3)
        edges = []
        for i in range(m):
            idx = torch.nonzero(atom_block == i).flatten()
            # Intra-block atom pairs.
            for a in idx.tolist():
                for b in idx.tolist():
                    if a != b:
                        edges.append((a, b))
            # Own latent node, both directions.
            own = n_atoms + i
            for a in idx.tolist():
                edges.append((own, a))
                edges.append((a, own))
            # Nearest other context nodes by latent coordinates.
            d = torch.linalg.norm(ctx_coords - zx_vec[i], dim=-1)
            d[i] = torch.inf
            k = min(self.config.context_k, m + s - 1)
            if k > 0:
                near = torch.topk(d, k, largest=False).indices
                for c in near.tolist():
                    node = n_atoms + c
                    for a in idx.tolist():
                        edges.append((node, a))
                        edges.append((a, node))
        edge_tensor = (
            torch.tensor(edges, dtype=torch.long).t().contiguous()
            if edges
            else torch.zeros((2, 0), dtype=torch.long)
        )
        coord_mask = torch.cat(
            [torch.ones(n_atoms, dtype=torch.bool), torch.zeros(m + s, dtype=torch.bool)]
        )
        return {
            "feats": feats,
            "edges": edge_tensor,
            "coord_mask": coord_mask,
            "ctx_coords": ctx_coords,
            "n_atoms": n_atoms,
            "atom_block": atom_block,
        }

    def velocity(self, context: dict, x_atoms: Tensor, t: Tensor) -> Tensor:
        """Velocity for each atom; `t` is per-block in [0, 1]."""
        n_atoms = context["n_atoms"]
        t_feat = self.t_proj(sinusoidal_embedding(t[context["atom_block"]], 16))
        h = context["feats"].clone()
        h[:n_atoms] = h[:n_atoms] + t_feat
        x = torch.cat([x_atoms, context["ctx_coords"]], dim=0)
        x_in = x
        for layer in self.layers:
            h, x = layer(
                h, x, context["edges"], coord_mask=context["coord_mask"]
            )
        return (x - x_in)[:n_atoms]


class Decoder(nn.Module):
    def __init__(self, config: DecoderConfig):
        super().__init__()
        self.config = config
        d = config.latent_size
        self.type_head = mlp([d, 128, VOCAB_SIZE])
        self.bond_head = mlp([2 * d + 1, 64, 1])
        self.field = FlowField(config)
        self.to(torch.float64)

    def type_logits(self, z: Tensor) -> Tensor:
        return self.type_head(z)

    def bond_logits(self, z: Tensor, z_vec: Tensor, pairs: Tensor) -> Tensor:
        """Symmetric peptide-bond logits for block index pairs (2, P)."""
        zi, zj = z[pairs[0]], z[pairs[1]]
        d = torch.linalg.norm(z_vec[pairs[0]] - z_vec[pairs[1]], dim=-1, keepdim=True)
        feat = torch.cat([zi + zj, torch.abs(zi - zj), d], dim=-1)
        return self.bond_head(feat).squeeze(-1)

    def decode(
        self,
        z_x: LatentCloud,
        z_y: LatentCloud,
        site: MolecularGraph,
        steps: int | None = None,
        generator: torch.Generator | None = None,
        initial_coords: Tensor | None = None,
        types_override: list[int] | None = None,
    ) -> MolecularGraph:
        """Decode latents to a binder graph (types, then flow-matched atoms)."""
        steps = steps or self.config.flow_steps
        zx = torch.tensor(z_x.z_matrix(), dtype=torch.float64)
        zx_vec = torch.tensor(z_x.z_vec_matrix(), dtype=torch.float64)
        zy = torch.tensor(z_y.z_matrix(), dtype=torch.float64)
        zy_vec = torch.tensor(z_y.z_vec_matrix(), dtype=torch.float64)

        with torch.no_grad():
            if types_override is None:
                types = self.type_logits(zx).argmax(dim=-1)
            else:
                types = torch.tensor(types_override, dtype=torch.long)
            site_types = torch.tensor(
                [b.block_type for b in site.blocks], dtype=torch.long
            )

            atom_block, atom_slot = [], []
            for i, ti in enumerate(types.tolist()):
                n_i = len(ATOM_TEMPLATES[VOCAB[ti]])
                atom_block.extend([i] * n_i)
                atom_slot.extend(range(n_i))
            atom_block = torch.tensor(atom_block, dtype=torch.long)
            atom_slot = torch.tensor(atom_slot, dtype=torch.long)

            context = self.field.build_context(
                types, zx, zx_vec, site_types, zy, zy_vec, atom_block, atom_slot
            )
            if initial_coords is None:
                noise = torch.randn(
                    (atom_block.shape[0], 3), dtype=torch.float64, generator=generator
                )
                x0 = zx_vec[atom_block] + noise
            else:
                x0 = initial_coords

            t_all = torch.zeros(len(z_x), dtype=torch.float64)
            x1 = integrate_flow(
                x0,
                lambda x, t: self.field.velocity(context, x, t_all + t),
                steps,
            )
        coords = z_x.frame.apply(x1.numpy())
        blocks = []
        for i, ti in enumerate(types.tolist()):
            names = ATOM_TEMPLATES[VOCAB[ti]]
            mask = atom_block.numpy() == i
            atom_coords = coords[mask]
            blocks.append(
                Block(
                    block_type=ti,
                    atoms=[
                        Atom(element_of(name), name, atom_coords[k])
                        for k, name in enumerate(names)
                    ],
                    chain_id="A",
                    residue_index=i + 1,
                )
            )
        return MolecularGraph(blocks=blocks, role="binder")
