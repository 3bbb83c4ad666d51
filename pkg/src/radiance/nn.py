"""Equivariant network building blocks shared by the encoder, decoder, and denoiser.

Invariant node features flow through attention over graph edges with
RBF-expanded distance biases; 3D information enters only through
inter-node distances and leaves only as weighted sums of displacement
vectors, which keeps scalar outputs rigid-invariant and coordinate
outputs rotation-equivariant / translation-consistent by construction.
"""

from __future__ import annotations

import math

import torch
from torch import Tensor, nn


def rbf_expand(d: Tensor, n_rbf: int, cutoff: float) -> Tensor:
    """Gaussian radial basis features of edge lengths, centers on [0, cutoff]."""
    centers = torch.linspace(0.0, cutoff, n_rbf, dtype=d.dtype, device=d.device)
    width = cutoff / max(n_rbf - 1, 1)
    return torch.exp(-((d.unsqueeze(-1) - centers) ** 2) / (2.0 * width**2))


def sinusoidal_embedding(t: Tensor, dim: int, max_period: float = 10_000.0) -> Tensor:
    """Transformer-style sin/cos embedding of scalar positions."""
    half = dim // 2
    freqs = torch.exp(
        -math.log(max_period) * torch.arange(half, dtype=t.dtype, device=t.device) / half
    )
    args = t.unsqueeze(-1) * freqs
    emb = torch.cat([torch.sin(args), torch.cos(args)], dim=-1)
    if dim % 2:
        emb = torch.cat([emb, torch.zeros_like(emb[..., :1])], dim=-1)
    return emb


def mlp(dims: list[int], zero_last: bool = False) -> nn.Sequential:
    layers: list[nn.Module] = []
    for a, b in zip(dims, dims[1:]):
        layers.append(nn.Linear(a, b))
        layers.append(nn.SiLU())
    layers.pop()
    if zero_last:
        last = layers[-1]
        nn.init.zeros_(last.weight)
        nn.init.zeros_(last.bias)
    return nn.Sequential(*layers)


def segment_softmax(logits: Tensor, segments: Tensor, n_segments: int) -> Tensor:
    """Softmax of `logits` grouped by the destination segment of each edge."""
    shape = (n_segments,) + logits.shape[1:]
    idx = segments.view(-1, *([1] * (logits.dim() - 1))).expand_as(logits)
    m = logits.new_full(shape, -torch.inf).scatter_reduce(
        0, idx, logits, reduce="amax", include_self=True
    )
    z = torch.exp(logits - m.gather(0, idx))
    denom = torch.zeros(shape, dtype=logits.dtype, device=logits.device).scatter_add_(0, idx, z)
    return z / (denom.gather(0, idx) + 1e-30)


def segment_sum(values: Tensor, segments: Tensor, n_segments: int) -> Tensor:
    shape = (n_segments,) + values.shape[1:]
    idx = segments.view(-1, *([1] * (values.dim() - 1))).expand_as(values)
    return torch.zeros(shape, dtype=values.dtype, device=values.device).scatter_add_(
        0, idx, values
    )


class Modulation(nn.Module):
    """Zero-initialized conditioning: per-stage feature scale/shift and gate.

    Produces (gamma, beta, alpha) from a conditioning vector; all three
    start at zero, so a freshly initialized module leaves its host layer
    exactly equal to the unconditional network.
    """

    def __init__(self, hidden_size: int):
        super().__init__()
        self.proj = nn.Linear(hidden_size, 3 * hidden_size)
        nn.init.zeros_(self.proj.weight)
        nn.init.zeros_(self.proj.bias)

    def forward(self, cond: Tensor) -> tuple[Tensor, Tensor, Tensor]:
        gamma, beta, alpha = self.proj(cond).chunk(3, dim=-1)
        return gamma, beta, alpha


class EquivariantLayer(nn.Module):
    """Graph attention over invariant features with an EGNN coordinate update.

    Scalar stream (post-LN):
        h <- LN(h + (1 + alpha_a) * Attn(h * (1 + gamma_a) + beta_a))
        h <- LN(h + (1 + alpha_f) * FFN(h * (1 + gamma_f) + beta_f))
    Coordinate stream:
        x_i <- x_i + sum_j (x_i - x_j) * w_ij / (d_ij + 1)
    with w_ij a zero-initialized scalar of edge invariants, so coordinates
    are untouched at initialization.
    """

    def __init__(
        self,
        hidden_size: int,
        n_heads: int,
        edge_size: int,
        n_rbf: int,
        rbf_cutoff: float,
        update_coords: bool = True,
    ):
        super().__init__()
        if hidden_size % n_heads:
            raise ValueError("hidden_size must be divisible by n_heads")
        self.n_heads = n_heads
        self.head_dim = hidden_size // n_heads
        self.n_rbf = n_rbf
        self.rbf_cutoff = rbf_cutoff
        self.update_coords = update_coords

        self.q = nn.Linear(hidden_size, hidden_size)
        self.k = nn.Linear(hidden_size, hidden_size)
        self.v = nn.Linear(hidden_size, hidden_size)
        self.out = nn.Linear(hidden_size, hidden_size)
        self.edge_in = nn.Linear(n_rbf, edge_size)
        self.edge_bias = nn.Linear(edge_size, n_heads)
        self.edge_value = nn.Linear(edge_size, hidden_size)
        self.norm_attn = nn.LayerNorm(hidden_size)
        self.norm_ffn = nn.LayerNorm(hidden_size)
        self.ffn = mlp([hidden_size, 2 * hidden_size, hidden_size])
        if update_coords:
            self.coord_gate = mlp([hidden_size + edge_size, hidden_size, 1], zero_last=True)

    def _edge_features(self, x: Tensor, src: Tensor, dst: Tensor, edge_attr: Tensor | None):
        d = torch.linalg.norm(x[dst] - x[src], dim=-1)
        feat = self.edge_in(rbf_expand(d, self.n_rbf, self.rbf_cutoff))
        if edge_attr is not None:
            feat = feat + edge_attr
        return d, feat

    def forward(
        self,
        h: Tensor,
        x: Tensor,
        edges: Tensor,
        edge_attr: Tensor | None = None,
        mod_attn: tuple[Tensor, Tensor, Tensor] | None = None,
        mod_ffn: tuple[Tensor, Tensor, Tensor] | None = None,
        coord_mask: Tensor | None = None,
    ) -> tuple[Tensor, Tensor]:
        n = h.shape[0]
        src, dst = edges[0], edges[1]

        def branch_in(t: Tensor, mod) -> Tensor:
            if mod is None:
                return t
            gamma, beta, _ = mod
            return t * (1.0 + gamma) + beta

        def branch_out(t: Tensor, mod) -> Tensor:
            if mod is None:
                return t
            return t * (1.0 + mod[2])

        d = efeat = None
        if edges.numel():
            d, efeat = self._edge_features(x, src, dst, edge_attr)

        # Attention sublayer.
        hin = branch_in(h, mod_attn)
        attn_out = torch.zeros_like(h)
        if edges.numel():
            q = self.q(hin).view(n, self.n_heads, self.head_dim)
            k = self.k(hin).view(n, self.n_heads, self.head_dim)
            v = self.v(hin).view(n, self.n_heads, self.head_dim)
            logits = (q[dst] * k[src]).sum(-1) / math.sqrt(self.head_dim)
            logits = logits + self.edge_bias(efeat)
            alpha = segment_softmax(logits, dst, n)
            val = v[src] + self.edge_value(efeat).view(-1, self.n_heads, self.head_dim)
            messages = alpha.unsqueeze(-1) * val
            attn_out = segment_sum(messages.reshape(-1, self.n_heads * self.head_dim), dst, n)
        h = self.norm_attn(h + branch_out(self.out(attn_out), mod_attn))

        # Feed-forward sublayer.
        h = self.norm_ffn(h + branch_out(self.ffn(branch_in(h, mod_ffn)), mod_ffn))

        # Coordinate update from displacement vectors.
        if self.update_coords and edges.numel():
            w = self.coord_gate(torch.cat([h[dst] + h[src], efeat], dim=-1))
            disp = (x[dst] - x[src]) / (d.unsqueeze(-1) + 1.0)
            delta = segment_sum(disp * w, dst, n)
            if coord_mask is not None:
                delta = delta * coord_mask.unsqueeze(-1).to(delta.dtype)
            x = x + delta
        return h, x
