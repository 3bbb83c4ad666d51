"""Binding-site extraction and block-graph connectivity."""

from __future__ import annotations

import numpy as np

from .types import ComplexRecord, MolecularGraph, ROLE_BINDING_SITE


class SiteExtractionError(ValueError):
    pass


def extract_binding_site(complex_record: ComplexRecord, cutoff: float = 10.0) -> MolecularGraph:
    """Target residues whose CB proxy lies within `cutoff` of any binder CB proxy.

    The CB proxy is CA for glycine or residues without a resolved CB. The
    cutoff comparison is inclusive. Residue ordering is preserved.
    """
    binder_cb = np.stack([b.cbeta_proxy() for b in complex_record.binder.blocks])
    keep = []
    for idx, block in enumerate(complex_record.site.blocks):
        d = np.linalg.norm(binder_cb - block.cbeta_proxy(), axis=1)
        if d.min() <= cutoff:
            keep.append(idx)
    if not keep:
        raise SiteExtractionError("no contact residues within cutoff")
    blocks = [complex_record.site.blocks[i] for i in keep]
    return MolecularGraph(blocks=blocks, role=ROLE_BINDING_SITE)


def knn_edges(centers: np.ndarray, k: int) -> list[tuple[int, int]]:
    """Symmetrized k-nearest-neighbor edges over point centers.

    Each node links to its k nearest others (all others when fewer than k
    exist); the union with reversed pairs makes the set symmetric.
    """
    n = len(centers)
    if n <= 1:
        return []
    d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    k_eff = min(k, n - 1)
    edges: set[tuple[int, int]] = set()
    for i in range(n):
        # Stable nearest-k: sort by (distance, index) for determinism.
        order = np.lexsort((np.arange(n), d[i]))[:k_eff]
        for j in order:
            edges.add((i, int(j)))
            edges.add((int(j), i))
    return sorted(edges)


def build_block_graph(graph: MolecularGraph, k_neighbors: int = 9) -> MolecularGraph:
    """Attach symmetrized kNN edges over block centers of mass."""
    if not graph.blocks:
        raise ValueError("graph has no blocks")
    edges = knn_edges(graph.centers(), k_neighbors)
    return MolecularGraph(
        blocks=graph.blocks,
        edges=edges,
        edge_labels=dict(graph.edge_labels),
        role=graph.role,
    )


def sequence_adjacent(graph: MolecularGraph, i: int, j: int) -> bool:
    """Whether blocks i and j are consecutive residues of one chain."""
    a, b = graph.blocks[i], graph.blocks[j]
    return a.chain_id == b.chain_id and abs(a.residue_index - b.residue_index) == 1
