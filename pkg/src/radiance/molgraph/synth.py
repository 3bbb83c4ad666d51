"""Synthetic toy complexes with plausible backbone geometry.

Binder block types are drawn uniformly from the 20 standard residues.
Site residues facing the binder take the complementary type of their
nearest binder residue (a fixed pairing table), so that binding sites
carry a signal about their binders; retrieval on held-out synthetic
complexes is learnable rather than pure memorization.
"""

from __future__ import annotations

import numpy as np

from ..vocab import ATOM_TEMPLATES, TYPE_INDEX, VOCAB, element_of
from .types import Atom, Block, ComplexRecord, MolecularGraph, ROLE_BINDER, ROLE_BINDING_SITE

_STANDARD = [c for c in VOCAB if c != "UNK"]

# Complementary-type pairing used for interface residues (K<->E etc.).
_COMPLEMENT = {
    "A": "L", "L": "A", "V": "I", "I": "V", "M": "F", "F": "M",
    "W": "P", "P": "W", "Y": "T", "T": "Y", "S": "N", "N": "S",
    "Q": "G", "G": "Q", "K": "E", "E": "K", "R": "D", "D": "R",
    "H": "C", "C": "H",
}


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _ca_walk(rng: np.random.Generator, n: int) -> np.ndarray:
    """Smooth random CA trace with consecutive spacing in [3.7, 3.9]."""
    coords = [np.zeros(3)]
    direction = _unit(rng.normal(size=3))
    for _ in range(n - 1):
        direction = _unit(direction + 0.7 * rng.normal(size=3))
        step = rng.uniform(3.7, 3.9)
        coords.append(coords[-1] + step * direction)
    return np.stack(coords)


def _residue_atoms(
    rng: np.random.Generator, code: str, ca: np.ndarray, toward_next: np.ndarray
) -> list[Atom]:
    """Place template heavy atoms around a CA with rough local geometry."""
    axis = _unit(toward_next)
    ortho = _unit(np.cross(axis, rng.normal(size=3)))
    atoms = []
    for k, name in enumerate(ATOM_TEMPLATES[code]):
        if name == "CA":
            pos = ca
        elif name == "N":
            pos = ca - 1.46 * axis + 0.3 * ortho
        elif name == "C":
            pos = ca + 1.52 * axis + 0.3 * ortho
        elif name == "O":
            pos = ca + 1.52 * axis + 1.23 * ortho
        elif name == "CB":
            pos = ca + 1.53 * _unit(ortho - 0.5 * axis)
        else:
            # Side chain marches away from CA with mild jitter.
            depth = k - 3
            pos = (
                ca
                + (1.5 + 0.8 * depth) * _unit(ortho - 0.4 * axis)
                + 0.25 * rng.normal(size=3)
            )
        atoms.append(Atom(element_of(name), name, pos))
    return atoms


def _build_chain(
    rng: np.random.Generator,
    ca: np.ndarray,
    codes: list[str],
    chain_id: str,
    role: str,
) -> MolecularGraph:
    n = len(ca)
    blocks = []
    for i, code in enumerate(codes):
        toward = ca[min(i + 1, n - 1)] - ca[max(i - 1, 0)]
        if not np.any(toward):
            toward = np.array([1.0, 0.0, 0.0])
        blocks.append(
            Block(
                block_type=TYPE_INDEX[code],
                atoms=_residue_atoms(rng, code, ca[i], toward),
                chain_id=chain_id,
                residue_index=i + 1,
            )
        )
    return MolecularGraph(blocks=blocks, role=role)


def synth_complex(
    seed: int,
    binder_len: int,
    site_len: int,
    *,
    correlated_types: bool = True,
) -> ComplexRecord:
    """Deterministic toy complex; same seed gives a bit-identical record."""
    if binder_len < 1 or site_len < 1:
        raise ValueError("lengths must be >= 1")
    rng = np.random.default_rng(seed)

    binder_ca = _ca_walk(rng, binder_len)
    binder_codes = [_STANDARD[rng.integers(len(_STANDARD))] for _ in range(binder_len)]

    site_ca = _ca_walk(rng, site_len)
    # Anchor a random site residue next to a random binder residue.
    anchor_site = int(rng.integers(site_len))
    anchor_binder = int(rng.integers(binder_len))
    offset_dir = _unit(rng.normal(size=3))
    radius = rng.uniform(4.5, 6.5)
    site_ca = site_ca - site_ca[anchor_site] + binder_ca[anchor_binder] + radius * offset_dir

    if correlated_types:
        site_codes = []
        for i in range(site_len):
            nearest = int(np.argmin(np.linalg.norm(binder_ca - site_ca[i], axis=1)))
            site_codes.append(_COMPLEMENT[binder_codes[nearest]])
    else:
        site_codes = [_STANDARD[rng.integers(len(_STANDARD))] for _ in range(site_len)]

    binder = _build_chain(rng, binder_ca, binder_codes, "A", ROLE_BINDER)
    site = _build_chain(rng, site_ca, site_codes, "B", ROLE_BINDING_SITE)
    return ComplexRecord(
        id=f"synth-{seed}",
        binder=binder,
        site=site,
        domain_tag="synthetic",
        source=f"seed:{seed}",
    )


def jitter_complex(record: ComplexRecord, seed: int, sigma: float = 0.3) -> ComplexRecord:
    """Near-duplicate of a complex: same types, Gaussian coordinate noise."""
    rng = np.random.default_rng(seed)

    def jitter(graph: MolecularGraph) -> MolecularGraph:
        blocks = []
        for b in graph.blocks:
            atoms = [
                Atom(a.element, a.name, a.coord + sigma * rng.normal(size=3))
                for a in b.atoms
            ]
            blocks.append(
                Block(
                    block_type=b.block_type,
                    atoms=atoms,
                    chain_id=b.chain_id,
                    residue_index=b.residue_index,
                    insertion_code=b.insertion_code,
                    intra_bonds=list(b.intra_bonds),
                )
            )
        return MolecularGraph(blocks=blocks, edges=list(graph.edges), role=graph.role)

    return ComplexRecord(
        id=f"{record.id}-j{seed}",
        binder=jitter(record.binder),
        site=jitter(record.site),
        domain_tag=record.domain_tag,
        source=f"{record.source}|jitter:{seed}:{sigma}",
    )


def synth_dataset(
    n: int,
    seed: int,
    binder_len: tuple[int, int] = (6, 12),
    site_len: tuple[int, int] = (14, 22),
    family_size: int = 1,
    jitter_sigma: float = 0.3,
) -> list[ComplexRecord]:
    """Deterministic dataset of toy complexes.

    With family_size > 1, complexes come in families of near-duplicates
    (shared archetype, jittered coordinates), giving the retrieval store
    genuinely similar interfaces.
    """
    rng = np.random.default_rng(seed)
    records = []
    n_arch = (n + family_size - 1) // family_size
    for k in range(n_arch):
        arch_seed = int(rng.integers(2**31 - 1))
        blen = int(rng.integers(binder_len[0], binder_len[1] + 1))
        slen = int(rng.integers(site_len[0], site_len[1] + 1))
        arch = synth_complex(arch_seed, blen, slen)
        for m in range(family_size):
            if len(records) == n:
                break
            if m == 0:
                rec = ComplexRecord(
                    id=f"toy-{k:04d}-0",
                    binder=arch.binder,
                    site=arch.site,
                    domain_tag="synthetic",
                    source=arch.source,
                )
            else:
                j = jitter_complex(arch, seed=int(rng.integers(2**31 - 1)), sigma=jitter_sigma)
                rec = ComplexRecord(
                    id=f"toy-{k:04d}-{m}",
                    binder=j.binder,
                    site=j.site,
                    domain_tag="synthetic",
                    source=j.source,
                )
            records.append(rec)
    return records


def consecutive_ca_distances(graph: MolecularGraph) -> np.ndarray:
    """Distances between CA atoms of consecutive residues per chain."""
    out = []
    blocks = graph.blocks
    for a, b in zip(blocks, blocks[1:]):
        if a.chain_id == b.chain_id and b.residue_index == a.residue_index + 1:
            ca_a, ca_b = a.atom("CA"), b.atom("CA")
            if ca_a is not None and ca_b is not None:
                out.append(np.linalg.norm(ca_a.coord - ca_b.coord))
    return np.asarray(out)
