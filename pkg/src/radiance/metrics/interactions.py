"""Geometric detection of residue-level interface interactions.

Rules (heavy atoms only):
  hydrogen_bond  donor N/O to acceptor N/O within 3.5 A, donors and
                 acceptors per the residue tables in `vocab`
  hydrophobic    carbon-carbon within 4.0 A between residues in
                 {A,V,L,I,M,F,W,P,Y}
  salt_bridge    charged side-chain N/O pairs (K/R/H vs D/E) within 4.0 A

One record is kept per (type, site residue, binder residue).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..molgraph.types import Block, MolecularGraph
from ..vocab import (
    HYDROPHOBIC_RESIDUES,
    NEGATIVE_ATOMS,
    NEGATIVE_RESIDUES,
    POSITIVE_ATOMS,
    POSITIVE_RESIDUES,
    acceptor_atoms,
    donor_atoms,
)

HBOND_CUTOFF = 3.5
HYDROPHOBIC_CUTOFF = 4.0
SALT_BRIDGE_CUTOFF = 4.0

INTERACTION_TYPES = ("hydrogen_bond", "hydrophobic", "salt_bridge")


@dataclass(frozen=True, order=True)
class InteractionRecord:
    itype: str
    site_residue: tuple[str, int]
    binder_residue: tuple[str, int]


@dataclass
class InteractionSet:
    records: list[InteractionRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def type_counts(self) -> Counter:
        return Counter(r.itype for r in self.records)

    def record_counts(self) -> Counter:
        return Counter(self.records)


def _coords_of(block: Block, names: tuple[str, ...]) -> np.ndarray:
    pts = [a.coord for a in block.atoms if a.name in names]
    return np.stack(pts) if pts else np.zeros((0, 3))


def _carbon_coords(block: Block) -> np.ndarray:
    pts = [a.coord for a in block.atoms if a.element == "C"]
    return np.stack(pts) if pts else np.zeros((0, 3))


def _min_dist(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0 or b.size == 0:
        return np.inf
    return float(np.min(np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)))


def _charged_coords(block: Block) -> np.ndarray:
    code = block.type_code
    names = POSITIVE_ATOMS.get(code) or NEGATIVE_ATOMS.get(code) or ()
    return _coords_of(block, names)


def detect_interactions(binder: MolecularGraph, site: MolecularGraph) -> InteractionSet:
    records: set[InteractionRecord] = set()
    for sb in site.blocks:
        s_id = (sb.chain_id, sb.residue_index)
        s_code = sb.type_code
        for bb in binder.blocks:
            b_id = (bb.chain_id, bb.residue_index)
            b_code = bb.type_code

            # Cheap reject: residues far apart contribute nothing.
            if np.linalg.norm(sb.center() - bb.center()) > 25.0:
                continue

            hb = min(
                _min_dist(_coords_of(sb, donor_atoms(s_code)), _coords_of(bb, acceptor_atoms(b_code))),
                _min_dist(_coords_of(sb, acceptor_atoms(s_code)), _coords_of(bb, donor_atoms(b_code))),
            )
            if hb <= HBOND_CUTOFF:
                records.add(InteractionRecord("hydrogen_bond", s_id, b_id))

            if s_code in HYDROPHOBIC_RESIDUES and b_code in HYDROPHOBIC_RESIDUES:
                if _min_dist(_carbon_coords(sb), _carbon_coords(bb)) <= HYDROPHOBIC_CUTOFF:
                    records.add(InteractionRecord("hydrophobic", s_id, b_id))

            opposite = (s_code in POSITIVE_RESIDUES and b_code in NEGATIVE_RESIDUES) or (
                s_code in NEGATIVE_RESIDUES and b_code in POSITIVE_RESIDUES
            )
            if opposite:
                if _min_dist(_charged_coords(sb), _charged_coords(bb)) <= SALT_BRIDGE_CUTOFF:
                    records.add(InteractionRecord("salt_bridge", s_id, b_id))

    return InteractionSet(records=sorted(records))
