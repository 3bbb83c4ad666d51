"""Core molecular data model: atoms, blocks, block graphs, complexes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..vocab import VOCAB, VOCAB_SIZE

ROLE_BINDER = "binder"
ROLE_BINDING_SITE = "binding_site"

DOMAIN_TAGS = ("peptide", "antibody", "protfrag", "synthetic")


@dataclass(frozen=True)
class RigidTransform:
    """Proper rigid motion x -> R @ x + t."""

    rotation: np.ndarray  # (3, 3)
    translation: np.ndarray  # (3,)

    @staticmethod
    def identity() -> "RigidTransform":
        return RigidTransform(np.eye(3), np.zeros(3))

    def apply(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.rotation.T + self.translation

    def inverse(self) -> "RigidTransform":
        rot_inv = self.rotation.T
        return RigidTransform(rot_inv, -rot_inv @ self.translation)

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """Transform equivalent to applying `other` first, then self."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )


def random_rigid(rng: np.random.Generator, max_translation: float = 10.0) -> RigidTransform:
    """Uniform random rotation (QR-based) plus a bounded translation."""
    m = rng.normal(size=(3, 3))
    q, r = np.linalg.qr(m)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    t = rng.uniform(-max_translation, max_translation, size=3)
    return RigidTransform(q, t)


@dataclass
class Atom:
    element: str
    name: str
    coord: np.ndarray  # (3,) Angstrom

    def __post_init__(self) -> None:
        self.coord = np.asarray(self.coord, dtype=float)
        if not self.element:
            raise ValueError("atom element must be non-empty")
        if self.coord.shape != (3,) or not np.all(np.isfinite(self.coord)):
            raise ValueError(f"atom {self.name!r} has invalid coordinates")


@dataclass
class Block:
    """One residue: a typed node holding its heavy atoms."""

    block_type: int  # index into VOCAB
    atoms: list[Atom]
    chain_id: str
    residue_index: int
    insertion_code: str = ""
    intra_bonds: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 0 <= self.block_type < VOCAB_SIZE:
            raise ValueError(f"block_type {self.block_type} outside vocabulary")
        if len(self.atoms) < 1:
            raise ValueError("block must contain at least one atom")

    @property
    def type_code(self) -> str:
        return VOCAB[self.block_type]

    def atom(self, name: str) -> Atom | None:
        for a in self.atoms:
            if a.name == name:
                return a
        return None

    def center(self) -> np.ndarray:
        """Unweighted mean of heavy-atom coordinates."""
        return np.mean([a.coord for a in self.atoms], axis=0)

    def cbeta_proxy(self) -> np.ndarray:
        """CB coordinate, falling back to CA (glycine / unresolved CB)."""
        for name in ("CB", "CA"):
            a = self.atom(name)
            if a is not None:
                return a.coord
        return self.center()


@dataclass
class MolecularGraph:
    """Block-level graph of a binder or binding site."""

    blocks: list[Block]
    edges: list[tuple[int, int]] = field(default_factory=list)
    edge_labels: dict[tuple[int, int], int] = field(default_factory=dict)
    role: str = ROLE_BINDER

    def __post_init__(self) -> None:
        if self.role not in (ROLE_BINDER, ROLE_BINDING_SITE):
            raise ValueError(f"unknown graph role {self.role!r}")
        n = len(self.blocks)
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-edges are not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references a missing block")

    def __len__(self) -> int:
        return len(self.blocks)

    def centers(self) -> np.ndarray:
        """(n_blocks, 3) array of block centers."""
        return np.stack([b.center() for b in self.blocks])

    def sequence(self) -> str:
        from ..vocab import one_letter

        return "".join(one_letter(b.block_type) for b in self.blocks)

    def ca_coords(self) -> np.ndarray:
        """(n_blocks, 3) CA coordinates (block center when CA missing)."""
        out = []
        for b in self.blocks:
            a = b.atom("CA")
            out.append(a.coord if a is not None else b.center())
        return np.stack(out)

    def transformed(self, t: RigidTransform) -> "MolecularGraph":
        blocks = [
            replace(
                b,
                atoms=[replace(a, coord=t.apply(a.coord)) for a in b.atoms],
                intra_bonds=list(b.intra_bonds),
            )
            for b in self.blocks
        ]
        return MolecularGraph(
            blocks=blocks,
            edges=list(self.edges),
            edge_labels=dict(self.edge_labels),
            role=self.role,
        )


@dataclass
class ComplexRecord:
    """A binder/site pair plus bookkeeping metadata."""

    id: str
    binder: MolecularGraph
    site: MolecularGraph
    domain_tag: str = "synthetic"
    source: str = ""

    def __post_init__(self) -> None:
        if not self.binder.blocks or not self.site.blocks:
            raise ValueError("binder and site must be non-empty")
        if self.domain_tag not in DOMAIN_TAGS:
            raise ValueError(f"unknown domain_tag {self.domain_tag!r}")
