import numpy as np
import pytest
import torch

from radiance.molgraph import (
    Atom,
    Block,
    ComplexRecord,
    MolecularGraph,
    ROLE_BINDER,
    ROLE_BINDING_SITE,
    build_block_graph,
    synth_complex,
)
from radiance.vocab import TYPE_INDEX

torch.set_default_dtype(torch.float64)


def make_residue(code: str, ca, chain="A", index=1, cb=None):
    """Minimal residue with backbone + optional CB at explicit positions."""
    ca = np.asarray(ca, dtype=float)
    atoms = [
        Atom("N", "N", ca + [-1.4, 0.0, 0.0]),
        Atom("C", "CA", ca),
        Atom("C", "C", ca + [1.5, 0.0, 0.0]),
        Atom("O", "O", ca + [1.5, 1.2, 0.0]),
    ]
    if cb is not None:
        atoms.append(Atom("C", "CB", np.asarray(cb, dtype=float)))
    return Block(
        block_type=TYPE_INDEX[code],
        atoms=atoms,
        chain_id=chain,
        residue_index=index,
    )


def make_graph(residues, role=ROLE_BINDER, k=9):
    return build_block_graph(MolecularGraph(blocks=residues, role=role), k)


@pytest.fixture
def toy_complex():
    return synth_complex(seed=7, binder_len=8, site_len=20)


@pytest.fixture
def toy_pair(toy_complex):
    """Binder and extracted site graphs with kNN edges built."""
    from radiance.molgraph import extract_binding_site

    site = build_block_graph(extract_binding_site(toy_complex), 9)
    binder = build_block_graph(toy_complex.binder, 9)
    return binder, site
