"""Molecular data model, PDB ingestion, and toy-complex generation."""

from .graphs import build_block_graph, extract_binding_site, knn_edges, sequence_adjacent
from .pdb import AtomRecordError, MissingChainError, PdbError, parse_pdb, write_pdb
from .serialize import (
    graph_from_dict,
    graph_to_dict,
    load_dataset,
    load_record,
    record_from_dict,
    record_to_dict,
    save_record,
)
from .synth import consecutive_ca_distances, jitter_complex, synth_complex, synth_dataset
from .types import (
    Atom,
    Block,
    ComplexRecord,
    DOMAIN_TAGS,
    MolecularGraph,
    ROLE_BINDER,
    ROLE_BINDING_SITE,
    RigidTransform,
    random_rigid,
)

__all__ = [
    "Atom",
    "AtomRecordError",
    "Block",
    "ComplexRecord",
    "DOMAIN_TAGS",
    "MissingChainError",
    "MolecularGraph",
    "PdbError",
    "ROLE_BINDER",
    "ROLE_BINDING_SITE",
    "RigidTransform",
    "build_block_graph",
    "consecutive_ca_distances",
    "extract_binding_site",
    "graph_from_dict",
    "graph_to_dict",
    "jitter_complex",
    "knn_edges",
    "load_dataset",
    "load_record",
    "parse_pdb",
    "random_rigid",
    "record_from_dict",
    "record_to_dict",
    "save_record",
    "sequence_adjacent",
    "synth_complex",
    "synth_dataset",
    "write_pdb",
]
