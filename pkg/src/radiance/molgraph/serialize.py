"""JSON serialization of complexes and graphs.

Schema (format_version 1):
  ComplexRecord: {format_version, id, domain_tag, source, binder, site}
  MolecularGraph: {role, blocks: [...], edges: [[i, j], ...]}
  Block: {block_type, chain_id, residue_index, insertion_code,
          intra_bonds, atoms: [{element, name, coord}]}
"""

from __future__ import annotations

import json
import os

from .types import Atom, Block, ComplexRecord, MolecularGraph

FORMAT_VERSION = 1


def graph_to_dict(graph: MolecularGraph) -> dict:
    return {
        "role": graph.role,
        "blocks": [
            {
                "block_type": b.block_type,
                "chain_id": b.chain_id,
                "residue_index": b.residue_index,
                "insertion_code": b.insertion_code,
                "intra_bonds": [list(p) for p in b.intra_bonds],
                "atoms": [
                    {"element": a.element, "name": a.name, "coord": [float(x) for x in a.coord]}
                    for a in b.atoms
                ],
            }
            for b in graph.blocks
        ],
        "edges": [list(e) for e in graph.edges],
    }


def graph_from_dict(data: dict) -> MolecularGraph:
    blocks = [
        Block(
            block_type=bd["block_type"],
            atoms=[Atom(ad["element"], ad["name"], ad["coord"]) for ad in bd["atoms"]],
            chain_id=bd["chain_id"],
            residue_index=bd["residue_index"],
            insertion_code=bd.get("insertion_code", ""),
            intra_bonds=[tuple(p) for p in bd.get("intra_bonds", [])],
        )
        for bd in data["blocks"]
    ]
    return MolecularGraph(
        blocks=blocks,
        edges=[tuple(e) for e in data.get("edges", [])],
        role=data["role"],
    )


def record_to_dict(record: ComplexRecord) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "id": record.id,
        "domain_tag": record.domain_tag,
        "source": record.source,
        "binder": graph_to_dict(record.binder),
        "site": graph_to_dict(record.site),
    }


def record_from_dict(data: dict) -> ComplexRecord:
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported record format_version {version}")
    return ComplexRecord(
        id=data["id"],
        binder=graph_from_dict(data["binder"]),
        site=graph_from_dict(data["site"]),
        domain_tag=data.get("domain_tag", "synthetic"),
        source=data.get("source", ""),
    )


def save_record(record: ComplexRecord, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(record_to_dict(record), fh, indent=1)
        fh.write("\n")


def load_record(path: str | os.PathLike) -> ComplexRecord:
    with open(path) as fh:
        return record_from_dict(json.load(fh))


def load_dataset(directory: str | os.PathLike) -> list[ComplexRecord]:
    """All *.json complex records in a directory, sorted by filename."""
    records = []
    for name in sorted(os.listdir(directory)):
        if name.endswith(".json"):
            records.append(load_record(os.path.join(directory, name)))
    return records
