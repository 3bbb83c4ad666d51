"""PDB ingestion (ATOM/HETATM records, first MODEL only)."""

from __future__ import annotations

import os
from collections import OrderedDict

import numpy as np

from ..vocab import element_of, type_index
from .types import ROLE_BINDER, ROLE_BINDING_SITE, Atom, Block, ComplexRecord, MolecularGraph


class PdbError(ValueError):
    pass


class MissingChainError(PdbError):
    def __init__(self, chain: str):
        super().__init__(f"chain {chain!r} not found in file")
        self.chain = chain


class AtomRecordError(PdbError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"unparseable ATOM record at line {line_number}: {reason}")
        self.line_number = line_number


def _parse_atom_line(line: str, lineno: int):
    try:
        name = line[12:16].strip()
        altloc = line[16].strip()
        resname = line[17:20].strip()
        chain = line[21].strip()
        resseq = int(line[22:26])
        icode = line[26].strip()
        x = float(line[30:38])
        y = float(line[38:46])
        z = float(line[46:54])
        occ_field = line[54:60].strip()
        occupancy = float(occ_field) if occ_field else 1.0
        element = line[76:78].strip() if len(line) >= 78 else ""
    except (ValueError, IndexError) as exc:
        raise AtomRecordError(lineno, str(exc)) from None
    if not element:
        element = element_of(name)
    return {
        "name": name,
        "altloc": altloc,
        "resname": resname,
        "chain": chain,
        "resseq": resseq,
        "icode": icode,
        "coord": np.array([x, y, z]),
        "occupancy": occupancy,
        "order": lineno,
        "element": element.capitalize(),
    }


def parse_pdb(
    path: str | os.PathLike,
    binder_chains: set[str] | list[str] | tuple[str, ...],
    target_chains: set[str] | list[str] | tuple[str, ...],
) -> ComplexRecord:
    """Parse a PDB file into binder and target block graphs.

    Only heavy atoms from the first MODEL are kept. Altloc conflicts are
    resolved by highest occupancy, then first occurrence. Residue names
    outside the standard 20 map to UNK.
    """
    binder_chains = set(binder_chains)
    target_chains = set(target_chains)
    wanted = binder_chains | target_chains

    # (chain, resseq, icode) -> atom name -> parsed record
    residues: OrderedDict[tuple, OrderedDict[str, dict]] = OrderedDict()
    seen_chains: set[str] = set()
    n_atoms = 0
    in_first_model = True

    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tag = line[:6]
            if tag.startswith("MODEL"):
                in_first_model = int(line.split()[1]) == 1 if len(line.split()) > 1 else True
                continue
            if tag.startswith("ENDMDL"):
                in_first_model = False
                continue
            if not in_first_model or tag not in ("ATOM  ", "HETATM"):
                continue
            rec = _parse_atom_line(line, lineno)
            n_atoms += 1
            seen_chains.add(rec["chain"])
            if rec["chain"] not in wanted:
                continue
            if rec["element"] == "H":
                continue
            key = (rec["chain"], rec["resseq"], rec["icode"])
            atoms = residues.setdefault(key, OrderedDict())
            prev = atoms.get(rec["name"])
            if prev is None:
                atoms[rec["name"]] = rec
            elif rec["occupancy"] > prev["occupancy"]:
                rec["order"] = prev["order"]
                atoms[rec["name"]] = rec

    if n_atoms == 0:
        raise PdbError("no atoms parsed")
    for chain in sorted(wanted):
        if chain not in seen_chains:
            raise MissingChainError(chain)

    def build_graph(chains: set[str], role: str) -> MolecularGraph:
        keys = [k for k in residues if k[0] in chains]
        # Residue number order, insertion codes lexicographic after number.
        keys.sort(key=lambda k: (k[0], k[1], k[2]))
        blocks = []
        for key in keys:
            atoms_by_name = residues[key]
            recs = sorted(atoms_by_name.values(), key=lambda r: r["order"])
            resname = recs[0]["resname"]
            blocks.append(
                Block(
                    block_type=type_index(resname),
                    atoms=[Atom(r["element"], r["name"], r["coord"]) for r in recs],
                    chain_id=key[0],
                    residue_index=key[1],
                    insertion_code=key[2],
                )
            )
        return MolecularGraph(blocks=blocks, role=role)

    binder = build_graph(binder_chains, ROLE_BINDER)
    target = build_graph(target_chains, ROLE_BINDING_SITE)
    if not binder.blocks:
        raise PdbError("binder chains contain no residues")
    if not target.blocks:
        raise PdbError("target chains contain no residues")

    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return ComplexRecord(
        id=stem,
        binder=binder,
        site=target,
        domain_tag="synthetic",
        source=str(path),
    )


_PDB_ATOM_FMT = (
    "ATOM  {serial:>5d} {name:<4s}{altloc:1s}{resname:>3s} {chain:1s}"
    "{resseq:>4d}{icode:1s}   {x:>8.3f}{y:>8.3f}{z:>8.3f}{occ:>6.2f}{b:>6.2f}"
    "          {element:>2s}\n"
)


def write_pdb(path: str | os.PathLike, graphs: list[MolecularGraph]) -> None:
    """Write block graphs as PDB ATOM records (one file, shared frame)."""
    from ..vocab import AA1_TO_3, VOCAB

    serial = 1
    with open(path, "w") as fh:
        for graph in graphs:
            for block in graph.blocks:
                code = VOCAB[block.block_type]
                resname = AA1_TO_3.get(code, "UNK")
                for atom in block.atoms:
                    name = atom.name if len(atom.name) >= 4 else f" {atom.name:<3s}"
                    fh.write(
                        _PDB_ATOM_FMT.format(
                            serial=serial,
                            name=name,
                            altloc=" ",
                            resname=resname,
                            chain=block.chain_id[:1] or "A",
                            resseq=block.residue_index,
                            icode=block.insertion_code[:1] or " ",
                            x=atom.coord[0],
                            y=atom.coord[1],
                            z=atom.coord[2],
                            occ=1.0,
                            b=0.0,
                            element=atom.element[:2],
                        )
                    )
                    serial += 1
            fh.write("TER\n")
        fh.write("END\n")
