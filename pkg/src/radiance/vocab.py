"""Residue vocabulary and per-residue chemistry tables.

The block vocabulary covers the 20 standard amino acids plus UNK. Every
entry carries a fixed heavy-atom template (PDB atom names in canonical
order); residues parsed with fewer atoms are treated as partially
resolved. Non-standard residue names map to UNK.
"""

from __future__ import annotations

AA3_TO_1 = {
    "ALA": "A", "ARG": "R", "ASN": "N", "ASP": "D", "CYS": "C",
    "GLN": "Q", "GLU": "E", "GLY": "G", "HIS": "H", "ILE": "I",
    "LEU": "L", "LYS": "K", "MET": "M", "PHE": "F", "PRO": "P",
    "SER": "S", "THR": "T", "TRP": "W", "TYR": "Y", "VAL": "V",
}
AA1_TO_3 = {v: k for k, v in AA3_TO_1.items()}

UNK = "UNK"

# Vocabulary order: alphabetical one-letter codes, UNK last.
VOCAB = tuple(sorted(AA1_TO_3)) + (UNK,)
VOCAB_SIZE = len(VOCAB)  # 21
TYPE_INDEX = {code: i for i, code in enumerate(VOCAB)}
UNK_INDEX = TYPE_INDEX[UNK]

BACKBONE_ATOMS = ("N", "CA", "C", "O")

# Heavy-atom templates (backbone + side chain, no OXT, no hydrogens).
_SIDE_CHAINS = {
    "A": ("CB",),
    "R": ("CB", "CG", "CD", "NE", "CZ", "NH1", "NH2"),
    "N": ("CB", "CG", "OD1", "ND2"),
    "D": ("CB", "CG", "OD1", "OD2"),
    "C": ("CB", "SG"),
    "Q": ("CB", "CG", "CD", "OE1", "NE2"),
    "E": ("CB", "CG", "CD", "OE1", "OE2"),
    "G": (),
    "H": ("CB", "CG", "ND1", "CD2", "CE1", "NE2"),
    "I": ("CB", "CG1", "CG2", "CD1"),
    "L": ("CB", "CG", "CD1", "CD2"),
    "K": ("CB", "CG", "CD", "CE", "NZ"),
    "M": ("CB", "CG", "SD", "CE"),
    "F": ("CB", "CG", "CD1", "CD2", "CE1", "CE2", "CZ"),
    "P": ("CB", "CG", "CD"),
    "S": ("CB", "OG"),
    "T": ("CB", "OG1", "CG2"),
    "W": ("CB", "CG", "CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"),
    "Y": ("CB", "CG", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"),
    "V": ("CB", "CG1", "CG2"),
}

ATOM_TEMPLATES: dict[str, tuple[str, ...]] = {
    code: BACKBONE_ATOMS + _SIDE_CHAINS[code] for code in AA1_TO_3
}
ATOM_TEMPLATES[UNK] = BACKBONE_ATOMS

MAX_TEMPLATE_ATOMS = max(len(t) for t in ATOM_TEMPLATES.values())


def element_of(atom_name: str) -> str:
    """Infer the element symbol from a PDB heavy-atom name."""
    name = atom_name.strip()
    for sym in ("N", "C", "O", "S"):
        if name.startswith(sym) and not name.startswith("CL"):
            return sym
    return name[:1] or "X"


def type_index(residue_name: str) -> int:
    """Map a 3-letter or 1-letter residue name to a vocabulary index."""
    name = residue_name.strip().upper()
    if len(name) == 1 and name in AA1_TO_3:
        return TYPE_INDEX[name]
    if name in AA3_TO_1:
        return TYPE_INDEX[AA3_TO_1[name]]
    return UNK_INDEX


def one_letter(index: int) -> str:
    """One-letter code for a vocabulary index ('X' for UNK)."""
    code = VOCAB[index]
    return code if code != UNK else "X"


# Residues whose carbons count toward hydrophobic contacts.
HYDROPHOBIC_RESIDUES = frozenset("AVLIMFWPY")

# Positively / negatively charged side-chain groups for salt bridges.
POSITIVE_RESIDUES = frozenset("KRH")
NEGATIVE_RESIDUES = frozenset("DE")
POSITIVE_ATOMS = {
    "K": ("NZ",),
    "R": ("NE", "NH1", "NH2"),
    "H": ("ND1", "NE2"),
}
NEGATIVE_ATOMS = {
    "D": ("OD1", "OD2"),
    "E": ("OE1", "OE2"),
}

# Hydrogen-bond donor / acceptor heavy atoms (N/O chemistry only).
# Backbone N donates (except proline); backbone O accepts, for all types.
HBOND_DONOR_ATOMS = {
    "R": ("NE", "NH1", "NH2"),
    "N": ("ND2",),
    "Q": ("NE2",),
    "H": ("ND1", "NE2"),
    "K": ("NZ",),
    "S": ("OG",),
    "T": ("OG1",),
    "W": ("NE1",),
    "Y": ("OH",),
}
HBOND_ACCEPTOR_ATOMS = {
    "N": ("OD1",),
    "D": ("OD1", "OD2"),
    "Q": ("OE1",),
    "E": ("OE1", "OE2"),
    "H": ("ND1", "NE2"),
    "S": ("OG",),
    "T": ("OG1",),
    "Y": ("OH",),
}


def donor_atoms(code: str) -> tuple[str, ...]:
    """Heavy-atom donor names for a one-letter residue code."""
    backbone = () if code == "P" else ("N",)
    return backbone + HBOND_DONOR_ATOMS.get(code, ())


def acceptor_atoms(code: str) -> tuple[str, ...]:
    """Heavy-atom acceptor names for a one-letter residue code."""
    return ("O",) + HBOND_ACCEPTOR_ATOMS.get(code, ())


# BLOSUM62 substitution scores for the 20 standard residues.
_BLOSUM62_ORDER = "ARNDCQEGHILKMFPSTWYV"
_BLOSUM62_ROWS = """
 4 -1 -2 -2  0 -1 -1  0 -2 -1 -1 -1 -1 -2 -1  1  0 -3 -2  0
-1  5  0 -2 -3  1  0 -2  0 -3 -2  2 -1 -3 -2 -1 -1 -3 -2 -3
-2  0  6  1 -3  0  0  0  1 -3 -3  0 -2 -3 -2  1  0 -4 -2 -3
-2 -2  1  6 -3  0  2 -1 -1 -3 -4 -1 -3 -3 -1  0 -1 -4 -3 -3
 0 -3 -3 -3  9 -3 -4 -3 -3 -1 -1 -3 -1 -2 -3 -1 -1 -2 -2 -1
-1  1  0  0 -3  5  2 -2  0 -3 -2  1  0 -3 -1  0 -1 -2 -1 -2
-1  0  0  2 -4  2  5 -2  0 -3 -3  1 -2 -3 -1  0 -1 -3 -2 -2
 0 -2  0 -1 -3 -2 -2  6 -2 -4 -4 -2 -3 -3 -2  0 -2 -2 -3 -3
-2  0  1 -1 -3  0  0 -2  8 -3 -3 -1 -2 -1 -2 -1 -2 -2  2 -3
-1 -3 -3 -3 -1 -3 -3 -4 -3  4  2 -3  1  0 -3 -2 -1 -3 -1  3
-1 -2 -3 -4 -1 -2 -3 -4 -3  2  4 -2  2  0 -3 -2 -1 -2 -1  1
-1  2  0 -1 -3  1  1 -2 -1 -3 -2  5 -1 -3 -1  0 -1 -3 -2 -2
-1 -1 -2 -3 -1  0 -2 -3 -2  1  2 -1  5  0 -2 -1 -1 -1 -1  1
-2 -3 -3 -3 -2 -3 -3 -3 -1  0  0 -3  0  6 -4 -2 -2  1  3 -1
-1 -2 -2 -1 -3 -1 -1 -2 -2 -3 -3 -1 -2 -4  7 -1 -1 -4 -3 -2
 1 -1  1  0 -1  0  0  0 -1 -2 -2  0 -1 -2 -1  4  1 -3 -2 -2
 0 -1  0 -1 -1 -1 -1 -2 -2 -1 -1 -1 -1 -2 -1  1  5 -2 -2  0
-3 -3 -4 -4 -2 -2 -3 -2 -2 -3 -2 -3 -1  1 -4 -3 -2 11  2 -3
-2 -2 -2 -3 -2 -1 -2 -3  2 -1 -1 -2 -1  3 -3 -2 -2  2  7 -1
 0 -3 -3 -3 -1 -2 -2 -3 -3  3  1 -2  1 -1 -2 -2  0 -3 -1  4
"""

BLOSUM62: dict[tuple[str, str], int] = {}
for _i, _row in enumerate(_BLOSUM62_ROWS.strip().splitlines()):
    for _j, _score in enumerate(_row.split()):
        BLOSUM62[(_BLOSUM62_ORDER[_i], _BLOSUM62_ORDER[_j])] = int(_score)
