"""Interface and sequence/structure recovery metrics."""

from __future__ import annotations

import math

import numpy as np

from ..molgraph.types import MolecularGraph
from ..vocab import BLOSUM62
from .interactions import InteractionSet

GAP_OPEN = -10.0
GAP_EXTEND = -1.0
_X_SCORE = -1.0  # UNK vs anything

_VALID_SYMBOLS = set("ACDEFGHIKLMNPQRSTVWYX")


def ism(pred: InteractionSet, ref: InteractionSet) -> float:
    """Fraction of reference interactions strictly matched in the prediction.

    A match requires identical type, site residue, and binder residue.
    Returns NaN when the reference has no interactions.
    """
    if len(ref) == 0:
        return float("nan")
    ref_counts = ref.record_counts()
    pred_counts = pred.record_counts()
    matched = sum(min(n, pred_counts.get(rec, 0)) for rec, n in ref_counts.items())
    return matched / len(ref)


def ito(pred: InteractionSet, ref: InteractionSet) -> float:
    """Min-count overlap of interaction-type histograms, reference-normalized."""
    ref_counts = ref.type_counts()
    total_ref = sum(ref_counts.values())
    if total_ref == 0:
        return float("nan")
    pred_counts = pred.type_counts()
    overlap = sum(min(n, pred_counts.get(t, 0)) for t, n in ref_counts.items())
    return overlap / total_ref


def _blosum(a: str, b: str) -> float:
    if a == "X" or b == "X":
        return _X_SCORE
    return float(BLOSUM62[(a, b)])


def _validate_sequence(seq: str, label: str) -> None:
    if not seq:
        raise ValueError(f"{label} sequence is empty")
    bad = set(seq) - _VALID_SYMBOLS
    if bad:
        raise ValueError(f"{label} sequence has non-amino-acid symbols: {sorted(bad)}")


def align_global(a: str, b: str) -> tuple[str, str, float]:
    """Needleman-Wunsch with affine gaps (Gotoh); returns aligned strings.

    A gap of length L costs GAP_OPEN + (L - 1) * GAP_EXTEND.
    """
    n, m = len(a), len(b)
    neg = -math.inf
    # M: a[i] aligned to b[j]; X: gap in b (a consumed); Y: gap in a.
    M = np.full((n + 1, m + 1), neg)
    X = np.full((n + 1, m + 1), neg)
    Y = np.full((n + 1, m + 1), neg)
    M[0, 0] = 0.0
    for i in range(1, n + 1):
        X[i, 0] = GAP_OPEN + (i - 1) * GAP_EXTEND
    for j in range(1, m + 1):
        Y[0, j] = GAP_OPEN + (j - 1) * GAP_EXTEND
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            s = _blosum(a[i - 1], b[j - 1])
            M[i, j] = max(M[i - 1, j - 1], X[i - 1, j - 1], Y[i - 1, j - 1]) + s
            X[i, j] = max(M[i - 1, j] + GAP_OPEN, X[i - 1, j] + GAP_EXTEND)
            Y[i, j] = max(M[i, j - 1] + GAP_OPEN, Y[i, j - 1] + GAP_EXTEND)
    # Traceback from the best terminal state.
    states = {"M": M, "X": X, "Y": Y}
    state = max(states, key=lambda k: states[k][n, m])
    best = states[state][n, m]
    out_a: list[str] = []
    out_b: list[str] = []
    i, j = n, m
    while i > 0 or j > 0:
        if state == "M":
            out_a.append(a[i - 1])
            out_b.append(b[j - 1])
            prev = M[i, j] - _blosum(a[i - 1], b[j - 1])
            i, j = i - 1, j - 1
            state = next(
                k for k in ("M", "X", "Y")
                if math.isclose(states[k][i, j], prev, abs_tol=1e-9)
            )
        elif state == "X":
            out_a.append(a[i - 1])
            out_b.append("-")
            if math.isclose(X[i, j], M[i - 1, j] + GAP_OPEN, abs_tol=1e-9):
                state = "M"
            i -= 1
        else:
            out_a.append("-")
            out_b.append(b[j - 1])
            if math.isclose(Y[i, j], M[i, j - 1] + GAP_OPEN, abs_tol=1e-9):
                state = "M"
            j -= 1
    return "".join(reversed(out_a)), "".join(reversed(out_b)), best


def aar(gen_seq: str, ref_seq: str) -> float:
    """Amino acid recovery (%) of the generated sequence vs the reference.

    Equal lengths compare positionwise; otherwise sequences are globally
    aligned (BLOSUM62, gap open -10, extend -1). Identities are counted
    and normalized by the reference length.
    """
    _validate_sequence(gen_seq, "generated")
    _validate_sequence(ref_seq, "reference")
    if len(gen_seq) == len(ref_seq):
        matches = sum(1 for x, y in zip(gen_seq, ref_seq) if x == y)
    else:
        aligned_gen, aligned_ref, _ = align_global(gen_seq, ref_seq)
        matches = sum(
            1 for x, y in zip(aligned_gen, aligned_ref) if x == y and x != "-"
        )
    return 100.0 * matches / len(ref_seq)


def kabsch(mobile: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Optimal rotation R and translation t with R @ mobile + t ~ target."""
    mu_m = mobile.mean(axis=0)
    mu_t = target.mean(axis=0)
    h = (mobile - mu_m).T @ (target - mu_t)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    corr = np.diag([1.0, 1.0, d])
    rot = vt.T @ corr @ u.T
    trans = mu_t - rot @ mu_m
    return rot, trans


def rmsd_ca(
    gen: MolecularGraph,
    ref: MolecularGraph,
    site_gen: MolecularGraph,
    site_ref: MolecularGraph,
) -> float:
    """Binder CA RMSD after superposing the generated site onto the reference site."""
    if len(gen) != len(ref):
        raise ValueError(f"binder lengths differ: {len(gen)} vs {len(ref)}")
    if len(site_gen) != len(site_ref):
        raise ValueError(f"site lengths differ: {len(site_gen)} vs {len(site_ref)}")
    rot, trans = kabsch(site_gen.ca_coords(), site_ref.ca_coords())
    moved = gen.ca_coords() @ rot.T + trans
    diff = moved - ref.ca_coords()
    return float(np.sqrt(np.mean(np.sum(diff**2, axis=1))))


def _pair_identity(a: str, b: str) -> float:
    """Symmetric percent identity used for diversity clustering."""
    if len(a) == len(b):
        matches = sum(1 for x, y in zip(a, b) if x == y)
    else:
        aligned_a, aligned_b, _ = align_global(a, b)
        matches = sum(1 for x, y in zip(aligned_a, aligned_b) if x == y and x != "-")
    return 100.0 * matches / max(len(a), len(b))


def _pair_rmsd(a: np.ndarray | None, b: np.ndarray | None) -> float:
    if a is None or b is None or len(a) != len(b):
        return np.inf
    rot, trans = kabsch(a, b)
    diff = a @ rot.T + trans - b
    return float(np.sqrt(np.mean(np.sum(diff**2, axis=1))))


def diversity(
    samples: list[tuple[str, np.ndarray | None]],
    mode: str = "sequence",
    identity_threshold: float = 40.0,
    rmsd_threshold: float = 2.0,
) -> float:
    """Unique clusters / total samples under greedy single-linkage.

    mode="sequence" joins on identity above `identity_threshold`;
    mode="structure" joins on RMSD below `rmsd_threshold`. Samples are
    processed in input order; each joins the first matching cluster.
    """
    if not samples:
        raise ValueError("diversity needs at least one sample")
    if mode not in ("sequence", "structure"):
        raise ValueError(f"unknown diversity mode {mode!r}")
    clusters: list[list[int]] = []
    for i, (seq, coords) in enumerate(samples):
        placed = False
        for members in clusters:
            for j in members:
                other_seq, other_coords = samples[j]
                if mode == "sequence":
                    similar = _pair_identity(seq, other_seq) > identity_threshold
                else:
                    similar = _pair_rmsd(coords, other_coords) < rmsd_threshold
                if similar:
                    members.append(i)
                    placed = True
                    break
            if placed:
                break
        if not placed:
            clusters.append([i])
    return len(clusters) / len(samples)


def mean_ignoring_nan(values: list[float]) -> tuple[float, int]:
    """Mean over non-NaN values and the count of excluded NaNs."""
    arr = np.asarray(values, dtype=float)
    nans = int(np.isnan(arr).sum())
    if nans == arr.size:
        return float("nan"), nans
    return float(np.nanmean(arr)), nans
