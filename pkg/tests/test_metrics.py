import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radiance.metrics import (
    InteractionRecord,
    InteractionSet,
    aar,
    align_global,
    detect_interactions,
    diversity,
    ism,
    ito,
    rmsd_ca,
)
from radiance.metrics.scores import GAP_EXTEND, GAP_OPEN, _blosum
from radiance.molgraph import Atom, Block, MolecularGraph, ROLE_BINDING_SITE, random_rigid, synth_complex
from radiance.vocab import TYPE_INDEX

from conftest import make_residue


def block_with(code, named_coords, chain="A", index=1):
    atoms = [Atom("N" if n.startswith("N") else ("O" if n.startswith("O") else "C"), n, c)
             for n, c in named_coords]
    return Block(block_type=TYPE_INDEX[code], atoms=atoms, chain_id=chain, residue_index=index)


def rec(itype, s, b):
    return InteractionRecord(itype, s, b)


class TestDetectInteractions:
    def test_far_apart_is_empty(self):
        binder = MolecularGraph(blocks=[make_residue("K", [0, 0, 0])])
        site = MolecularGraph(
            blocks=[make_residue("E", [20, 0, 0], chain="B")], role=ROLE_BINDING_SITE
        )
        assert len(detect_interactions(binder, site)) == 0

    def test_lys_glu_salt_bridge(self):
        lys = block_with(
            "K",
            [("N", [-1.4, 0, 0]), ("CA", [0, 0, 0]), ("C", [1.5, 0, 0]),
             ("O", [1.5, 1.2, 0]), ("NZ", [0, 0, 5.0])],
        )
        glu = block_with(
            "E",
            [("N", [8.6, 0, 0]), ("CA", [10, 0, 0]), ("C", [11.5, 0, 0]),
             ("O", [11.5, 1.2, 0]), ("OE1", [0, 0, 8.8])],
            chain="B",
        )
        out = detect_interactions(
            MolecularGraph(blocks=[lys]),
            MolecularGraph(blocks=[glu], role=ROLE_BINDING_SITE),
        )
        assert out.records == [rec("salt_bridge", ("B", 1), ("A", 1))]

    def test_duplicate_contacts_collapse(self):
        arg = block_with(
            "R",
            [("N", [-1.4, 0, 0]), ("CA", [0, 0, 0]), ("C", [1.5, 0, 0]),
             ("O", [1.5, 1.2, 0]),
             ("NE", [0, 0, 5.0]), ("NH1", [0.5, 0, 5.0]), ("NH2", [-0.5, 0, 5.0])],
        )
        asp = block_with(
            "D",
            [("N", [8.6, 0, 0]), ("CA", [10, 0, 0]), ("C", [11.5, 0, 0]),
             ("O", [11.5, 1.2, 0]),
             ("OD1", [0, 0, 7.5]), ("OD2", [0.4, 0, 7.5])],
            chain="B",
        )
        out = detect_interactions(
            MolecularGraph(blocks=[arg]),
            MolecularGraph(blocks=[asp], role=ROLE_BINDING_SITE),
        )
        salt = [r for r in out.records if r.itype == "salt_bridge"]
        assert salt == [rec("salt_bridge", ("B", 1), ("A", 1))]

    def test_hydrogen_bond_rule(self):
        ser = block_with(
            "S",
            [("N", [-1.4, 0, 0]), ("CA", [0, 0, 0]), ("C", [1.5, 0, 0]),
             ("O", [1.5, 1.2, 0]), ("OG", [0, 0, 4.0])],
        )
        asn = block_with(
            "N",
            [("N", [8.6, 0, 0]), ("CA", [10, 0, 0]), ("C", [11.5, 0, 0]),
             ("O", [11.5, 1.2, 0]), ("OD1", [0, 0, 7.2])],
            chain="B",
        )
        out = detect_interactions(
            MolecularGraph(blocks=[ser]),
            MolecularGraph(blocks=[asn], role=ROLE_BINDING_SITE),
        )
        assert out.records == [rec("hydrogen_bond", ("B", 1), ("A", 1))]

    def test_hydrophobic_rule(self):
        leu = block_with("L", [("CA", [0, 0, 0]), ("CD1", [0, 0, 3.0])])
        val = block_with("V", [("CA", [9, 0, 0]), ("CG1", [0, 0, 6.5])], chain="B")
        out = detect_interactions(
            MolecularGraph(blocks=[leu]),
            MolecularGraph(blocks=[val], role=ROLE_BINDING_SITE),
        )
        assert out.records == [rec("hydrophobic", ("B", 1), ("A", 1))]


class TestIsm:
    def test_exact_match(self):
        records = [
            rec("hydrogen_bond", ("B", i), ("A", i)) for i in range(4)
        ]
        s = InteractionSet(records=records)
        assert ism(s, s) == 1.0

    def test_empty_reference_is_nan(self):
        pred = InteractionSet(records=[rec("hydrophobic", ("B", 1), ("A", 1))])
        assert math.isnan(ism(pred, InteractionSet()))

    def test_half_match(self):
        ref = InteractionSet(records=[
            rec("hydrogen_bond", ("A", 10), ("B", 3)),
            rec("hydrophobic", ("A", 12), ("B", 5)),
        ])
        pred = InteractionSet(records=[rec("hydrogen_bond", ("A", 10), ("B", 3))])
        assert ism(pred, ref) == 0.5

    def test_permutation_invariant(self):
        records = [
            rec("hydrogen_bond", ("B", 1), ("A", 2)),
            rec("salt_bridge", ("B", 3), ("A", 4)),
            rec("hydrophobic", ("B", 5), ("A", 6)),
        ]
        ref = InteractionSet(records=records)
        pred = InteractionSet(records=records[::-1])
        assert ism(pred, ref) == 1.0

    def test_multiset_semantics(self):
        r = rec("hydrogen_bond", ("B", 1), ("A", 1))
        ref = InteractionSet(records=[r, r])
        pred = InteractionSet(records=[r])
        assert ism(pred, ref) == 0.5


def make_set(counts):
    records = []
    for t, n in counts.items():
        records.extend(rec(t, ("B", i), ("A", i)) for i in range(n))
    return InteractionSet(records=records)


class TestIto:
    def test_forced_by_formula(self):
        ref = make_set({"hydrogen_bond": 2, "hydrophobic": 1})
        pred = make_set({"hydrogen_bond": 1, "hydrophobic": 2})
        assert ito(pred, ref) == pytest.approx(2 / 3)

    def test_identical_sets(self):
        s = make_set({"hydrogen_bond": 3, "salt_bridge": 2})
        assert ito(s, s) == 1.0

    def test_disjoint_types(self):
        ref = make_set({"hydrogen_bond": 3})
        pred = make_set({"salt_bridge": 5})
        assert ito(pred, ref) == 0.0

    def test_empty_reference_is_nan(self):
        assert math.isnan(ito(make_set({"hydrogen_bond": 1}), InteractionSet()))

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.sampled_from(["hydrogen_bond", "hydrophobic", "salt_bridge"]), max_size=12),
        st.lists(st.sampled_from(["hydrogen_bond", "hydrophobic", "salt_bridge"]), max_size=12),
    )
    def test_matches_brute_force_min_counts(self, ref_types, pred_types):
        ref = InteractionSet(records=[rec(t, ("B", i), ("A", i)) for i, t in enumerate(ref_types)])
        pred = InteractionSet(records=[rec(t, ("B", i), ("A", i)) for i, t in enumerate(pred_types)])
        got = ito(pred, ref)
        if not ref_types:
            assert math.isnan(got)
            return
        # Independent brute force over explicit type lists.
        overlap = 0
        for t in set(ref_types) | set(pred_types):
            overlap += min(ref_types.count(t), pred_types.count(t))
        assert got == pytest.approx(overlap / len(ref_types))
        assert 0.0 <= got <= 1.0


def brute_force_alignment(a, b):
    """Enumerate all monotone matchings with affine gap costs."""
    best = -math.inf
    best_matches = 0
    positions_a = range(len(a))
    positions_b = range(len(b))

    def gap_cost(length):
        return 0.0 if length == 0 else GAP_OPEN + (length - 1) * GAP_EXTEND

    for k in range(min(len(a), len(b)) + 1):
        for sub_a in itertools.combinations(positions_a, k):
            for sub_b in itertools.combinations(positions_b, k):
                score = sum(_blosum(a[i], b[j]) for i, j in zip(sub_a, sub_b))
                # Gap blocks between consecutive matched columns.
                prev_i, prev_j = -1, -1
                for i, j in zip(sub_a + (len(a),), sub_b + (len(b),)):
                    score += gap_cost(i - prev_i - 1) + gap_cost(j - prev_j - 1)
                    prev_i, prev_j = i, j
                if score > best:
                    best = score
                    best_matches = sum(
                        1 for i, j in zip(sub_a, sub_b) if a[i] == b[j]
                    )
    return best, best_matches


class TestAar:
    def test_identical(self):
        assert aar("ACDEFG", "ACDEFG") == 100.0

    def test_positionwise(self):
        assert aar("AAAA", "AAAG") == 75.0

    def test_alignment_case_matches_exhaustive_oracle(self):
        gen, ref = "ACDEF", "ACEF"
        oracle_score, oracle_matches = brute_force_alignment(gen, ref)
        aligned_a, aligned_b, score = align_global(gen, ref)
        assert score == pytest.approx(oracle_score)
        matches = sum(1 for x, y in zip(aligned_a, aligned_b) if x == y and x != "-")
        assert matches == oracle_matches == 4
        assert aar(gen, ref) == pytest.approx(100.0 * 4 / 4)
        assert aar(ref, gen) == pytest.approx(100.0 * 4 / 5)

    def test_not_symmetric_for_unequal_lengths(self):
        assert aar("AC", "ACDE") != aar("ACDE", "AC")

    def test_self_recovery_is_100(self):
        for seq in ("A", "KR", "ACDEFGHIKLMNPQRSTVWY"):
            assert aar(seq, seq) == 100.0

    def test_invalid_symbols(self):
        with pytest.raises(ValueError, match="non-amino-acid"):
            aar("AZB1", "ACDE")

    @settings(max_examples=20, deadline=None)
    @given(
        st.text(alphabet="ACDEFGHIKL", min_size=1, max_size=5),
        st.text(alphabet="ACDEFGHIKL", min_size=1, max_size=5),
    )
    def test_alignment_matches_brute_force(self, a, b):
        oracle_score, _ = brute_force_alignment(a, b)
        _, _, score = align_global(a, b)
        assert score == pytest.approx(oracle_score)


class TestRmsdCa:
    def _site(self):
        blocks = [
            make_residue("G", [0, 10, 0], chain="B", index=1),
            make_residue("G", [4, 10, 0], chain="B", index=2),
            make_residue("G", [0, 14, 3], chain="B", index=3),
        ]
        return MolecularGraph(blocks=blocks, role=ROLE_BINDING_SITE)

    def _binder(self, offset=(0, 0, 0)):
        off = np.asarray(offset, dtype=float)
        blocks = [
            make_residue("A", np.array([0.0, 0, 0]) + off, index=1),
            make_residue("V", np.array([4.0, 0, 0]) + off, index=2),
        ]
        return MolecularGraph(blocks=blocks)

    def test_identical_is_zero(self):
        assert rmsd_ca(self._binder(), self._binder(), self._site(), self._site()) == pytest.approx(0.0)

    def test_unit_translation_survives_site_alignment(self):
        got = rmsd_ca(self._binder((1, 0, 0)), self._binder(), self._site(), self._site())
        assert got == pytest.approx(1.0)

    def test_global_rotation_removed(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            t = random_rigid(rng)
            gen = self._binder().transformed(t)
            site_gen = self._site().transformed(t)
            got = rmsd_ca(gen, self._binder(), site_gen, self._site())
            assert got == pytest.approx(0.0, abs=1e-9)

    def test_length_mismatch(self):
        short = MolecularGraph(blocks=[make_residue("A", [0, 0, 0])])
        with pytest.raises(ValueError, match="lengths differ"):
            rmsd_ca(short, self._binder(), self._site(), self._site())


class TestDiversity:
    def test_all_identical(self):
        samples = [("ACDEF", None)] * 10
        assert diversity(samples) == pytest.approx(0.1)

    def test_all_dissimilar(self):
        seqs = ["AAAA", "CCCC", "DDDD", "EEEE"]
        assert diversity([(s, None) for s in seqs]) == 1.0

    def test_six_clusters_of_100(self):
        bases = ["AAAAAAAAAA", "CCCCCCCCCC", "DDDDDDDDDD",
                 "EEEEEEEEEE", "FFFFFFFFFF", "GGGGGGGGGG"]
        samples = []
        for i in range(100):
            base = bases[i % 6]
            # One mutation keeps identity at 90% (> 40%), within cluster.
            mutated = base[:3] + "KLMNPQRSTV"[i % 10] + base[4:]
            samples.append((mutated, None))
        ratio = diversity(samples)
        assert ratio == pytest.approx(0.06)
        assert abs(ratio - 0.0593) <= 0.01

    def test_structure_mode(self):
        rng = np.random.default_rng(0)
        coords_a = rng.normal(size=(5, 3))
        coords_b = coords_a + 50.0  # rigid shift: RMSD 0 after superposition
        coords_c = rng.normal(size=(5, 3)) * 10
        samples = [("AAAAA", coords_a), ("CCCCC", coords_b), ("DDDDD", coords_c)]
        assert diversity(samples, mode="structure") == pytest.approx(2 / 3)

    def test_bounds(self):
        rng = np.random.default_rng(1)
        seqs = ["".join(rng.choice(list("ACDEFGHIKL"), size=8)) for _ in range(12)]
        ratio = diversity([(s, None) for s in seqs])
        assert 1 / 12 <= ratio <= 1.0
