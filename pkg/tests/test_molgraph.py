import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radiance.molgraph import (
    ComplexRecord,
    MissingChainError,
    MolecularGraph,
    PdbError,
    ROLE_BINDING_SITE,
    build_block_graph,
    consecutive_ca_distances,
    extract_binding_site,
    knn_edges,
    load_record,
    parse_pdb,
    random_rigid,
    record_from_dict,
    record_to_dict,
    save_record,
    synth_complex,
    synth_dataset,
    write_pdb,
)
from radiance.molgraph.graphs import SiteExtractionError
from radiance.vocab import TYPE_INDEX, UNK_INDEX

from conftest import make_graph, make_residue


def records_equal(a: ComplexRecord, b: ComplexRecord) -> bool:
    if (a.id, a.domain_tag) != (b.id, b.domain_tag):
        return False
    for ga, gb in ((a.binder, b.binder), (a.site, b.site)):
        if ga.role != gb.role or len(ga) != len(gb) or ga.edges != gb.edges:
            return False
        for ba, bb in zip(ga.blocks, gb.blocks):
            if (ba.block_type, ba.chain_id, ba.residue_index, ba.insertion_code) != (
                bb.block_type,
                bb.chain_id,
                bb.residue_index,
                bb.insertion_code,
            ):
                return False
            if len(ba.atoms) != len(bb.atoms):
                return False
            for aa, ab in zip(ba.atoms, bb.atoms):
                if aa.name != ab.name or aa.element != ab.element:
                    return False
                if not np.array_equal(aa.coord, ab.coord):
                    return False
    return True


GLY_ALA_PDB = """\
ATOM      1  N   GLY A   1       0.000   0.000   0.000  1.00  0.00           N
ATOM      2  CA  GLY A   1       1.458   0.000   0.000  1.00  0.00           C
ATOM      3  C   GLY A   1       2.009   1.420   0.000  1.00  0.00           C
ATOM      4  O   GLY A   1       1.251   2.390   0.000  1.00  0.00           O
ATOM      5  N   ALA B   1       5.000   0.000   0.000  1.00  0.00           N
ATOM      6  CA  ALA B   1       6.458   0.000   0.000  1.00  0.00           C
ATOM      7  C   ALA B   1       7.009   1.420   0.000  1.00  0.00           C
ATOM      8  O   ALA B   1       6.251   2.390   0.000  1.00  0.00           O
ATOM      9  CB  ALA B   1       6.950  -0.800  -1.200  1.00  0.00           C
END
"""


class TestParsePdb:
    def test_binder_residue_count_preserved(self, tmp_path):
        rec = synth_complex(seed=3, binder_len=12, site_len=15)
        path = tmp_path / "toy.pdb"
        write_pdb(path, [rec.binder, rec.site])
        parsed = parse_pdb(path, binder_chains={"A"}, target_chains={"B"})
        assert len(parsed.binder) == 12
        assert len(parsed.site) == 15

    def test_no_atoms_is_an_error(self, tmp_path):
        path = tmp_path / "empty.pdb"
        path.write_text("HEADER    EMPTY\nEND\n")
        with pytest.raises(PdbError, match="no atoms parsed"):
            parse_pdb(path, {"A"}, {"B"})

    def test_glycine_cbeta_proxy_is_ca(self, tmp_path):
        path = tmp_path / "gly.pdb"
        path.write_text(GLY_ALA_PDB)
        rec = parse_pdb(path, {"A"}, {"B"})
        gly = rec.binder.blocks[0]
        assert gly.type_code == "G"
        assert np.allclose(gly.cbeta_proxy(), gly.atom("CA").coord)
        ala = rec.site.blocks[0]
        assert np.allclose(ala.cbeta_proxy(), ala.atom("CB").coord)

    def test_missing_chain_names_the_chain(self, tmp_path):
        path = tmp_path / "gly.pdb"
        path.write_text(GLY_ALA_PDB)
        with pytest.raises(MissingChainError, match="'Q'"):
            parse_pdb(path, {"A"}, {"Q"})

    def test_bad_atom_record_reports_line_number(self, tmp_path):
        broken = GLY_ALA_PDB.replace(
            "ATOM      3  C   GLY A   1       2.009   1.420   0.000",
            "ATOM      3  C   GLY A   1       2.009   xxxxx   0.000",
        )
        path = tmp_path / "bad.pdb"
        path.write_text(broken)
        with pytest.raises(PdbError, match="line 3"):
            parse_pdb(path, {"A"}, {"B"})

    def test_altloc_highest_occupancy_wins(self, tmp_path):
        text = (
            "ATOM      1  CA AALA A   1       0.000   0.000   0.000  0.40  0.00           C\n"
            "ATOM      2  CA BALA A   1       9.000   0.000   0.000  0.60  0.00           C\n"
            "ATOM      3  CA  GLY B   1       1.000   0.000   0.000  1.00  0.00           C\n"
            "END\n"
        )
        path = tmp_path / "alt.pdb"
        path.write_text(text)
        rec = parse_pdb(path, {"A"}, {"B"})
        assert rec.binder.blocks[0].atom("CA").coord[0] == pytest.approx(9.0)

    def test_unknown_residue_maps_to_unk(self, tmp_path):
        text = GLY_ALA_PDB.replace("GLY", "XYZ")
        path = tmp_path / "unk.pdb"
        path.write_text(text)
        rec = parse_pdb(path, {"A"}, {"B"})
        assert rec.binder.blocks[0].block_type == UNK_INDEX

    def test_json_round_trip(self, tmp_path):
        rec = synth_complex(seed=11, binder_len=6, site_len=10)
        path = tmp_path / "rec.json"
        save_record(rec, path)
        again = load_record(path)
        assert records_equal(rec, again)
        # Second round trip is exact as well.
        assert records_equal(record_from_dict(record_to_dict(again)), again)


class TestExtractBindingSite:
    def _one_residue_binder(self):
        return MolecularGraph(
            blocks=[make_residue("A", ca=[0, 0, 0], cb=[0, 0, 0])], role="binder"
        )

    def _site_with_cb_at(self, xs):
        blocks = [
            make_residue("V", ca=[x, 0.5, 0], chain="B", index=i + 1, cb=[x, 0, 0])
            for i, x in enumerate(xs)
        ]
        return MolecularGraph(blocks=blocks, role=ROLE_BINDING_SITE)

    def test_inclusive_cutoff_boundaries(self):
        rec = ComplexRecord(
            id="t",
            binder=self._one_residue_binder(),
            site=self._site_with_cb_at([9.9, 10.1]),
        )
        site = extract_binding_site(rec, cutoff=10.0)
        assert [b.residue_index for b in site.blocks] == [1]

    def test_three_distances_brute_force(self):
        rec = ComplexRecord(
            id="t",
            binder=self._one_residue_binder(),
            site=self._site_with_cb_at([8.0, 10.0, 12.0]),
        )
        site = extract_binding_site(rec, cutoff=10.0)
        assert len(site) == 2
        # Brute-force oracle over all CB pairs.
        binder_cb = rec.binder.blocks[0].cbeta_proxy()
        expected = [
            b.residue_index
            for b in rec.site.blocks
            if np.linalg.norm(b.cbeta_proxy() - binder_cb) <= 10.0
        ]
        assert [b.residue_index for b in site.blocks] == expected

    def test_empty_result_raises(self):
        rec = ComplexRecord(
            id="t",
            binder=self._one_residue_binder(),
            site=self._site_with_cb_at([50.0]),
        )
        with pytest.raises(SiteExtractionError, match="no contact residues"):
            extract_binding_site(rec)

    def test_rigid_invariance(self, toy_complex):
        base = {b.residue_index for b in extract_binding_site(toy_complex).blocks}
        rng = np.random.default_rng(0)
        for _ in range(5):
            t = random_rigid(rng)
            moved = ComplexRecord(
                id=toy_complex.id,
                binder=toy_complex.binder.transformed(t),
                site=toy_complex.site.transformed(t),
            )
            moved_idx = {b.residue_index for b in extract_binding_site(moved).blocks}
            assert moved_idx == base


class TestBuildBlockGraph:
    def test_small_graph_is_complete(self):
        g = make_graph(
            [make_residue("A", [0, 0, 0]), make_residue("V", [4, 0, 0]), make_residue("L", [8, 0, 0])],
            k=9,
        )
        assert set(g.edges) == {(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)}

    def test_collinear_chain_matches_brute_force(self):
        blocks = [make_residue("A", [4.0 * i, 0, 0], index=i + 1) for i in range(5)]
        g = make_graph(blocks, k=2)
        centers = np.stack([b.center() for b in blocks])
        # Independent brute-force kNN oracle.
        expected = set()
        for i in range(5):
            d = np.linalg.norm(centers - centers[i], axis=1)
            d[i] = np.inf
            for j in np.argsort(d, kind="stable")[:2]:
                expected.add((i, int(j)))
                expected.add((int(j), i))
        assert set(g.edges) == expected
        assert set(g.edges) == {
            (0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1),
            (2, 3), (3, 2), (2, 4), (4, 2), (3, 4), (4, 3),
        }

    def test_single_block_has_no_edges(self):
        g = make_graph([make_residue("A", [0, 0, 0])], k=9)
        assert g.edges == []

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.floats(-50, 50, allow_nan=False),
                st.floats(-50, 50, allow_nan=False),
                st.floats(-50, 50, allow_nan=False),
            ),
            min_size=1,
            max_size=12,
        ),
        st.integers(min_value=1, max_value=10),
    )
    def test_knn_symmetric_no_self_edges(self, points, k):
        edges = knn_edges(np.asarray(points), k)
        s = set(edges)
        assert all(i != j for i, j in s)
        assert all((j, i) in s for i, j in s)


class TestSynthComplex:
    def test_deterministic(self):
        a = synth_complex(seed=7, binder_len=8, site_len=20)
        b = synth_complex(seed=7, binder_len=8, site_len=20)
        assert records_equal(a, b)

    def test_different_seeds_differ(self):
        a = synth_complex(seed=1, binder_len=8, site_len=20)
        b = synth_complex(seed=2, binder_len=8, site_len=20)
        assert not records_equal(a, b)

    def test_always_extractable(self):
        for seed in range(20):
            rec = synth_complex(seed=seed, binder_len=6, site_len=15)
            site = extract_binding_site(rec)
            assert len(site) >= 1

    def test_ca_spacing_over_seeds(self):
        for seed in range(100):
            rec = synth_complex(seed=seed, binder_len=8, site_len=12)
            for graph in (rec.binder, rec.site):
                d = consecutive_ca_distances(graph)
                assert d.size > 0
                assert np.all(d >= 3.6) and np.all(d <= 4.0)

    def test_dataset_families_share_types(self):
        ds = synth_dataset(12, seed=5, family_size=3)
        assert len(ds) == 12
        assert len({r.id for r in ds}) == 12
        fam = [r for r in ds if r.id.startswith("toy-0000")]
        assert len(fam) == 3
        seqs = {r.binder.sequence() for r in fam}
        assert len(seqs) == 1
