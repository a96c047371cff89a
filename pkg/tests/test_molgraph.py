"""Parser, valence, aromaticity, and canonicalization tests."""

import random

import pytest

from helpers import random_molecule
from leadopt.errors import (
    AromaticityError,
    SmilesError,
    SmilesSyntaxError,
    ValenceError,
)
from leadopt.molgraph import (
    AROMATIC,
    canonical_smiles,
    molecular_formula,
    parse_smiles,
    to_canonical,
    write_smiles,
)


class TestParser:
    def test_methane(self):
        mol = parse_smiles("C")
        assert len(mol.atoms) == 1
        assert len(mol.bonds) == 0
        assert mol.atoms[0].implicit_h_count == 4

    def test_unclosed_branch_offset(self):
        with pytest.raises(SmilesSyntaxError) as exc:
            parse_smiles("C(")
        assert exc.value.offset == 1

    def test_benzene_perception(self):
        mol = parse_smiles("c1ccccc1")
        assert len(mol.atoms) == 6
        assert all(a.is_aromatic for a in mol.atoms)
        assert all(b.order == AROMATIC for b in mol.bonds)
        assert len(mol.rings) == 1
        assert len(mol.rings[0]) == 6
        assert [a.implicit_h_count for a in mol.atoms] == [1] * 6

    def test_empty_input(self):
        with pytest.raises(SmilesSyntaxError):
            parse_smiles("")

    @pytest.mark.parametrize("bad,offset", [
        ("C)", 1),
        ("CC(", 2),
        ("C1CC", 1),
        ("C==C", 2),
        ("=C", 0),
        ("C.", 1),
        ("[C", 0),
        ("[]", 0),
        ("C%1C", 1),
    ])
    def test_syntax_errors_carry_offsets(self, bad, offset):
        with pytest.raises(SmilesSyntaxError) as exc:
            parse_smiles(bad)
        assert exc.value.offset == offset

    @pytest.mark.parametrize("bad", [
        "C(C)(C)(C)(C)C",   # pentavalent carbon
        "O(C)(C)C",         # trivalent oxygen
        "N(=O)=O",          # uncharged pentavalent nitrogen
        "[CH5+]",
        "FF(F)F",
    ])
    def test_valence_errors(self, bad):
        with pytest.raises(ValenceError):
            parse_smiles(bad)

    @pytest.mark.parametrize("bad", [
        "cc",        # aromatic atoms outside a ring
        "c1ccc1",    # 4 pi electrons
        "c1ccnc1",   # bare n in a five-ring needs [nH]
        "C:C",       # aromatic bond between aliphatic atoms
    ])
    def test_aromaticity_errors(self, bad):
        with pytest.raises(AromaticityError):
            parse_smiles(bad)

    def test_charged_atoms(self):
        mol = parse_smiles("[NH4+]")
        assert mol.atoms[0].formal_charge == 1
        assert mol.atoms[0].implicit_h_count == 4
        anion = parse_smiles("CC(=O)[O-]")
        assert anion.atoms[-1].formal_charge == -1

    def test_multi_fragment_accepted(self):
        mol = parse_smiles("[Na+].[Cl-]")
        assert mol.fragment_count == 2

    def test_percent_ring_closure(self):
        mol = parse_smiles("C%12CCCCC%12")
        assert len(mol.rings) == 1

    def test_stereo_markers_preserved_as_annotations(self):
        mol = parse_smiles("C[C@H](N)O")
        assert mol.atoms[1].stereo == "@"
        updown = parse_smiles("C/C=C/C")
        assert any(b.stereo for b in updown.bonds)

    def test_ring_bond_order_conflict(self):
        with pytest.raises(SmilesSyntaxError):
            parse_smiles("C=1CCCCC-1")

    def test_explicit_ring_bond_order(self):
        mol = parse_smiles("C=1CCCCC=1")
        orders = sorted(b.order for b in mol.bonds)
        assert orders == [1, 1, 1, 1, 1, 2]


class TestAromaticity:
    def test_kekule_benzene_promoted(self):
        mol = parse_smiles("C1=CC=CC=C1")
        assert all(a.is_aromatic for a in mol.atoms)

    def test_pyrrole_lone_pair(self):
        mol = parse_smiles("c1cc[nH]c1")
        n = next(a for a in mol.atoms if a.element == "N")
        assert n.pi_electrons == 2
        assert n.implicit_h_count == 1

    def test_pyridine_type_nitrogen(self):
        mol = parse_smiles("c1ccncc1")
        n = next(a for a in mol.atoms if a.element == "N")
        assert n.pi_electrons == 1
        assert n.implicit_h_count == 0

    def test_cyclohexane_not_promoted(self):
        mol = parse_smiles("C1CCCCC1")
        assert not any(a.is_aromatic for a in mol.atoms)

    def test_quinone_ring_not_aromatic(self):
        mol = parse_smiles("O=C1C=CC(=O)C=C1")
        assert not any(a.is_aromatic for a in mol.atoms)

    def test_every_aromatic_atom_in_ring(self):
        for smi in ["c1ccccc1", "Cc1ccc(O)cc1", "c1ccc2ccccc2c1", "c1cnc[nH]1"]:
            mol = parse_smiles(smi)
            ring_atoms = {i for ring in mol.rings for i in ring}
            for atom in mol.atoms:
                if atom.is_aromatic:
                    assert atom.index in ring_atoms


class TestCanonical:
    def test_atom_order_independent(self):
        assert canonical_smiles("OCC") == canonical_smiles("CCO")

    def test_idempotent(self):
        for smi in ["CC(=O)Oc1ccccc1C(=O)O", "CCO", "c1ccc2ccccc2c1", "CC(C)(C)c1ccccc1"]:
            once = canonical_smiles(smi)
            assert canonical_smiles(once) == once

    def test_kekule_and_aromatic_agree(self):
        assert canonical_smiles("c1ccccc1") == canonical_smiles("C1=CC=CC=C1")
        assert canonical_smiles("c1cc[nH]c1") == canonical_smiles("C1=CC=CN1")
        assert canonical_smiles("c1ccc2ccccc2c1") == canonical_smiles("C1=CC2=CC=CC=C2C=C1")

    def test_stereo_dropped_from_canonical_form(self):
        assert canonical_smiles("C[C@H](N)O") == canonical_smiles("C[C@@H](N)O")

    def test_round_trip_is_graph_preserving(self):
        rng = random.Random(7)
        for _ in range(100):
            mol, smi = random_molecule(rng)
            canon = to_canonical(mol)
            assert to_canonical(parse_smiles(canon)) == canon
            assert molecular_formula(parse_smiles(canon)) == molecular_formula(mol)

    def test_random_permutations_identical(self):
        rng = random.Random(11)
        for _ in range(40):
            mol, _ = random_molecule(rng)
            base = to_canonical(mol)
            for _ in range(5):
                perm = list(range(len(mol.atoms)))
                rng.shuffle(perm)
                rewritten = write_smiles(mol, perm)
                assert canonical_smiles(rewritten) == base

    def test_biphenyl_single_bond_preserved(self):
        canon = canonical_smiles("c1ccc(cc1)-c1ccccc1")
        mol = parse_smiles(canon)
        assert len(mol.rings) == 2
        single = [b for b in mol.bonds if b.order == 1]
        assert len(single) == 1


class TestFormula:
    @pytest.mark.parametrize("smi,formula", [
        ("C", "CH4"),
        ("O", "H2O"),
        ("CC(=O)Oc1ccccc1C(=O)O", "C9H8O4"),
        ("c1ccccc1", "C6H6"),
        ("[NH4+]", "H4N"),
        ("ClCCl", "CH2Cl2"),
    ])
    def test_hill_order(self, smi, formula):
        assert molecular_formula(parse_smiles(smi)) == formula


class TestFuzz:
    def test_parser_never_panics(self):
        rng = random.Random(1234)
        alphabet = "CNOPSFIclnops()[]=#-+123456789%@/\\.BrH "
        for _ in range(2000):
            length = rng.randint(1, 40)
            text = "".join(rng.choice(alphabet) for _ in range(length))
            try:
                parse_smiles(text)
            except SmilesError:
                pass

    def test_parser_handles_arbitrary_bytes(self):
        rng = random.Random(99)
        for _ in range(1000):
            raw = bytes(rng.randrange(256) for _ in range(rng.randint(1, 30)))
            text = raw.decode("latin-1")
            try:
                parse_smiles(text)
            except SmilesError:
                pass
