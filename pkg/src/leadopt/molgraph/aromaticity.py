"""Aromaticity perception and validation.

The model is deliberately small: Hückel 4n+2 counted per simple perceived
ring over sp2-capable atoms. Lowercase (aromatic) input is validated against
the same electron count; Kekulé input is promoted to aromatic form when a
ring passes. Fused systems are handled ring by ring, so perimeter-only
aromatics (azulene-like) and bridgehead-nitrogen systems are rejected — an
accepted limitation for this drug-like problem domain.

Electron contributions follow the usual conventions: an atom in a ring
double bond donates one electron, lone-pair heteroatoms (pyrrole N, furan O,
thiophene S) donate two, exocyclic doubles donate none, and a bare aromatic
nitrogen is always read as pyridine-type (pyrrole requires [nH]).
"""

from __future__ import annotations

from leadopt.errors import AromaticityError
from leadopt.molgraph.elements import allowed_valences
from leadopt.molgraph.graph import AROMATIC, DOUBLE, TRIPLE, Atom, MolGraph
from leadopt.molgraph.rings import atoms_in_rings


def _conn(mol: MolGraph, atom: Atom) -> int:
    """Heavy degree plus bracket-specified hydrogens (bare atoms count 0).

    Bare aromatic atoms never get assumed hydrogens here: that is what makes
    a bare 'n' pyridine-type while pyrrole requires an explicit [nH].
    """
    h = atom.explicit_h if atom.bracket and atom.explicit_h is not None else 0
    return mol.heavy_degree(atom.index) + h


def _conn_kekule(mol: MolGraph, atom: Atom) -> int:
    """Connection count for explicit-bond input, including the hydrogens a
    bare atom will receive once implicit hydrogens are assigned."""
    if atom.bracket:
        return mol.heavy_degree(atom.index) + (atom.explicit_h or 0)
    bos = 0
    for _, bidx in mol.adjacency[atom.index]:
        order = mol.bonds[bidx].order
        bos += 1 if order == AROMATIC else order
    fits = [v for v in allowed_valences(atom.element, 0) if v >= bos]
    h = (fits[0] - bos) if fits else 0
    return mol.heavy_degree(atom.index) + h


def _lone_pair_contribution(mol: MolGraph, atom: Atom) -> int | None:
    """Pi electrons donated by an atom with no multiple bonds, or None."""
    el, q = atom.element, atom.formal_charge
    conn = _conn_kekule(mol, atom)
    if el == "C":
        if q == -1:
            return 2
        if q == 1:
            return 0
        return None
    if el in ("N", "P"):
        if q == 0 and conn == 3:
            return 2
        if q == -1 and conn == 2:
            return 2
        return None
    if el in ("O", "S"):
        if q == 0 and conn == 2:
            return 2
        if q == 1 and conn == 2:
            return 1
        return None
    if el == "B" and q == 0 and conn == 3:
        return 0
    return None


def _aromatic_input_contribution(mol: MolGraph, atom: Atom) -> int | None:
    """Pi electrons for an atom written in lowercase aromatic form."""
    el, q = atom.element, atom.formal_charge
    exo_double = any(
        mol.bonds[bidx].order == DOUBLE
        for _, bidx in mol.adjacency[atom.index]
    )
    conn = _conn(mol, atom)
    if el == "C":
        if exo_double:
            return 0
        if q == -1:
            return 2
        if q == 1:
            return 0
        return 1
    if el in ("N", "P"):
        if exo_double:
            return 1
        if q == 0:
            return 1 if conn == 2 else (2 if conn == 3 else None)
        if q == 1:
            return 1 if conn in (2, 3) else None
        if q == -1 and conn == 2:
            return 2
        return None
    if el in ("O", "S"):
        if q == 0 and conn == 2:
            return 2
        if q == 0 and exo_double:
            return 2
        if q == 1 and conn == 2:
            return 1
        return None
    if el == "B":
        return 0
    return None


def _kekule_contribution(mol: MolGraph, atom: Atom, ring_atoms: set[int]) -> int | None:
    """Pi electrons for an atom with explicit bond orders."""
    has_aromatic = False
    for nbr, bidx in mol.adjacency[atom.index]:
        order = mol.bonds[bidx].order
        if order == TRIPLE:
            return None
        if order == DOUBLE:
            return 1 if nbr in ring_atoms else 0
        if order == AROMATIC:
            has_aromatic = True
    if has_aromatic:
        return atom.pi_electrons if atom.is_aromatic else 1
    return _lone_pair_contribution(mol, atom)


def _is_huckel(pi_total: int) -> bool:
    return pi_total >= 6 and (pi_total - 2) % 4 == 0


def perceive_aromaticity(mol: MolGraph) -> None:
    """Validate aromatic input and promote Kekulé rings, in place.

    Raises AromaticityError when lowercase atoms sit outside rings, when an
    aromatic bond joins non-aromatic atoms, or when a fully lowercase ring
    fails the electron count.
    """
    ring_atoms = atoms_in_rings(mol)
    flagged = [a for a in mol.atoms if a.is_aromatic]

    for atom in flagged:
        if atom.index not in ring_atoms:
            raise AromaticityError(
                f"aromatic atom '{atom.element.lower()}' outside any ring",
                offset=atom.offset,
            )
    for bond in mol.bonds:
        if bond.order == AROMATIC:
            if not (mol.atoms[bond.a].is_aromatic and mol.atoms[bond.b].is_aromatic):
                raise AromaticityError(
                    "aromatic bond between non-aromatic atoms",
                    offset=mol.atoms[bond.a].offset,
                )

    # Validate lowercase rings and record per-atom donor counts.
    for atom in flagged:
        pi = _aromatic_input_contribution(mol, atom)
        if pi is None:
            raise AromaticityError(
                f"atom '{atom.element}' cannot take part in an aromatic ring",
                offset=atom.offset,
            )
        atom.pi_electrons = pi

    fully_flagged = [
        ring for ring in mol.rings
        if all(mol.atoms[i].is_aromatic for i in ring)
    ]
    for ring in fully_flagged:
        total = sum(mol.atoms[i].pi_electrons for i in ring)
        if not _is_huckel(total):
            raise AromaticityError(
                f"aromatic ring has {total} pi electrons (needs 4n+2)",
                offset=mol.atoms[ring[0]].offset,
            )
    covered = {i for ring in fully_flagged for i in ring}
    for atom in flagged:
        if atom.index not in covered:
            raise AromaticityError(
                f"aromatic atom '{atom.element.lower()}' lies on no fully "
                "aromatic ring",
                offset=atom.offset,
            )

    # Promote Kekulé rings. Repeat until stable so fused systems promote
    # regardless of ring order.
    changed = True
    while changed:
        changed = False
        for ring in sorted(mol.rings, key=len):
            if all(mol.atoms[i].is_aromatic for i in ring):
                continue
            contribs = [
                _kekule_contribution(mol, mol.atoms[i], ring_atoms) for i in ring
            ]
            if any(c is None for c in contribs):
                continue
            if not _is_huckel(sum(c for c in contribs if c is not None)):
                continue
            n = len(ring)
            for pos, i in enumerate(ring):
                atom = mol.atoms[i]
                atom.is_aromatic = True
                atom.pi_electrons = contribs[pos] or 0
                bond = mol.bond_between(i, ring[(pos + 1) % n])
                assert bond is not None
                bond.order = AROMATIC
            changed = True
