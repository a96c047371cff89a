"""Crippen-style logP from atomic contributions.

Atom typing reduces the published SMARTS classes to decisions over local
graph features (element, aromaticity, hydrogen count, bond orders, neighbour
elements). Heavy atoms without a type raise rather than contributing zero:
logP feeds hard range conditions downstream, so silent gaps would corrupt
filtering.
"""

from __future__ import annotations

from pathlib import Path

from leadopt.errors import UnclassifiableAtomError
from leadopt.molgraph import AROMATIC, DOUBLE, TRIPLE, MolGraph
from leadopt.molgraph.graph import Atom
from leadopt.properties.tables import crippen_contributions

_HETERO = frozenset({"N", "O", "P", "S", "F", "Cl", "Br", "I"})
_AROMATIC_SUBSTITUENT_CODE = {
    "C": "C21", "N": "C22", "O": "C23", "S": "C24",
    "F": "C14", "Cl": "C15", "Br": "C16", "I": "C17",
}


def _bond_orders(mol: MolGraph, idx: int) -> list[int]:
    return [mol.bonds[b].order for _, b in mol.adjacency[idx]]


def _neighbor_atoms(mol: MolGraph, idx: int) -> list[Atom]:
    return [mol.atoms[n] for n, _ in mol.adjacency[idx]]


def _carbon_type(mol: MolGraph, atom: Atom) -> str:
    idx = atom.index
    orders = _bond_orders(mol, idx)
    nbrs = _neighbor_atoms(mol, idx)
    h = atom.implicit_h_count

    if atom.is_aromatic:
        if h >= 1:
            return "C18"
        if DOUBLE in orders:
            return "C25"
        subs = [
            n for n, (_, b) in zip(nbrs, mol.adjacency[idx])
            if mol.bonds[b].order != AROMATIC
        ]
        if not subs:
            return "C19"
        sub = subs[0]
        if sub.is_aromatic:
            return "C20"
        return _AROMATIC_SUBSTITUENT_CODE.get(sub.element, "C13")

    if TRIPLE in orders:
        return "C7"
    if DOUBLE in orders:
        partners = [
            mol.atoms[n] for n, b in mol.adjacency[idx]
            if mol.bonds[b].order == DOUBLE
        ]
        if any(p.element != "C" for p in partners):
            return "C5"
        if any(n.is_aromatic for n in nbrs):
            return "C26"
        return "C6"

    if any(n.element in _HETERO for n in nbrs):
        return "C3" if h >= 2 else "C4"
    if any(n.is_aromatic for n in nbrs):
        if h == 3:
            aromatic_nbr = next(n for n in nbrs if n.is_aromatic)
            return "C8" if aromatic_nbr.element == "C" else "C9"
        return {2: "C10", 1: "C11", 0: "C12"}[h]
    return "C1" if h >= 2 else "C2"


def _nitrogen_type(mol: MolGraph, atom: Atom) -> str:
    orders = _bond_orders(mol, atom.index)
    nbrs = _neighbor_atoms(mol, atom.index)
    h = atom.implicit_h_count

    if atom.is_aromatic:
        return "N12" if atom.formal_charge > 0 else "N11"
    if atom.formal_charge > 0:
        if DOUBLE in orders or TRIPLE in orders:
            return "N14"
        return "N10" if h >= 1 else "N13"
    if atom.formal_charge < 0:
        return "NS"
    if TRIPLE in orders:
        return "N9"
    if DOUBLE in orders:
        return "N5" if h >= 1 else "N6"
    aromatic_nbr = any(n.is_aromatic for n in nbrs)
    if h >= 2:
        return "N3" if aromatic_nbr else "N1"
    if h == 1:
        return "N4" if aromatic_nbr else "N2"
    return "N8" if aromatic_nbr else "N7"


def _oxygen_type(mol: MolGraph, atom: Atom) -> str:
    orders = _bond_orders(mol, atom.index)
    if atom.is_aromatic:
        return "O1"
    if atom.formal_charge < 0:
        return "O6"
    if DOUBLE in orders:
        return "O5"
    if atom.implicit_h_count >= 1:
        return "O2"
    nbrs = _neighbor_atoms(mol, atom.index)
    if len(nbrs) == 2:
        return "O4" if any(n.is_aromatic for n in nbrs) else "O3"
    return "OS"


def _classify(mol: MolGraph, atom: Atom) -> str:
    el = atom.element
    if el == "C":
        return _carbon_type(mol, atom)
    if el == "N":
        return _nitrogen_type(mol, atom)
    if el == "O":
        return _oxygen_type(mol, atom)
    if el == "S":
        if atom.is_aromatic:
            return "S3"
        orders = _bond_orders(mol, atom.index)
        bos = sum(1 if o == AROMATIC else o for o in orders)
        if atom.formal_charge != 0 or bos + atom.implicit_h_count > 2:
            return "S2"
        return "S1"
    if el == "P":
        return "P"
    if el in ("F", "Cl", "Br", "I"):
        return el if atom.formal_charge == 0 else "Hal"
    raise UnclassifiableAtomError(
        f"no logP contribution class for atom '{el}' (index {atom.index})"
    )


def _hydrogen_code(mol: MolGraph, atom: Atom) -> str:
    """Contribution code for hydrogens attached to this heavy atom."""
    el = atom.element
    if el == "C":
        return "H1"
    if el == "N":
        return "H3"
    if el == "O":
        # Acid O-H when the other neighbour is a carbon carrying C=O.
        for nbr, _ in mol.adjacency[atom.index]:
            partner = mol.atoms[nbr]
            if partner.element != "C":
                continue
            for nn, bb in mol.adjacency[nbr]:
                if mol.bonds[bb].order == DOUBLE and mol.atoms[nn].element == "O":
                    return "H4"
        return "H2"
    return "HS"


def classify_atoms(mol: MolGraph) -> list[str]:
    """Per-atom type codes (diagnostic surface used by tests)."""
    return [_classify(mol, atom) for atom in mol.atoms]


def crippen_logp(mol: MolGraph, table_path: str | Path | None = None) -> float:
    """Sum of atomic contributions, hydrogens included."""
    table = crippen_contributions(table_path)
    total = 0.0
    for atom in mol.atoms:
        total += table[_classify(mol, atom)]
        if atom.implicit_h_count:
            total += atom.implicit_h_count * table[_hydrogen_code(mol, atom)]
    return total
