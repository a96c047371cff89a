"""The registered descriptor vector (schema leadopt-desc-v1).

Eleven descriptors, all computable from the molecular graph: weight, logP,
tPSA, heavy atoms, rings, aromatic rings, heteroatoms, H-bond donors and
acceptors, rotatable bonds, and the fraction of sp3 carbons. Donor/acceptor
and rotatable-bond definitions are the simple Lipinski-style counts: donors
are N/O bearing at least one hydrogen, acceptors are all N/O, rotatable
bonds are non-ring single bonds between two non-terminal heavy atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leadopt.errors import MultiFragmentError
from leadopt.molgraph import AROMATIC, DOUBLE, SINGLE, TRIPLE, MolGraph
from leadopt.properties import crippen_logp, ertl_tpsa, molecular_weight

SCHEMA_ID = "leadopt-desc-v1"

DESCRIPTOR_NAMES = (
    "molecular_weight",
    "logp",
    "tpsa",
    "heavy_atom_count",
    "ring_count",
    "aromatic_ring_count",
    "heteroatom_count",
    "hbd_count",
    "hba_count",
    "rotatable_bond_count",
    "fraction_csp3",
)


@dataclass(frozen=True)
class DescriptorVector:
    values: tuple[float, ...]
    schema_id: str = SCHEMA_ID

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def __getitem__(self, name: str) -> float:
        return self.values[DESCRIPTOR_NAMES.index(name)]


def _ring_bond_indices(mol: MolGraph) -> set[int]:
    out = set()
    for ring in mol.rings:
        n = len(ring)
        for i in range(n):
            bond = mol.bond_between(ring[i], ring[(i + 1) % n])
            if bond is not None:
                for nbr, bidx in mol.adjacency[ring[i]]:
                    if nbr == ring[(i + 1) % n]:
                        out.add(bidx)
                        break
    return out


def _rotatable_bonds(mol: MolGraph) -> int:
    ring_bonds = _ring_bond_indices(mol)
    count = 0
    for bidx, bond in enumerate(mol.bonds):
        if bond.order != SINGLE or bidx in ring_bonds:
            continue
        if mol.heavy_degree(bond.a) >= 2 and mol.heavy_degree(bond.b) >= 2:
            count += 1
    return count


def _fraction_csp3(mol: MolGraph) -> float:
    carbons = [a for a in mol.atoms if a.element == "C"]
    if not carbons:
        return 0.0
    sp3 = 0
    for atom in carbons:
        orders = {mol.bonds[b].order for _, b in mol.adjacency[atom.index]}
        if not atom.is_aromatic and DOUBLE not in orders and TRIPLE not in orders:
            sp3 += 1
    return sp3 / len(carbons)


def descriptor_vector(mol: MolGraph) -> DescriptorVector:
    """Evaluate the registered descriptor list in schema order."""
    if mol.fragment_count > 1:
        raise MultiFragmentError("descriptors require a single-fragment molecule")
    aromatic_rings = sum(
        1 for ring in mol.rings if all(mol.atoms[i].is_aromatic for i in ring)
    )
    heteroatoms = sum(1 for a in mol.atoms if a.element not in ("C", "H"))
    hbd = sum(
        1 for a in mol.atoms
        if a.element in ("N", "O") and a.implicit_h_count >= 1
    )
    hba = sum(1 for a in mol.atoms if a.element in ("N", "O"))
    values = (
        molecular_weight(mol),
        crippen_logp(mol),
        ertl_tpsa(mol),
        float(len(mol.atoms)),
        float(len(mol.rings)),
        float(aromatic_rings),
        float(heteroatoms),
        float(hbd),
        float(hba),
        float(_rotatable_bonds(mol)),
        _fraction_csp3(mol),
    )
    return DescriptorVector(values=values)
