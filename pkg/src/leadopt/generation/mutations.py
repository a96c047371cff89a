"""Valence-safe molecular graph edits.

These power the offline mock generator: small structural perturbations of a
source molecule (atom substitution within valence limits, substituent
addition, terminal-atom removal). Every result is realized as SMILES and
re-parsed, so only valid molecules ever leave this module; edits that break
chemistry are discarded and resampled by the caller.
"""

from __future__ import annotations

import random
from dataclasses import replace

from leadopt.errors import SmilesError
from leadopt.molgraph import Atom, Bond, MolGraph, parse_smiles, write_smiles
from leadopt.molgraph.elements import allowed_valences

# Substituents the mock generator may graft on, as element chains attached
# by single bonds (first element bonds to the chosen site).
DEFAULT_FRAGMENTS: tuple[tuple[str, ...], ...] = (
    ("C",), ("N",), ("O",), ("F",), ("Cl",),
    ("C", "C"), ("C", "O"), ("C", "N"), ("O", "C"),
)

_SWAPS = {"C": ("N", "O"), "N": ("C", "O"), "O": ("C", "N"), "S": ("O",)}
_AROMATIC_SWAPS = {"C": ("N",), "N": ("C",)}


def clone_graph(mol: MolGraph) -> MolGraph:
    out = MolGraph()
    for atom in mol.atoms:
        out.add_atom(replace(atom))
    for bond in mol.bonds:
        out.add_bond(replace(bond))
    out.rings = list(mol.rings)
    return out


def _recompute_h(mol: MolGraph, idx: int) -> bool:
    """Refit implicit hydrogens after an edit; False when valence breaks."""
    atom = mol.atoms[idx]
    bos = mol.bond_order_sum(idx)
    fits = [v for v in allowed_valences(atom.element, atom.formal_charge) if v >= bos]
    if not fits:
        return False
    atom.implicit_h_count = fits[0] - bos
    atom.bracket = False
    atom.explicit_h = None
    return True


def _substitute(mol: MolGraph, rng: random.Random) -> bool:
    candidates = []
    for atom in mol.atoms:
        if atom.formal_charge != 0:
            continue
        table = _AROMATIC_SWAPS if atom.is_aromatic else _SWAPS
        if atom.element in table:
            candidates.append(atom.index)
    if not candidates:
        return False
    idx = rng.choice(candidates)
    atom = mol.atoms[idx]
    table = _AROMATIC_SWAPS if atom.is_aromatic else _SWAPS
    atom.element = rng.choice(table[atom.element])
    return _recompute_h(mol, idx)


def _add_substituent(
    mol: MolGraph, rng: random.Random, fragments: tuple[tuple[str, ...], ...]
) -> bool:
    sites = [a.index for a in mol.atoms if a.implicit_h_count >= 1]
    if not sites:
        return False
    site = rng.choice(sites)
    chain = rng.choice(fragments)
    mol.atoms[site].implicit_h_count -= 1
    prev = site
    added = []
    for element in chain:
        idx = mol.add_atom(Atom(element=element, index=0))
        mol.add_bond(Bond(prev, idx, 1))
        added.append(idx)
        prev = idx
    return all(_recompute_h(mol, idx) for idx in added)


def _remove_terminal(mol: MolGraph, rng: random.Random) -> bool:
    if len(mol.atoms) <= 3:
        return False
    candidates = [
        a.index for a in mol.atoms
        if mol.heavy_degree(a.index) == 1 and not a.is_aromatic
    ]
    if not candidates:
        return False
    victim = rng.choice(candidates)
    nbr, bidx = mol.adjacency[victim][0]
    order = mol.bonds[bidx].order
    mol.atoms[nbr].implicit_h_count += order

    keep = [i for i in range(len(mol.atoms)) if i != victim]
    remap = {old: new for new, old in enumerate(keep)}
    rebuilt = MolGraph()
    for old in keep:
        rebuilt.add_atom(replace(mol.atoms[old]))
    for i, bond in enumerate(mol.bonds):
        if i == bidx:
            continue
        rebuilt.add_bond(Bond(remap[bond.a], remap[bond.b], bond.order, bond.stereo))
    mol.atoms = rebuilt.atoms
    mol.bonds = rebuilt.bonds
    mol.adjacency = rebuilt.adjacency
    mol.rings = []
    return True


def mutate_molecule(
    mol: MolGraph,
    rng: random.Random,
    n_edits: int,
    fragments: tuple[tuple[str, ...], ...] = DEFAULT_FRAGMENTS,
    max_attempts: int = 20,
) -> tuple[MolGraph, str]:
    """Apply n_edits random edits; returns (validated graph, SMILES).

    Falls back to an unmodified copy when no valid mutant is found within
    max_attempts, so the caller always receives a parseable molecule.
    """
    for _ in range(max_attempts):
        work = clone_graph(mol)
        ok = True
        for _ in range(n_edits):
            op = rng.choice(("substitute", "add", "add", "remove"))
            if op == "substitute":
                ok = _substitute(work, rng)
            elif op == "add":
                ok = _add_substituent(work, rng, fragments)
            else:
                ok = _remove_terminal(work, rng)
            if not ok:
                break
        if not ok:
            continue
        try:
            smiles = write_smiles(work, list(range(len(work.atoms))))
            return parse_smiles(smiles), smiles
        except SmilesError:
            continue
    smiles = write_smiles(mol, list(range(len(mol.atoms))))
    return parse_smiles(smiles), smiles
