"""Canonical SMILES generation.

Atom ranks come from Morgan-style iterative refinement of local invariants
(element, degree, charge, hydrogen count, aromaticity, smallest ring size),
with remaining ties broken deterministically by a whole-graph distance
profile. The writer emits a depth-first SMILES following rank order, so the
output depends only on the graph isomorphism class, never on input atom
order. Stereo and isotope annotations are dropped: downstream math ignores
them, so stereoisomers share one canonical form.
"""

from __future__ import annotations

from collections import deque

from leadopt.molgraph.elements import ORGANIC_SUBSET, allowed_valences
from leadopt.molgraph.graph import AROMATIC, SINGLE, Atom, MolGraph
from leadopt.molgraph.rings import min_ring_size

_BOND_TOKEN = {1: "", 2: "=", 3: "#", 4: ""}


# ---------------------------------------------------------------------------
# canonical ranking
# ---------------------------------------------------------------------------

def _dense_rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(mol: MolGraph, classes: list[int]) -> list[int]:
    """Iterate neighbourhood refinement to a fixed point."""
    n = len(classes)
    while True:
        keys = []
        for i in range(n):
            nbrs = sorted(
                (mol.bonds[bidx].order, classes[nbr])
                for nbr, bidx in mol.adjacency[i]
            )
            keys.append((classes[i], tuple(nbrs)))
        new = _dense_rank(keys)
        if len(set(new)) == len(set(classes)):
            return new
        classes = new


def _distance_profile(mol: MolGraph, start: int, classes: list[int]) -> tuple:
    """Order-invariant tie-break key: sorted (distance, class) over the graph."""
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nbr, _ in mol.adjacency[cur]:
            if nbr not in dist:
                dist[nbr] = dist[cur] + 1
                queue.append(nbr)
    return tuple(sorted((d, classes[a]) for a, d in dist.items()))


def canonical_ranks(mol: MolGraph) -> list[int]:
    """Canonical rank per atom (0 = first in output)."""
    n = len(mol.atoms)
    if n == 0:
        return []
    ring_sizes = min_ring_size(mol)
    keys = []
    for atom in mol.atoms:
        keys.append((
            atom.atomic_number,
            mol.heavy_degree(atom.index),
            atom.formal_charge,
            atom.implicit_h_count,
            atom.is_aromatic,
            ring_sizes.get(atom.index, 0),
        ))
    classes = _refine(mol, _dense_rank(keys))

    while len(set(classes)) < n:
        # Lowest still-tied class; promote its canonically-smallest member.
        counts: dict[int, int] = {}
        for c in classes:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        members = [i for i in range(n) if classes[i] == target]
        members.sort(key=lambda i: (_distance_profile(mol, i, classes), i))
        pick = members[0]
        keys2 = [(classes[i], 0 if i == pick else 1) for i in range(n)]
        classes = _refine(mol, _dense_rank(keys2))

    return classes


# ---------------------------------------------------------------------------
# SMILES writer
# ---------------------------------------------------------------------------

def _bare_reparse_state(mol: MolGraph, atom: Atom) -> tuple[int, int] | None:
    """(pi, implicit_h) a bare symbol would get on reparse, or None if the
    atom cannot be written bare."""
    if atom.formal_charge != 0 or atom.element not in ORGANIC_SUBSET:
        return None
    deg = mol.heavy_degree(atom.index)
    explicit = 0
    arom_bonds = 0
    exo_double = False
    for _, bidx in mol.adjacency[atom.index]:
        order = mol.bonds[bidx].order
        if order == AROMATIC:
            arom_bonds += 1
        else:
            explicit += order
            if order == 2:
                exo_double = True
    if atom.is_aromatic:
        el = atom.element
        if el == "C":
            pi = 0 if exo_double else 1
        elif el in ("N", "P"):
            pi = 1 if exo_double else (1 if deg == 2 else 2 if deg == 3 else -1)
        elif el in ("O", "S"):
            pi = 2
        elif el == "B":
            pi = 0
        else:
            return None
        if pi < 0:
            return None
    else:
        pi = 0
    bos = explicit + arom_bonds + (1 if (atom.is_aromatic and pi == 1) else 0)
    fits = [v for v in allowed_valences(atom.element, 0) if v >= bos]
    if not fits:
        return None
    return pi, fits[0] - bos


def _atom_token(mol: MolGraph, atom: Atom) -> str:
    symbol = atom.element.lower() if atom.is_aromatic else atom.element
    state = _bare_reparse_state(mol, atom)
    if state is not None:
        pi, h = state
        if h == atom.implicit_h_count and (not atom.is_aromatic or pi == atom.pi_electrons):
            return symbol
    h = atom.implicit_h_count
    h_part = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    q = atom.formal_charge
    if q == 0:
        q_part = ""
    elif q == 1:
        q_part = "+"
    elif q == -1:
        q_part = "-"
    else:
        q_part = f"{q:+d}"
    return f"[{symbol}{h_part}{q_part}]"


def _bond_token(mol: MolGraph, bidx: int) -> str:
    bond = mol.bonds[bidx]
    if bond.order == SINGLE:
        both_aromatic = (
            mol.atoms[bond.a].is_aromatic and mol.atoms[bond.b].is_aromatic
        )
        return "-" if both_aromatic else ""
    return _BOND_TOKEN[bond.order]


def write_smiles(mol: MolGraph, ranks: list[int]) -> str:
    """Write SMILES visiting atoms in rank order.

    With canonical ranks this produces the canonical form; tests also drive
    it with arbitrary permutations to realize alternative atom orders.
    """
    if not mol.atoms:
        return ""
    pieces: list[str] = []
    for component in mol.fragments():
        start = min(component, key=lambda i: ranks[i])
        pieces.append(_write_component(mol, ranks, start))
    pieces.sort()
    return ".".join(pieces)


def _write_component(mol: MolGraph, ranks: list[int], start: int) -> str:
    # First pass: tree edges and ring-closure bonds in emission order.
    parent_bond: dict[int, int] = {}
    ring_bonds_at: dict[int, list[tuple[int, int]]] = {}  # atom -> [(bond, other)]
    order_visited: set[int] = set()
    used_bonds: set[int] = set()

    def neighbors_sorted(i: int) -> list[tuple[int, int]]:
        return sorted(mol.adjacency[i], key=lambda t: ranks[t[0]])

    dfs_children: dict[int, list[int]] = {}

    def discover(cur: int) -> None:
        order_visited.add(cur)
        children = []
        for nbr, bidx in neighbors_sorted(cur):
            if bidx in used_bonds:
                continue
            used_bonds.add(bidx)
            if nbr in order_visited:
                ring_bonds_at.setdefault(cur, []).append((bidx, nbr))
                ring_bonds_at.setdefault(nbr, []).append((bidx, cur))
            else:
                parent_bond[nbr] = bidx
                children.append(nbr)
                discover(nbr)
        dfs_children[cur] = children

    discover(start)

    # Second pass: recursive emission with ring-closure digit management.
    digit_for_bond: dict[int, int] = {}
    free_digits = list(range(1, 100))
    out: list[str] = []

    def closure_text(atom_idx: int) -> str:
        parts = []
        entries = ring_bonds_at.get(atom_idx, [])
        # Closing digits first (already allocated), then fresh openings by
        # rank of the far endpoint.
        openings = [e for e in entries if e[0] not in digit_for_bond]
        closings = [e for e in entries if e[0] in digit_for_bond]
        closings.sort(key=lambda e: digit_for_bond[e[0]])
        openings.sort(key=lambda e: ranks[e[1]])
        for bidx, _ in closings:
            d = digit_for_bond.pop(bidx)
            free_digits.append(d)
            free_digits.sort()
            parts.append(_bond_token(mol, bidx) + _digit_text(d))
        for bidx, _ in openings:
            d = free_digits.pop(0)
            digit_for_bond[bidx] = d
            parts.append(_bond_token(mol, bidx) + _digit_text(d))
        return "".join(parts)

    def emit(atom_idx: int) -> None:
        out.append(_atom_token(mol, mol.atoms[atom_idx]))
        out.append(closure_text(atom_idx))
        children = dfs_children.get(atom_idx, [])
        for child in children[:-1]:
            out.append("(")
            out.append(_bond_token(mol, parent_bond[child]))
            emit(child)
            out.append(")")
        if children:
            last = children[-1]
            out.append(_bond_token(mol, parent_bond[last]))
            emit(last)

    emit(start)
    return "".join(out)


def _digit_text(d: int) -> str:
    return str(d) if d < 10 else f"%{d:02d}"


def to_canonical(mol: MolGraph) -> str:
    """Deterministic canonical SMILES for a validated graph."""
    return write_smiles(mol, canonical_ranks(mol))
