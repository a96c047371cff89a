"""Ring perception: a smallest-set-of-smallest-rings style basis.

For every bond we take the shortest cycle through it (breadth-first search
with that bond removed), then greedily keep cycles in increasing size order
while they stay linearly independent over GF(2) in bond space, until the
cyclomatic number is reached. Falls back to spanning-tree fundamental cycles
for anything the greedy pass misses.
"""

from __future__ import annotations

from collections import deque
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from leadopt.molgraph.graph import MolGraph


def _shortest_cycle_through(mol: MolGraph, bond_idx: int) -> list[int] | None:
    """Atoms of the shortest cycle containing bond_idx, in cyclic order."""
    bond = mol.bonds[bond_idx]
    src, dst = bond.a, bond.b
    prev: dict[int, int] = {src: -1}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        if cur == dst:
            break
        for nbr, bidx in mol.adjacency[cur]:
            if bidx == bond_idx or nbr in prev:
                continue
            prev[nbr] = cur
            queue.append(nbr)
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path


def _edge_mask(mol: MolGraph, cycle: list[int]) -> int:
    mask = 0
    n = len(cycle)
    for i in range(n):
        a, b = cycle[i], cycle[(i + 1) % n]
        for nbr, bidx in mol.adjacency[a]:
            if nbr == b:
                mask |= 1 << bidx
                break
    return mask


def _fundamental_cycles(mol: MolGraph) -> list[list[int]]:
    """Spanning-forest fundamental cycles (fallback candidates)."""
    n = len(mol.atoms)
    parent = [-1] * n
    depth = [0] * n
    visited = [False] * n
    tree_bonds: set[int] = set()
    out: list[list[int]] = []
    for root in range(n):
        if visited[root]:
            continue
        visited[root] = True
        stack = [root]
        while stack:
            cur = stack.pop()
            for nbr, bidx in mol.adjacency[cur]:
                if not visited[nbr]:
                    visited[nbr] = True
                    parent[nbr] = cur
                    depth[nbr] = depth[cur] + 1
                    tree_bonds.add(bidx)
                    stack.append(nbr)
    for bidx, bond in enumerate(mol.bonds):
        if bidx in tree_bonds:
            continue
        a, b = bond.a, bond.b
        pa, pb = [a], [b]
        x, y = a, b
        while depth[x] > depth[y]:
            x = parent[x]
            pa.append(x)
        while depth[y] > depth[x]:
            y = parent[y]
            pb.append(y)
        while x != y:
            x = parent[x]
            y = parent[y]
            pa.append(x)
            pb.append(y)
        cycle = pa + pb[-2::-1]
        out.append(cycle)
    return out


def perceive_rings(mol: MolGraph) -> list[tuple[int, ...]]:
    """Ring basis of size bonds - atoms + components, smallest rings first."""
    n_rings = len(mol.bonds) - len(mol.atoms) + mol.fragment_count
    if n_rings <= 0:
        return []

    candidates: list[list[int]] = []
    seen_sets: set[frozenset[int]] = set()
    for bidx in range(len(mol.bonds)):
        cycle = _shortest_cycle_through(mol, bidx)
        if cycle is None:
            continue
        key = frozenset(cycle)
        if key not in seen_sets:
            seen_sets.add(key)
            candidates.append(cycle)
    for cycle in _fundamental_cycles(mol):
        key = frozenset(cycle)
        if key not in seen_sets:
            seen_sets.add(key)
            candidates.append(cycle)

    candidates.sort(key=lambda c: (len(c), sorted(c)))

    basis: list[int] = []          # row-reduced masks
    chosen: list[tuple[int, ...]] = []
    for cycle in candidates:
        if len(chosen) == n_rings:
            break
        mask = _edge_mask(mol, cycle)
        reduced = mask
        for row in basis:
            low = row & -row
            if reduced & low:
                reduced ^= row
        if reduced:
            basis.append(reduced)
            basis.sort(key=lambda r: r & -r)
            chosen.append(tuple(cycle))
    return chosen


def atoms_in_rings(mol: MolGraph) -> set[int]:
    return {a for ring in mol.rings for a in ring}


def min_ring_size(mol: MolGraph) -> dict[int, int]:
    """Smallest perceived ring size per atom (absent if not in a ring)."""
    out: dict[int, int] = {}
    for ring in mol.rings:
        for a in ring:
            if a not in out or len(ring) < out[a]:
                out[a] = len(ring)
    return out
