"""Molecular graph types.

A MolGraph is the parsed, validated form of a SMILES string: atoms with
aromaticity and hydrogen counts assigned, bonds with explicit orders, and
perceived rings. Instances are treated as immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from leadopt.molgraph.elements import atomic_number

# Bond order codes. Aromatic bonds use a sentinel rather than 1.5 so that
# order stays integral; valence accounting handles the pi electron separately.
SINGLE = 1
DOUBLE = 2
TRIPLE = 3
AROMATIC = 4

_ORDER_SYMBOL = {SINGLE: "-", DOUBLE: "=", TRIPLE: "#", AROMATIC: ":"}


@dataclass
class Atom:
    """One heavy atom. Hydrogens are implicit counts, never graph nodes."""

    element: str
    index: int
    is_aromatic: bool = False
    formal_charge: int = 0
    implicit_h_count: int = 0
    # Parser bookkeeping ------------------------------------------------
    bracket: bool = False
    explicit_h: int | None = None   # H count given inside brackets
    stereo: str | None = None       # "@" / "@@", preserved but unused downstream
    isotope: int | None = None      # preserved annotation, ignored by weights
    offset: int = 0                 # source character offset for diagnostics
    # Aromaticity bookkeeping: pi electrons this atom donates to its ring
    # system (0, 1 or 2); meaningful only when is_aromatic.
    pi_electrons: int = 0

    @property
    def atomic_number(self) -> int:
        return atomic_number(self.element)

    @property
    def total_h(self) -> int:
        return self.implicit_h_count


@dataclass
class Bond:
    """Edge between two atom indices; endpoints are stored in parse order."""

    a: int
    b: int
    order: int = SINGLE
    stereo: str | None = None  # "/" or "\\" annotation, ignored downstream

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    @property
    def symbol(self) -> str:
        return _ORDER_SYMBOL[self.order]


@dataclass
class MolGraph:
    """Validated molecular graph with perceived rings."""

    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)
    rings: list[tuple[int, ...]] = field(default_factory=list)
    # adjacency[i] = list of (neighbor atom index, bond index)
    adjacency: list[list[tuple[int, int]]] = field(default_factory=list)

    # -- construction helpers (used by the parser only) -----------------

    def add_atom(self, atom: Atom) -> int:
        atom.index = len(self.atoms)
        self.atoms.append(atom)
        self.adjacency.append([])
        return atom.index

    def add_bond(self, bond: Bond) -> int:
        idx = len(self.bonds)
        self.bonds.append(bond)
        self.adjacency[bond.a].append((bond.b, idx))
        self.adjacency[bond.b].append((bond.a, idx))
        return idx

    # -- queries ---------------------------------------------------------

    def neighbors(self, idx: int) -> list[tuple[int, int]]:
        return self.adjacency[idx]

    def heavy_degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def bond_between(self, a: int, b: int) -> Bond | None:
        for nbr, bidx in self.adjacency[a]:
            if nbr == b:
                return self.bonds[bidx]
        return None

    def bond_order_sum(self, idx: int) -> int:
        """Explicit bond order sum with aromatic bonds counted as one each
        plus one extra unit when the atom donates a single pi electron."""
        total = 0
        aromatic_seen = False
        for _, bidx in self.adjacency[idx]:
            order = self.bonds[bidx].order
            if order == AROMATIC:
                total += 1
                aromatic_seen = True
            else:
                total += order
        atom = self.atoms[idx]
        if aromatic_seen and atom.is_aromatic and atom.pi_electrons == 1:
            total += 1
        return total

    def fragments(self) -> list[list[int]]:
        """Connected components as sorted atom index lists, in order of
        their smallest member."""
        seen = [False] * len(self.atoms)
        out: list[list[int]] = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                cur = stack.pop()
                comp.append(cur)
                for nbr, _ in self.adjacency[cur]:
                    if not seen[nbr]:
                        seen[nbr] = True
                        stack.append(nbr)
            out.append(sorted(comp))
        return out

    @property
    def fragment_count(self) -> int:
        return len(self.fragments())

    def ring_membership(self) -> list[list[int]]:
        """For each atom, the indices into self.rings it belongs to."""
        member: list[list[int]] = [[] for _ in self.atoms]
        for ridx, ring in enumerate(self.rings):
            for a in ring:
                member[a].append(ridx)
        return member

    def heavy_atom_count(self) -> int:
        return len(self.atoms)


def molecular_formula(mol: MolGraph) -> str:
    """Hill-order molecular formula including implicit hydrogens.

    Carbon first, hydrogen second, remaining elements alphabetical; with no
    carbon present all elements (hydrogen included) sort alphabetically.
    """
    counts: dict[str, int] = {}
    h_total = 0
    for atom in mol.atoms:
        counts[atom.element] = counts.get(atom.element, 0) + 1
        h_total += atom.implicit_h_count
    if h_total:
        counts["H"] = counts.get("H", 0) + h_total

    def fmt(sym: str) -> str:
        n = counts[sym]
        return sym if n == 1 else f"{sym}{n}"

    parts: list[str] = []
    rest = set(counts)
    if "C" in counts:
        parts.append(fmt("C"))
        rest.discard("C")
        if "H" in counts:
            parts.append(fmt("H"))
            rest.discard("H")
    parts.extend(fmt(sym) for sym in sorted(rest))
    return "".join(parts)
