"""SMILES parser: text to a validated MolGraph.

Supported subset: organic-subset bare atoms (B, C, N, O, P, S, F, Cl, Br, I),
bracket atoms with isotope, chirality (@/@@), explicit hydrogen count and
charge, branches, ring closures (1-9 and %nn), explicit bond orders
(- = # :), stereo bond markers (/ and \\, kept as annotations), and the dot
separator for multi-fragment input. Errors carry 0-based character offsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from leadopt.errors import SmilesSyntaxError, ValenceError
from leadopt.molgraph.aromaticity import perceive_aromaticity
from leadopt.molgraph.elements import (
    AROMATIC_ELEMENTS,
    ORGANIC_SUBSET,
    allowed_valences,
    is_known_element,
)
from leadopt.molgraph.graph import AROMATIC, DOUBLE, SINGLE, TRIPLE, Atom, Bond, MolGraph
from leadopt.molgraph.rings import perceive_rings

_BOND_CHARS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}


@dataclass
class _PendingBond:
    order: int | None = None
    stereo: str | None = None
    offset: int = 0

    @property
    def is_set(self) -> bool:
        return self.order is not None or self.stereo is not None


@dataclass
class _RingSlot:
    atom: int
    order: int | None
    stereo: str | None
    offset: int


@dataclass
class _State:
    prev_atom: int | None = None
    pending: _PendingBond = field(default_factory=_PendingBond)
    branch_stack: list[tuple[int, int]] = field(default_factory=list)  # (atom, offset)
    open_rings: dict[int, _RingSlot] = field(default_factory=dict)
    dot_offset: int | None = None  # a '.' awaiting its next atom


def parse_smiles(text: str) -> MolGraph:
    """Parse SMILES text into a validated molecular graph.

    Raises SmilesSyntaxError for malformed text, ValenceError (or its
    AromaticityError subclass) for chemically invalid input.
    """
    if not text:
        raise SmilesSyntaxError("empty SMILES", text, 0)
    mol = MolGraph()
    state = _State()
    pos = 0
    n = len(text)

    while pos < n:
        ch = text[pos]

        if ch.isspace():
            raise SmilesSyntaxError("whitespace inside SMILES", text, pos)

        if ch == ".":
            if state.pending.is_set:
                raise SmilesSyntaxError("dangling bond before '.'", text, state.pending.offset)
            if state.branch_stack:
                raise SmilesSyntaxError("'.' inside branch", text, pos)
            if state.prev_atom is None:
                raise SmilesSyntaxError("'.' without preceding atom", text, pos)
            state.prev_atom = None
            state.dot_offset = pos
            pos += 1
            continue

        if ch in _BOND_CHARS:
            if state.pending.is_set:
                raise SmilesSyntaxError("two bond symbols in a row", text, pos)
            if state.prev_atom is None:
                raise SmilesSyntaxError("bond with no preceding atom", text, pos)
            state.pending.order = _BOND_CHARS[ch]
            state.pending.offset = pos
            pos += 1
            continue

        if ch in "/\\":
            if state.prev_atom is None:
                raise SmilesSyntaxError("bond with no preceding atom", text, pos)
            state.pending.stereo = ch
            state.pending.offset = pos
            pos += 1
            continue

        if ch == "(":
            if state.prev_atom is None:
                raise SmilesSyntaxError("branch before any atom", text, pos)
            if state.pending.is_set:
                raise SmilesSyntaxError("bond before '('", text, state.pending.offset)
            state.branch_stack.append((state.prev_atom, pos))
            pos += 1
            continue

        if ch == ")":
            if not state.branch_stack:
                raise SmilesSyntaxError("unmatched ')'", text, pos)
            if state.pending.is_set:
                raise SmilesSyntaxError("dangling bond before ')'", text, state.pending.offset)
            state.prev_atom = state.branch_stack.pop()[0]
            pos += 1
            continue

        if ch.isdecimal() or ch == "%":
            pos = _ring_closure(text, pos, mol, state)
            continue

        if ch == "[":
            pos = _bracket_atom(text, pos, mol, state)
            continue

        if ch.isalpha():
            pos = _organic_atom(text, pos, mol, state)
            continue

        raise SmilesSyntaxError(f"unexpected character {ch!r}", text, pos)

    if state.pending.is_set:
        raise SmilesSyntaxError("dangling bond at end of input", text, state.pending.offset)
    if state.dot_offset is not None and state.prev_atom is None:
        raise SmilesSyntaxError("'.' without following atom", text, state.dot_offset)
    if state.branch_stack:
        raise SmilesSyntaxError("unclosed branch", text, state.branch_stack[0][1])
    if state.open_rings:
        first = min(state.open_rings.values(), key=lambda s: s.offset)
        raise SmilesSyntaxError("unclosed ring bond", text, first.offset)

    _finalize(mol, text)
    return mol


# ---------------------------------------------------------------------------
# token handlers
# ---------------------------------------------------------------------------

def _attach(mol: MolGraph, state: _State, atom_idx: int, text: str) -> None:
    """Bond the freshly added atom to the previous one, if any."""
    if state.prev_atom is not None:
        order = state.pending.order
        if order is None:
            a = mol.atoms[state.prev_atom]
            b = mol.atoms[atom_idx]
            order = AROMATIC if (a.is_aromatic and b.is_aromatic) else SINGLE
        if mol.bond_between(state.prev_atom, atom_idx) is not None:
            raise SmilesSyntaxError("duplicate bond between atoms", text, state.pending.offset)
        mol.add_bond(Bond(state.prev_atom, atom_idx, order, state.pending.stereo))
    state.pending = _PendingBond()
    state.prev_atom = atom_idx


def _organic_atom(text: str, pos: int, mol: MolGraph, state: _State) -> int:
    start = pos
    ch = text[pos]
    symbol = ch
    if ch.isupper():
        if pos + 1 < len(text) and ch + text[pos + 1] in ("Cl", "Br"):
            symbol = ch + text[pos + 1]
            pos += 1
        if symbol not in ORGANIC_SUBSET:
            raise SmilesSyntaxError(f"unknown atom symbol {symbol!r}", text, start)
        aromatic = False
    else:
        symbol = ch.upper()
        if symbol not in AROMATIC_ELEMENTS or symbol not in ORGANIC_SUBSET:
            raise SmilesSyntaxError(f"unknown aromatic symbol {ch!r}", text, start)
        aromatic = True
    idx = mol.add_atom(Atom(element=symbol, index=0, is_aromatic=aromatic, offset=start))
    _attach(mol, state, idx, text)
    return pos + 1


def _bracket_atom(text: str, pos: int, mol: MolGraph, state: _State) -> int:
    start = pos
    pos += 1
    end = text.find("]", pos)
    if end < 0:
        raise SmilesSyntaxError("unclosed '['", text, start)
    body = text[pos:end]
    if not body:
        raise SmilesSyntaxError("empty bracket atom", text, start)

    i = 0
    isotope = None
    if i < len(body) and body[i].isdecimal():
        j = i
        while j < len(body) and body[j].isdecimal():
            j += 1
        isotope = int(body[i:j])
        i = j
    if i >= len(body) or not body[i].isalpha():
        raise SmilesSyntaxError("expected element symbol in brackets", text, start + 1 + i)

    sym = body[i]
    i += 1
    if i < len(body) and body[i].islower() and is_known_element(sym + body[i]):
        sym += body[i]
        i += 1
    aromatic = False
    if sym[0].islower():
        cand = sym.capitalize()
        if cand not in AROMATIC_ELEMENTS:
            raise SmilesSyntaxError(f"unknown aromatic symbol {sym!r}", text, start + 1)
        sym = cand
        aromatic = True
    if not is_known_element(sym):
        raise SmilesSyntaxError(f"unknown element {sym!r}", text, start + 1)

    stereo = None
    if i < len(body) and body[i] == "@":
        stereo = "@"
        i += 1
        if i < len(body) and body[i] == "@":
            stereo = "@@"
            i += 1

    h_count = None
    if i < len(body) and body[i] == "H":
        i += 1
        j = i
        while j < len(body) and body[j].isdecimal():
            j += 1
        h_count = int(body[i:j]) if j > i else 1
        i = j

    charge = 0
    if i < len(body) and body[i] in "+-":
        sign = 1 if body[i] == "+" else -1
        symb = body[i]
        count = 0
        while i < len(body) and body[i] == symb:
            count += 1
            i += 1
        j = i
        while j < len(body) and body[j].isdecimal():
            j += 1
        if j > i:
            if count > 1:
                raise SmilesSyntaxError("malformed charge", text, start + 1 + i)
            charge = sign * int(body[i:j])
            i = j
        else:
            charge = sign * count
        if abs(charge) > 15:
            raise SmilesSyntaxError("charge out of range", text, start + 1)

    if i < len(body) and body[i] == ":":
        i += 1
        j = i
        while j < len(body) and body[j].isdecimal():
            j += 1
        if j == i:
            raise SmilesSyntaxError("expected atom class digits", text, start + 1 + i)
        i = j  # atom class parsed and discarded

    if i != len(body):
        raise SmilesSyntaxError(f"unexpected bracket content {body[i:]!r}", text, start + 1 + i)

    idx = mol.add_atom(Atom(
        element=sym,
        index=0,
        is_aromatic=aromatic,
        formal_charge=charge,
        bracket=True,
        explicit_h=h_count,
        stereo=stereo,
        isotope=isotope,
        offset=start,
    ))
    _attach(mol, state, idx, text)
    return end + 1


def _ring_closure(text: str, pos: int, mol: MolGraph, state: _State) -> int:
    start = pos
    if text[pos] == "%":
        if pos + 2 >= len(text) or not (text[pos + 1].isdecimal() and text[pos + 2].isdecimal()):
            raise SmilesSyntaxError("expected two digits after '%'", text, pos)
        number = int(text[pos + 1:pos + 3])
        pos += 3
    else:
        number = int(text[pos])
        pos += 1

    if state.prev_atom is None:
        raise SmilesSyntaxError("ring closure with no preceding atom", text, start)

    if number in state.open_rings:
        slot = state.open_rings.pop(number)
        if slot.atom == state.prev_atom:
            raise SmilesSyntaxError("ring closure to the same atom", text, start)
        order = state.pending.order
        if order is not None and slot.order is not None and order != slot.order:
            raise SmilesSyntaxError("conflicting ring-closure bond orders", text, start)
        if order is None:
            order = slot.order
        if order is None:
            a = mol.atoms[slot.atom]
            b = mol.atoms[state.prev_atom]
            order = AROMATIC if (a.is_aromatic and b.is_aromatic) else SINGLE
        if mol.bond_between(slot.atom, state.prev_atom) is not None:
            raise SmilesSyntaxError("duplicate ring bond", text, start)
        stereo = state.pending.stereo or slot.stereo
        mol.add_bond(Bond(slot.atom, state.prev_atom, order, stereo))
    else:
        state.open_rings[number] = _RingSlot(
            atom=state.prev_atom,
            order=state.pending.order,
            stereo=state.pending.stereo,
            offset=start,
        )
    state.pending = _PendingBond()
    return pos


# ---------------------------------------------------------------------------
# post-parse validation
# ---------------------------------------------------------------------------

def _finalize(mol: MolGraph, text: str) -> None:
    mol.rings = perceive_rings(mol)
    perceive_aromaticity(mol)
    _assign_hydrogens(mol, text)
    _check_valences(mol, text)


def _assign_hydrogens(mol: MolGraph, text: str) -> None:
    for atom in mol.atoms:
        if atom.bracket:
            atom.implicit_h_count = atom.explicit_h or 0
            continue
        bos = mol.bond_order_sum(atom.index)
        fits = [v for v in allowed_valences(atom.element, 0) if v >= bos]
        if not fits:
            raise ValenceError(
                f"atom '{atom.element}' exceeds allowed valence "
                f"(bond order sum {bos})",
                text,
                atom.offset,
            )
        atom.implicit_h_count = fits[0] - bos


def _check_valences(mol: MolGraph, text: str) -> None:
    for atom in mol.atoms:
        vals = allowed_valences(atom.element, atom.formal_charge)
        if not vals:
            continue  # no rule for this element; accept as written
        total = mol.bond_order_sum(atom.index) + atom.implicit_h_count
        if total > max(vals):
            raise ValenceError(
                f"atom '{atom.element}' with charge {atom.formal_charge:+d} "
                f"has valence {total}, allowed up to {max(vals)}",
                text,
                atom.offset,
            )
