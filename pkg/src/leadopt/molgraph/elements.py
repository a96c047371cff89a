"""Periodic-table lookups: symbols, atomic numbers, and valence rules."""

from __future__ import annotations

# Atomic numbers for every symbol the parser recognizes. Bracket atoms may use
# any of these; bare atoms are restricted to the organic subset below.
ATOMIC_NUMBERS: dict[str, int] = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10, "Na": 11, "Mg": 12, "Al": 13, "Si": 14, "P": 15,
    "S": 16, "Cl": 17, "Ar": 18, "K": 19, "Ca": 20, "Sc": 21, "Ti": 22,
    "V": 23, "Cr": 24, "Mn": 25, "Fe": 26, "Co": 27, "Ni": 28, "Cu": 29,
    "Zn": 30, "Ga": 31, "Ge": 32, "As": 33, "Se": 34, "Br": 35, "Kr": 36,
    "Rb": 37, "Sr": 38, "Y": 39, "Zr": 40, "Nb": 41, "Mo": 42, "Tc": 43,
    "Ru": 44, "Rh": 45, "Pd": 46, "Ag": 47, "Cd": 48, "In": 49, "Sn": 50,
    "Sb": 51, "Te": 52, "I": 53, "Xe": 54, "Cs": 55, "Ba": 56, "La": 57,
    "Ce": 58, "Pr": 59, "Nd": 60, "Sm": 62, "Eu": 63, "Gd": 64, "Tb": 65,
    "Dy": 66, "Ho": 67, "Er": 68, "Tm": 69, "Yb": 70, "Lu": 71, "Hf": 72,
    "Ta": 73, "W": 74, "Re": 75, "Os": 76, "Ir": 77, "Pt": 78, "Au": 79,
    "Hg": 80, "Tl": 81, "Pb": 82, "Bi": 83, "Po": 84, "At": 85, "Rn": 86,
}

# Bare (unbracketed) atoms allowed by the grammar.
ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
TWO_LETTER_ORGANIC = frozenset({"Cl", "Br"})

# Elements that may carry the lowercase aromatic form.
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "P", "S"})

# Allowed valence states, lowest first. Implicit hydrogens fill up to the
# smallest state that covers the explicit bond order sum.
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "H": (1,),
    "B": (3,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "F": (1,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}


def is_known_element(symbol: str) -> bool:
    return symbol in ATOMIC_NUMBERS


def atomic_number(symbol: str) -> int:
    return ATOMIC_NUMBERS[symbol]


def allowed_valences(element: str, charge: int) -> tuple[int, ...]:
    """Valence states available to an element at a given formal charge.

    Charge shifts the electron count: for the electronegative right-side
    elements (N, O, P, S, halogens) a positive charge adds a bonding slot and
    a negative charge removes one; boron behaves the opposite way; carbon
    loses a slot in either direction. Elements without an entry (metals,
    noble gases) return an empty tuple, which disables the valence check.
    """
    base = DEFAULT_VALENCES.get(element)
    if base is None:
        return ()
    if charge == 0:
        return base
    if element == "C":
        shift = -abs(charge)
    elif element == "B":
        shift = -charge
    else:
        shift = charge
    return tuple(v + shift for v in base if v + shift >= 0)
