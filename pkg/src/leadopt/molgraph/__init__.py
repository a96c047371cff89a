"""SMILES parsing, validation, and canonicalization."""

from leadopt.molgraph.canonical import canonical_ranks, to_canonical, write_smiles
from leadopt.molgraph.graph import (
    AROMATIC,
    DOUBLE,
    SINGLE,
    TRIPLE,
    Atom,
    Bond,
    MolGraph,
    molecular_formula,
)
from leadopt.molgraph.parser import parse_smiles

__all__ = [
    "AROMATIC",
    "DOUBLE",
    "SINGLE",
    "TRIPLE",
    "Atom",
    "Bond",
    "MolGraph",
    "canonical_ranks",
    "molecular_formula",
    "parse_smiles",
    "to_canonical",
    "write_smiles",
]


def canonical_smiles(text: str) -> str:
    """Parse and canonicalize in one step."""
    return to_canonical(parse_smiles(text))
