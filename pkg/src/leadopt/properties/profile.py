"""Molecular weight and the combined property profile."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from leadopt.molgraph import MolGraph
from leadopt.properties.logp import crippen_logp
from leadopt.properties.sascore import FragmentStats, sa_score
from leadopt.properties.tables import atomic_weights
from leadopt.properties.tpsa import ertl_tpsa


def molecular_weight(mol: MolGraph, table_path: str | Path | None = None) -> float:
    """Sum of standard atomic weights, implicit hydrogens included."""
    weights = atomic_weights(table_path)
    h_weight = weights["H"]
    total = 0.0
    for atom in mol.atoms:
        total += weights[atom.element] + atom.implicit_h_count * h_weight
    return total


@dataclass(frozen=True)
class PropertyProfile:
    """The four conditioned physicochemical properties."""

    molecular_weight: float
    logp: float
    tpsa: float
    sa_score: float

    def as_dict(self) -> dict[str, float]:
        return {
            "molecular_weight": self.molecular_weight,
            "logp": self.logp,
            "tpsa": self.tpsa,
            "sa_score": self.sa_score,
        }


def property_profile(mol: MolGraph, fragment_stats: FragmentStats) -> PropertyProfile:
    return PropertyProfile(
        molecular_weight=molecular_weight(mol),
        logp=crippen_logp(mol),
        tpsa=ertl_tpsa(mol),
        sa_score=sa_score(mol, fragment_stats),
    )
