"""Topological polar surface area from fragment contributions.

Sums the published N/O fragment contributions (S and P behind an extension
flag, off by default). Polar atoms matching no pattern contribute zero with
a log line — unlike logP, tPSA degrades gracefully because novel generated
fragments routinely fall outside the table.
"""

from __future__ import annotations

import logging
from pathlib import Path

from leadopt.molgraph import AROMATIC, DOUBLE, MolGraph, SINGLE, TRIPLE
from leadopt.properties.tables import tpsa_patterns

log = logging.getLogger(__name__)


def _atom_features(mol: MolGraph, idx: int) -> dict[str, str]:
    atom = mol.atoms[idx]
    counts = {SINGLE: 0, DOUBLE: 0, TRIPLE: 0, AROMATIC: 0}
    for _, bidx in mol.adjacency[idx]:
        counts[mol.bonds[bidx].order] += 1
    in_three_ring = any(len(r) == 3 and idx in r for r in mol.rings)
    return {
        "el": atom.element,
        "arom": "1" if atom.is_aromatic else "0",
        "q": str(atom.formal_charge),
        "h": str(atom.implicit_h_count),
        "s": str(counts[SINGLE]),
        "d": str(counts[DOUBLE]),
        "t": str(counts[TRIPLE]),
        "a": str(counts[AROMATIC]),
        "r3": "1" if in_three_ring else "0",
    }


_FIELD_ORDER = ("el", "arom", "q", "h", "s", "d", "t", "a", "r3")


def _matches(pattern: tuple[str, ...], feats: dict[str, str]) -> bool:
    return all(
        want == "*" or want == feats[key]
        for key, want in zip(_FIELD_ORDER, pattern)
    )


def ertl_tpsa(
    mol: MolGraph,
    include_sp: bool = False,
    table_path: str | Path | None = None,
) -> float:
    """Polar surface area in A^2; N/O always, S/P when include_sp is set."""
    elements = {"N", "O"} | ({"S", "P"} if include_sp else set())
    patterns = tpsa_patterns(table_path)
    total = 0.0
    for atom in mol.atoms:
        if atom.element not in elements:
            continue
        feats = _atom_features(mol, atom.index)
        for pattern, value in patterns:
            if _matches(pattern, feats):
                total += value
                break
        else:
            log.info(
                "no tPSA fragment for %s atom %d (features %s); contributes 0",
                atom.element, atom.index, feats,
            )
    return total
