"""Deterministic offline generator: graph mutations of context molecules.

The test double for the hosted model. Source molecules are sampled with
weight proportional to activity rank (most active weighted highest, the lead
counted as most active), then perturbed with valence-safe graph edits; every
output parses and passes the valence check. Fully determined by the seed.
"""

from __future__ import annotations

import random
from typing import Sequence

from leadopt.generation.mutations import mutate_molecule
from leadopt.molgraph import MolGraph, parse_smiles


def mock_generate(
    context: Sequence[tuple[str, float]],
    lead: MolGraph | str,
    batch_size: int,
    seed: int,
    mutation_rate: float,
) -> list[str]:
    """batch_size valid SMILES mutated from the context, biased to the top.

    mutation_rate scales the edit count with molecule size; at zero the
    outputs are verbatim copies of the sampled sources.
    """
    if not context:
        raise ValueError("mock generation needs a non-empty context")
    rng = random.Random(seed)
    lead_mol = parse_smiles(lead) if isinstance(lead, str) else lead

    ranked = sorted(context, key=lambda e: -e[1])
    sources: list[MolGraph] = [lead_mol] + [parse_smiles(s) for s, _ in ranked]
    n = len(sources)
    # Squared rank weights: strongly favour the most active sources so a
    # useful share of mutants lands above a top-quintile activity cutoff.
    weights = [(n - rank) ** 2 for rank in range(n)]

    out: list[str] = []
    for _ in range(batch_size):
        src = rng.choices(sources, weights=weights, k=1)[0]
        if mutation_rate <= 0:
            n_edits = 0
        else:
            n_edits = max(1, round(mutation_rate * len(src.atoms)))
        _, smiles = mutate_molecule(src, rng, n_edits)
        out.append(smiles)
    return out
