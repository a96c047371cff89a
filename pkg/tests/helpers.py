"""Shared test utilities: deterministic random molecule corpora."""

from __future__ import annotations

import random

from leadopt.generation.mutations import mutate_molecule
from leadopt.molgraph import MolGraph, parse_smiles, to_canonical

SEED_TEMPLATES = [
    "c1ccccc1",
    "c1ccncc1",
    "c1ccoc1",
    "c1ccsc1",
    "c1cc[nH]c1",
    "c1ccc2ccccc2c1",
    "C1CCCCC1",
    "C1CCOC1",
    "C1CCNC1",
    "CCO",
    "CC(C)C",
    "CC(=O)O",
    "CC(=O)N",
    "CCOC(=O)C",
    "CC(=O)Nc1ccccc1",
    "c1ccc(cc1)C(=O)O",
]


def random_molecule(rng: random.Random, min_edits: int = 1, max_edits: int = 6) -> tuple[MolGraph, str]:
    base = parse_smiles(rng.choice(SEED_TEMPLATES))
    mol, smi = mutate_molecule(base, rng, rng.randint(min_edits, max_edits))
    return mol, smi


def random_corpus(seed: int, size: int) -> list[str]:
    """Distinct canonical SMILES, deterministically generated."""
    rng = random.Random(seed)
    seen: dict[str, None] = {}
    guard = 0
    while len(seen) < size:
        guard += 1
        if guard > size * 50:
            raise RuntimeError("corpus generation stalled")
        mol, _ = random_molecule(rng)
        seen.setdefault(to_canonical(mol), None)
    return list(seen)[:size]


def ladder_corpus(seed: int, size: int, target_atoms: int = 24) -> list[str]:
    """Fixed-size molecules whose weight is set by composition.

    Every molecule is grown to the same heavy-atom count with a per-molecule
    mix of light (carbon) and heavy (chlorine) substituents, so molecular
    weight is a function of composition alone. That makes a weight-linear
    target learnable by every feature view, including the token-distribution
    embedding, which is blind to absolute size by construction.
    """
    from leadopt.generation.mutations import clone_graph
    from leadopt.generation.mutations import _add_substituent  # noqa: SLF001
    from leadopt.molgraph import write_smiles

    rng = random.Random(seed)
    seen: dict[str, None] = {}
    while len(seen) < size:
        mol = parse_smiles(rng.choice(SEED_TEMPLATES))
        if len(mol.atoms) >= target_atoms:
            continue
        heavy_fraction = rng.random()
        work = clone_graph(mol)
        ok = True
        while len(work.atoms) < target_atoms:
            palette = (("Cl",),) if rng.random() < heavy_fraction else (("C",),)
            if not _add_substituent(work, rng, palette):
                ok = False
                break
        if not ok:
            continue
        try:
            smi = write_smiles(work, list(range(len(work.atoms))))
            canon = to_canonical(parse_smiles(smi))
        except Exception:
            continue
        seen.setdefault(canon, None)
    return list(seen)[:size]


def synthetic_dataset(seed: int, size: int, noise: float = 0.3, target_name: str = "SYNTH"):
    """Dataset whose activity is linear in molecular weight plus noise, so
    all three feature views carry learnable signal."""
    from leadopt.data import ActivityRecord, TargetDataset
    from leadopt.properties import molecular_weight

    smiles = random_corpus(seed, size)
    rng = random.Random(seed + 1000)
    records = []
    for s in smiles:
        mw = molecular_weight(parse_smiles(s))
        activity = 4.0 + 0.02 * mw + rng.gauss(0.0, noise)
        records.append(ActivityRecord(smiles=s, activity=round(activity, 4)))
    return TargetDataset(target_name=target_name, records=records)
