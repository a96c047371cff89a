"""Consensus filtering of generated candidates.

A candidate enters the context only when it is a valid single-fragment
molecule, not already present, and every one of the three view models
predicts strictly above the cutoff. Accepted candidates are labelled with
the consensus mean. Every rejection is recorded with a reason code.
"""

from __future__ import annotations

from dataclasses import dataclass

from leadopt.campaign.context import Context
from leadopt.generation.parsing import GeneratedBatch
from leadopt.molgraph import parse_smiles
from leadopt.qsar import EnsemblePredictor, VIEWS, consensus_predict_batch

REASON_INVALID = "invalid"
REASON_DUPLICATE = "duplicate"
REASON_BELOW_CUTOFF = "below_cutoff"
REASON_CONDITION_FAIL = "condition_fail"


def consensus_verdict(per_view: dict[str, float], cutoff: float) -> tuple[bool, float]:
    """(accept, consensus label): all views strictly above the cutoff; the
    label is the arithmetic mean of the per-view predictions."""
    values = [per_view[v] for v in VIEWS]
    return min(values) > cutoff, sum(values) / len(values)


@dataclass(frozen=True)
class AcceptedCandidate:
    canonical: str
    label: float
    per_view: dict[str, float]


@dataclass(frozen=True)
class RejectedCandidate:
    smiles: str
    reason: str
    detail: str = ""


@dataclass
class FilterResult:
    accepted: list[AcceptedCandidate]
    rejected: list[RejectedCandidate]


def filter_and_label(
    candidates: GeneratedBatch,
    ens: EnsemblePredictor,
    cutoff: float,
    context: Context,
) -> FilterResult:
    """Apply validity, dedup, and the all-views consensus rule, in order."""
    result = FilterResult(accepted=[], rejected=[])
    seen: set[str] = set()

    stage: list[tuple[str, str] | None] = []
    for mol in candidates.molecules:
        if not mol.is_valid or mol.canonical is None:
            result.rejected.append(RejectedCandidate(
                smiles=mol.smiles,
                reason=REASON_INVALID,
                detail=mol.error or mol.status,
            ))
            stage.append(None)
            continue
        if mol.canonical in context or mol.canonical in seen:
            result.rejected.append(RejectedCandidate(
                smiles=mol.smiles, reason=REASON_DUPLICATE,
            ))
            stage.append(None)
            continue
        seen.add(mol.canonical)
        stage.append((mol.smiles, mol.canonical))

    survivors = [s for s in stage if s is not None]
    if not survivors:
        return result

    mols = [parse_smiles(canonical) for _, canonical in survivors]
    predictions = consensus_predict_batch(ens, mols)
    for (smiles, canonical), per_view in zip(survivors, predictions):
        accept, label = consensus_verdict(per_view, cutoff)
        if accept:
            result.accepted.append(AcceptedCandidate(
                canonical=canonical, label=label, per_view=per_view,
            ))
        else:
            result.rejected.append(RejectedCandidate(
                smiles=smiles,
                reason=REASON_BELOW_CUTOFF,
                detail=f"min view {min(per_view.values()):.3f} <= cutoff {cutoff:.3f}",
            ))
    return result
