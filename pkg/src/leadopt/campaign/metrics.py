"""Batch evaluation: validity/uniqueness/novelty rates, diversity, and a
Fréchet distance between molecule-set feature distributions.

The Fréchet distance here is computed over this package's own continuous
features — the fragment embedding concatenated with standardized descriptor
values — as a stand-in for learned-network activations. Descriptor
standardization uses a scaler the caller fits on its reference (lead) set;
without one, the scaler is fit on the union of both sets, which keeps the
distance symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leadopt.errors import EmptyBatchError, TooFewSamplesError
from leadopt.features import (
    FragmentVocabulary,
    circular_fingerprint,
    dice_similarity,
    mol2vec_embed,
    tanimoto_similarity,
)
from leadopt.features.descriptors import descriptor_vector
from leadopt.generation.parsing import GeneratedBatch
from leadopt.molgraph import MolGraph, parse_smiles

COVARIANCE_EPSILON = 1e-6


@dataclass(frozen=True)
class DescriptorScaler:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, mols: list[MolGraph]) -> "DescriptorScaler":
        rows = np.stack([descriptor_vector(m).as_array() for m in mols])
        std = rows.std(axis=0)
        std[std == 0.0] = 1.0
        return cls(mean=rows.mean(axis=0), std=std)

    def apply(self, row: np.ndarray) -> np.ndarray:
        return (row - self.mean) / self.std


def set_features(
    mols: list[MolGraph],
    vocab: FragmentVocabulary,
    scaler: DescriptorScaler,
) -> np.ndarray:
    return np.stack([
        np.concatenate([
            mol2vec_embed(m, vocab),
            scaler.apply(descriptor_vector(m).as_array()),
        ])
        for m in mols
    ])


def _sqrt_trace_of_product(cov_a: np.ndarray, cov_b: np.ndarray) -> float:
    """Tr((cov_a cov_b)^(1/2)) via the symmetric form
    (cov_a^(1/2) cov_b cov_a^(1/2))^(1/2), eigendecomposed."""
    wa, va = np.linalg.eigh(cov_a)
    root_a = va @ np.diag(np.sqrt(np.clip(wa, 0.0, None))) @ va.T
    inner = root_a @ cov_b @ root_a
    wi = np.linalg.eigvalsh(inner)
    return float(np.sqrt(np.clip(wi, 0.0, None)).sum())


def frechet_from_features(feats_a: np.ndarray, feats_b: np.ndarray) -> float:
    """Squared Fréchet distance between Gaussian fits of two feature sets.

    Rows are put in a canonical order first (the fit is order-free, this
    just makes results bitwise order-invariant), and identical sets return
    exactly zero rather than eigendecomposition noise.
    """
    if len(feats_a) < 2 or len(feats_b) < 2:
        raise TooFewSamplesError("each set needs at least two samples")
    feats_a = feats_a[np.lexsort(feats_a.T)]
    feats_b = feats_b[np.lexsort(feats_b.T)]
    if feats_a.shape == feats_b.shape and np.array_equal(feats_a, feats_b):
        return 0.0
    mu_a, mu_b = feats_a.mean(axis=0), feats_b.mean(axis=0)
    dim = feats_a.shape[1]
    eye = COVARIANCE_EPSILON * np.eye(dim)
    cov_a = np.cov(feats_a, rowvar=False).reshape(dim, dim) + eye
    cov_b = np.cov(feats_b, rowvar=False).reshape(dim, dim) + eye
    mean_term = float(((mu_a - mu_b) ** 2).sum())
    value = mean_term + float(np.trace(cov_a) + np.trace(cov_b)) \
        - 2.0 * _sqrt_trace_of_product(cov_a, cov_b)
    # d^2 is non-negative by construction; clamp float cancellation noise.
    return max(0.0, value)


def frechet_distance(
    set_a: list[MolGraph],
    set_b: list[MolGraph],
    vocab: FragmentVocabulary,
    scaler: DescriptorScaler | None = None,
) -> float:
    if len(set_a) < 2 or len(set_b) < 2:
        raise TooFewSamplesError("each molecule set needs at least two members")
    if scaler is None:
        scaler = DescriptorScaler.fit(set_a + set_b)
    return frechet_from_features(
        set_features(set_a, vocab, scaler),
        set_features(set_b, vocab, scaler),
    )


@dataclass(frozen=True)
class EvalMetrics:
    validity_rate: float
    uniqueness_rate: float
    novelty_rate: float
    internal_diversity: float
    mean_dice_to_train: float
    max_dice_to_train: float
    frechet_distance: float | None

    def to_dict(self) -> dict:
        return {
            "validity_rate": self.validity_rate,
            "uniqueness_rate": self.uniqueness_rate,
            "novelty_rate": self.novelty_rate,
            "internal_diversity": self.internal_diversity,
            "mean_dice_to_train": self.mean_dice_to_train,
            "max_dice_to_train": self.max_dice_to_train,
            "frechet_distance": self.frechet_distance,
        }


def internal_diversity(mols: list[MolGraph]) -> float:
    """1 - mean pairwise Tanimoto; zero for fewer than two molecules."""
    if len(mols) < 2:
        return 0.0
    fps = [circular_fingerprint(m) for m in mols]
    sims = [
        tanimoto_similarity(fps[i], fps[j])
        for i in range(len(fps)) for j in range(i + 1, len(fps))
    ]
    return 1.0 - sum(sims) / len(sims)


def eval_batch(
    batch: GeneratedBatch,
    train_set: set[str] | list[str],
    lead_set: list[MolGraph],
    vocab: FragmentVocabulary,
    scaler: DescriptorScaler | None = None,
) -> EvalMetrics:
    """Intrinsic and train-relative metrics of one generated batch.

    train_set holds canonical SMILES of the training data; lead_set is the
    reference for the Fréchet distance (None when either side has fewer
    than two molecules).
    """
    if not batch.molecules:
        raise EmptyBatchError("batch has no molecules")
    train = set(train_set)
    total = len(batch.molecules)
    valid = [m for m in batch.molecules if m.is_valid and m.canonical]

    validity = len(valid) / total
    if valid:
        canonicals = [m.canonical for m in valid]
        uniqueness = len(set(canonicals)) / len(valid)
        novelty = sum(1 for c in canonicals if c not in train) / len(valid)
    else:
        uniqueness = 0.0
        novelty = 0.0

    valid_mols = [parse_smiles(m.canonical) for m in valid]
    diversity = internal_diversity(valid_mols)

    mean_dice = 0.0
    max_dice = 0.0
    if valid_mols and train:
        train_fps = [circular_fingerprint(parse_smiles(s)) for s in sorted(train)]
        nearest = []
        for mol in valid_mols:
            fp = circular_fingerprint(mol)
            nearest.append(max(dice_similarity(fp, t) for t in train_fps))
        mean_dice = sum(nearest) / len(nearest)
        max_dice = max(nearest)

    fcd = None
    if len(valid_mols) >= 2 and len(lead_set) >= 2:
        fcd = frechet_distance(valid_mols, lead_set, vocab, scaler=scaler)

    return EvalMetrics(
        validity_rate=validity,
        uniqueness_rate=uniqueness,
        novelty_rate=novelty,
        internal_diversity=diversity,
        mean_dice_to_train=mean_dice,
        max_dice_to_train=max_dice,
        frechet_distance=fcd,
    )
