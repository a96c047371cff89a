"""Scikit-learn style featurizers.

Thin estimator wrappers over the functional featurization ops so the three
feature views compose with pipelines, grid search, and the rest of the
sklearn ecosystem. Inputs may be MolGraph objects or SMILES strings; strings
are parsed on the fly.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from leadopt.features.descriptors import descriptor_vector
from leadopt.features.embedding import mol2vec_embed
from leadopt.features.fingerprint import DEFAULT_NBITS, DEFAULT_RADIUS, circular_fingerprint
from leadopt.features.vocab import (
    DEFAULT_DIM,
    DEFAULT_EPOCHS,
    FragmentVocabulary,
    build_fragment_vocabulary,
)
from leadopt.molgraph import MolGraph, parse_smiles


def as_molgraphs(X) -> list[MolGraph]:
    """Input validation: coerce an iterable of SMILES/MolGraph to graphs."""
    mols = []
    for item in X:
        if isinstance(item, MolGraph):
            mols.append(item)
        elif isinstance(item, str):
            mols.append(parse_smiles(item))
        else:
            raise TypeError(f"expected MolGraph or SMILES string, got {type(item)!r}")
    return mols


class MorganFingerprinter(BaseEstimator, TransformerMixin):
    """Stateless transformer: molecules to dense 0/1 fingerprint rows."""

    def __init__(self, radius: int = DEFAULT_RADIUS, nbits: int = DEFAULT_NBITS):
        self.radius = radius
        self.nbits = nbits

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        mols = as_molgraphs(X)
        return np.stack([
            circular_fingerprint(m, self.radius, self.nbits).to_array()
            for m in mols
        ])


class DescriptorFeaturizer(BaseEstimator, TransformerMixin):
    """Stateless transformer: molecules to the registered descriptor rows."""

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        return np.stack([descriptor_vector(m).as_array() for m in as_molgraphs(X)])


class Mol2VecVectorizer(BaseEstimator, TransformerMixin):
    """Fit builds a fragment vocabulary; transform averages token vectors."""

    def __init__(
        self,
        radius: int = DEFAULT_RADIUS,
        dim: int = DEFAULT_DIM,
        seed: int = 0,
        epochs: int = DEFAULT_EPOCHS,
        vocabulary: FragmentVocabulary | None = None,
    ):
        self.radius = radius
        self.dim = dim
        self.seed = seed
        self.epochs = epochs
        self.vocabulary = vocabulary

    def fit(self, X, y=None):
        if self.vocabulary is not None:
            self.vocabulary_ = self.vocabulary
        else:
            self.vocabulary_ = build_fragment_vocabulary(
                as_molgraphs(X),
                radius=self.radius,
                dim=self.dim,
                seed=self.seed,
                epochs=self.epochs,
            )
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("Mol2VecVectorizer is not fitted")
        return np.stack([
            mol2vec_embed(m, self.vocabulary_) for m in as_molgraphs(X)
        ])
