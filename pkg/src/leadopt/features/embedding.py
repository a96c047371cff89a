"""Molecule embeddings: the mean of fragment-token vectors."""

from __future__ import annotations

import logging

import numpy as np

from leadopt.errors import EmptyVocabularyError, NoTokensError
from leadopt.features.vocab import FragmentVocabulary
from leadopt.fragments import fragment_tokens
from leadopt.molgraph import MolGraph

log = logging.getLogger(__name__)


def mol2vec_embed(mol: MolGraph, vocab: FragmentVocabulary) -> np.ndarray:
    """Average the vocabulary vectors of the molecule's fragment tokens.

    Out-of-vocabulary tokens map to the zero vector so the mean stays
    well-defined for novel generated fragments.
    """
    if len(vocab) == 0:
        raise EmptyVocabularyError("embedding needs a non-empty vocabulary")
    tokens = fragment_tokens(mol, vocab.radius)
    if not tokens:
        raise NoTokensError("molecule produced no fragment tokens")
    total = np.zeros(vocab.dim, dtype=np.float64)
    known = 0
    for t in tokens:
        vec = vocab.vector(t)
        if vec is not None:
            total += vec
            known += 1
    if known == 0:
        log.warning("all %d fragment tokens out of vocabulary", len(tokens))
    return total / len(tokens)
