"""The three feature views plus similarity and clustering utilities."""

from dataclasses import dataclass

import numpy as np

from leadopt.features.cluster import butina_cluster
from leadopt.features.descriptors import (
    DESCRIPTOR_NAMES,
    SCHEMA_ID,
    DescriptorVector,
    descriptor_vector,
)
from leadopt.features.embedding import mol2vec_embed
from leadopt.features.estimators import (
    DescriptorFeaturizer,
    Mol2VecVectorizer,
    MorganFingerprinter,
    as_molgraphs,
)
from leadopt.features.fingerprint import (
    Fingerprint,
    circular_fingerprint,
    dice_similarity,
    tanimoto_similarity,
)
from leadopt.features.vocab import (
    FragmentVocabulary,
    build_fragment_vocabulary,
    rebuild_like,
)
from leadopt.molgraph import MolGraph


@dataclass(frozen=True)
class FeatureViews:
    """The (fingerprint, descriptors, embedding) triple for one molecule."""

    fingerprint: Fingerprint
    descriptors: DescriptorVector
    embedding: np.ndarray


def feature_views(mol: MolGraph, vocab: FragmentVocabulary) -> FeatureViews:
    return FeatureViews(
        fingerprint=circular_fingerprint(mol),
        descriptors=descriptor_vector(mol),
        embedding=mol2vec_embed(mol, vocab),
    )


__all__ = [
    "DESCRIPTOR_NAMES",
    "SCHEMA_ID",
    "DescriptorFeaturizer",
    "DescriptorVector",
    "FeatureViews",
    "Fingerprint",
    "FragmentVocabulary",
    "Mol2VecVectorizer",
    "MorganFingerprinter",
    "as_molgraphs",
    "build_fragment_vocabulary",
    "butina_cluster",
    "circular_fingerprint",
    "descriptor_vector",
    "dice_similarity",
    "feature_views",
    "mol2vec_embed",
    "rebuild_like",
    "tanimoto_similarity",
]
