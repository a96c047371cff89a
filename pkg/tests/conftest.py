"""Shared fixtures: small corpora and pre-trained assets reused across tests."""

import random

import pytest

from helpers import random_corpus, synthetic_dataset
from leadopt.campaign import DescriptorScaler
from leadopt.features import build_fragment_vocabulary
from leadopt.molgraph import parse_smiles
from leadopt.qsar import GbtParams, train_ensemble


@pytest.fixture(scope="session")
def small_corpus():
    return [parse_smiles(s) for s in random_corpus(17, 40)]


@pytest.fixture(scope="session")
def small_vocab(small_corpus):
    return build_fragment_vocabulary(small_corpus, radius=2, dim=16, seed=1, epochs=2)


@pytest.fixture(scope="session")
def campaign_dataset():
    return synthetic_dataset(3, 120, noise=0.25)


CAMPAIGN_GBT = GbtParams(n_trees=120, max_depth=3, learning_rate=0.1)


@pytest.fixture(scope="session")
def campaign_vocab(campaign_dataset):
    from leadopt.generation.mutations import mutate_molecule

    mols = [parse_smiles(r.smiles) for r in campaign_dataset.records]
    rng = random.Random(0)
    corpus = list(mols)
    for m in mols:
        for _ in range(2):
            corpus.append(mutate_molecule(m, rng, 2)[0])
    return build_fragment_vocabulary(corpus, radius=1, dim=32, seed=0, epochs=2)


@pytest.fixture(scope="session")
def campaign_ensemble(campaign_dataset, campaign_vocab):
    mols = [parse_smiles(r.smiles) for r in campaign_dataset.records]
    labels = [r.activity for r in campaign_dataset.records]
    return train_ensemble(mols, labels, campaign_vocab, CAMPAIGN_GBT)


@pytest.fixture(scope="session")
def lead_scaler(campaign_dataset):
    mols = [parse_smiles(r.smiles) for r in campaign_dataset.records[:30]]
    return DescriptorScaler.fit(mols)
