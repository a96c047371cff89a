"""Three-view consensus activity prediction.

One boosted-tree model per feature view (fingerprint bits, descriptors,
fragment embeddings), trained independently on the same labelled molecules.
The consensus prediction is the arithmetic mean of the three per-view
predictions; the campaign filter additionally requires every view to clear
the cutoff.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from leadopt.errors import ValidationError
from leadopt.features import FragmentVocabulary, MorganFingerprinter
from leadopt.features.descriptors import descriptor_vector
from leadopt.features.embedding import mol2vec_embed
from leadopt.molgraph import MolGraph
from leadopt.qsar.gbt import GbtModel, GbtParams, predict_many, train_gbt

VIEWS = ("fingerprint", "descriptor", "embedding")

_MODEL_SCHEMA = "leadopt-ensemble-v1"


def view_features(
    molecules: list[MolGraph], vocab: FragmentVocabulary
) -> dict[str, np.ndarray]:
    """Feature matrices for all three views over the same molecules."""
    fp = MorganFingerprinter().transform(molecules)
    desc = np.stack([descriptor_vector(m).as_array() for m in molecules])
    emb = np.stack([mol2vec_embed(m, vocab) for m in molecules])
    return {"fingerprint": fp, "descriptor": desc, "embedding": emb}


@dataclass
class EnsemblePredictor:
    models: dict[str, GbtModel]
    vocab: FragmentVocabulary

    def __post_init__(self) -> None:
        if sorted(self.models) != sorted(VIEWS):
            raise ValidationError(f"ensemble needs exactly the views {VIEWS}")

    def save(self, path: str | Path) -> None:
        payload = {
            "schema": _MODEL_SCHEMA,
            "models": {view: m.to_dict() for view, m in self.models.items()},
        }
        Path(path).write_text(json.dumps(payload))

    @classmethod
    def load(cls, path: str | Path, vocab: FragmentVocabulary) -> "EnsemblePredictor":
        payload = json.loads(Path(path).read_text())
        if payload.get("schema") != _MODEL_SCHEMA:
            raise ValidationError(f"not an ensemble model file: {path}")
        models = {v: GbtModel.from_dict(d) for v, d in payload["models"].items()}
        return cls(models=models, vocab=vocab)


def train_ensemble(
    molecules: list[MolGraph],
    labels,
    vocab: FragmentVocabulary,
    params: GbtParams,
) -> EnsemblePredictor:
    """Train the three view models independently on the same labelled set."""
    features = view_features(molecules, vocab)
    models = {
        view: train_gbt(features[view], labels, params, feature_view=view)
        for view in VIEWS
    }
    return EnsemblePredictor(models=models, vocab=vocab)


def consensus_predict(
    ens: EnsemblePredictor, mol: MolGraph
) -> tuple[dict[str, float], float]:
    """Per-view predictions and their arithmetic mean."""
    triple = consensus_predict_batch(ens, [mol])
    per_view = {view: triple[0][view] for view in VIEWS}
    return per_view, float(np.mean([per_view[v] for v in VIEWS]))


def consensus_predict_batch(
    ens: EnsemblePredictor, molecules: list[MolGraph]
) -> list[dict[str, float]]:
    features = view_features(molecules, ens.vocab)
    preds = {view: predict_many(ens.models[view], features[view]) for view in VIEWS}
    return [
        {view: float(preds[view][i]) for view in VIEWS}
        for i in range(len(molecules))
    ]


def consensus_mean(per_view: dict[str, float]) -> float:
    return float(np.mean([per_view[v] for v in VIEWS]))
