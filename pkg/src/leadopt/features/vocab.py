"""Fragment vocabulary: corpus statistics plus learned embeddings.

The vocabulary maps circular-environment identifiers to corpus frequencies
and to vectors trained with a small skip-gram with negative sampling (SGNS)
over per-molecule token sequences, the desk-scale analogue of a pre-trained
fragment embedding. Training is fully deterministic under the stored seed.
The rescale anchors for the synthesis-difficulty score are computed from the
same corpus at build time and persisted alongside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from leadopt.errors import EmptyCorpusError, ValidationError
from leadopt.fragments import fragment_tokens
from leadopt.molgraph import MolGraph
from leadopt.properties.sascore import raw_synthesis_score, rescale_anchors

SCHEMA = "leadopt-vocab-v1"

DEFAULT_DIM = 128
DEFAULT_EPOCHS = 5
DEFAULT_NEGATIVES = 5
DEFAULT_LEARNING_RATE = 0.025

_CHUNK = 4096


@dataclass
class FragmentVocabulary:
    radius: int
    dim: int
    seed: int
    epochs: int
    negatives: int
    corpus_size: int
    fragment_ids: list[int]            # row order
    counts: list[int]                  # aligned with fragment_ids
    vectors: np.ndarray                # (V, dim)
    sa_hi: float = 0.0
    sa_lo: float = -6.0
    _index: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {f: i for i, f in enumerate(self.fragment_ids)}

    def __len__(self) -> int:
        return len(self.fragment_ids)

    def __contains__(self, fragment_id: int) -> bool:
        return fragment_id in self._index

    @property
    def frequencies(self) -> dict[int, int]:
        return {f: c for f, c in zip(self.fragment_ids, self.counts)}

    def frequency(self, fragment_id: int) -> int:
        row = self._index.get(fragment_id)
        return 0 if row is None else self.counts[row]

    def vector(self, fragment_id: int) -> np.ndarray | None:
        row = self._index.get(fragment_id)
        return None if row is None else self.vectors[row]

    # -- persistence -----------------------------------------------------

    def save(self, path: str | Path) -> None:
        payload = {
            "schema": SCHEMA,
            "radius": self.radius,
            "dim": self.dim,
            "seed": self.seed,
            "epochs": self.epochs,
            "negatives": self.negatives,
            "corpus_size": self.corpus_size,
            "sa_hi": self.sa_hi,
            "sa_lo": self.sa_lo,
            "fragments": [[str(f), c] for f, c in zip(self.fragment_ids, self.counts)],
            "vectors": [[float(x) for x in row] for row in self.vectors],
        }
        Path(path).write_text(json.dumps(payload))

    @classmethod
    def load(cls, path: str | Path) -> "FragmentVocabulary":
        payload = json.loads(Path(path).read_text())
        if payload.get("schema") != SCHEMA:
            raise ValidationError(f"not a fragment vocabulary file: {path}")
        return cls(
            radius=payload["radius"],
            dim=payload["dim"],
            seed=payload["seed"],
            epochs=payload["epochs"],
            negatives=payload["negatives"],
            corpus_size=payload["corpus_size"],
            fragment_ids=[int(f) for f, _ in payload["fragments"]],
            counts=[c for _, c in payload["fragments"]],
            vectors=np.asarray(payload["vectors"], dtype=np.float64),
            sa_hi=payload["sa_hi"],
            sa_lo=payload["sa_lo"],
        )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


# Context positions sampled per token position and epoch. The window spans
# the whole molecule; sampling keeps the update count linear in sentence
# length, which both bounds runtime and keeps hub-token vectors stable on
# large molecules (full O(L^2) pair enumeration makes batched updates of
# repeated tokens overshoot and blow up).
_CONTEXTS_PER_CENTER = 4


def _train_sgns(
    sentences: list[np.ndarray],
    vocab_size: int,
    counts: np.ndarray,
    dim: int,
    seed: int,
    epochs: int,
    negatives: int,
    learning_rate: float,
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    w_in = (rng.random((vocab_size, dim)) - 0.5) / dim
    w_out = np.zeros((vocab_size, dim))

    weights = counts.astype(np.float64) ** 0.75
    cumulative = np.cumsum(weights / weights.sum())

    for epoch in range(epochs):
        lr = learning_rate * max(0.1, 1.0 - epoch / max(1, epochs))
        for sent in sentences:
            length = len(sent)
            if length < 2:
                continue
            # Window is the whole molecule: contexts are sampled uniformly
            # from all other positions in the sentence.
            k = min(_CONTEXTS_PER_CENTER, length - 1)
            idx = np.repeat(np.arange(length), k)
            offsets = rng.integers(1, length, size=len(idx))
            ctx_idx = (idx + offsets) % length
            centers = sent[idx]
            contexts = sent[ctx_idx]

            for lo in range(0, len(centers), _CHUNK):
                ctr = centers[lo:lo + _CHUNK]
                ctx = contexts[lo:lo + _CHUNK]
                neg = np.searchsorted(
                    cumulative, rng.random((len(ctr), negatives))
                ).astype(np.int64)

                w = w_in[ctr]
                c = w_out[ctx]
                g_pos = lr * (1.0 - _sigmoid(np.einsum("nd,nd->n", w, c)))
                cn = w_out[neg]
                g_neg = -lr * _sigmoid(np.einsum("nd,nkd->nk", w, cn))

                dw = g_pos[:, None] * c + np.einsum("nk,nkd->nd", g_neg, cn)
                np.add.at(w_in, ctr, dw)
                np.add.at(w_out, ctx, g_pos[:, None] * w)
                np.add.at(
                    w_out,
                    neg.ravel(),
                    (g_neg[:, :, None] * w[:, None, :]).reshape(-1, dim),
                )
    return w_in


def build_fragment_vocabulary(
    corpus: list[MolGraph],
    radius: int = 3,
    dim: int = DEFAULT_DIM,
    seed: int = 0,
    epochs: int = DEFAULT_EPOCHS,
    negatives: int = DEFAULT_NEGATIVES,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> FragmentVocabulary:
    """Count fragments, train embeddings, and fix the SA rescale anchors."""
    if not corpus:
        raise EmptyCorpusError("vocabulary needs a non-empty corpus")

    token_lists = [fragment_tokens(mol, radius) for mol in corpus]
    freq: dict[int, int] = {}
    for tokens in token_lists:
        for t in tokens:
            freq[t] = freq.get(t, 0) + 1

    fragment_ids = sorted(freq)
    index = {f: i for i, f in enumerate(fragment_ids)}
    counts = np.asarray([freq[f] for f in fragment_ids], dtype=np.int64)
    sentences = [
        np.asarray([index[t] for t in tokens], dtype=np.int64)
        for tokens in token_lists
    ]

    vectors = _train_sgns(
        sentences, len(fragment_ids), counts, dim, seed, epochs, negatives,
        learning_rate,
    )

    vocab = FragmentVocabulary(
        radius=radius,
        dim=dim,
        seed=seed,
        epochs=epochs,
        negatives=negatives,
        corpus_size=len(corpus),
        fragment_ids=fragment_ids,
        counts=[int(c) for c in counts],
        vectors=vectors,
    )
    raw_scores = [raw_synthesis_score(mol, vocab) for mol in corpus]
    vocab.sa_hi, vocab.sa_lo = rescale_anchors(raw_scores)
    return vocab


def rebuild_like(template: FragmentVocabulary, corpus: list[MolGraph]) -> FragmentVocabulary:
    """Fresh vocabulary over a new corpus with the template's build settings."""
    return build_fragment_vocabulary(
        corpus,
        radius=template.radius,
        dim=template.dim,
        seed=template.seed,
        epochs=template.epochs,
        negatives=template.negatives,
    )
