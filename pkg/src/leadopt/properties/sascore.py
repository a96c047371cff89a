"""Synthesis-difficulty score in [1, 10] (lower = easier).

Follows the Ertl–Schuffenhauer construction: a fragment-frequency score from
circular-fragment log-likelihoods against a reference corpus, minus
complexity penalties (size, ring fusion, macrocycles, stereo centres),
affinely rescaled to [1, 10]. The rescale anchors are percentiles of the raw
score over the reference corpus, computed at vocabulary-build time and
persisted with the vocabulary — the original publication's constants are
tied to its own corpus and are not reused here.
"""

from __future__ import annotations

import math
from typing import Protocol

from leadopt.errors import EmptyVocabularyError
from leadopt.fragments import fragment_tokens
from leadopt.molgraph import MolGraph

# Log-likelihood assigned to fragments absent from the reference corpus.
UNKNOWN_FRAGMENT_SCORE = -4.0

# Smallest hi-lo span for the affine rescale; guards degenerate corpora.
MIN_ANCHOR_SPAN = 6.0


class FragmentStats(Protocol):
    radius: int
    sa_hi: float
    sa_lo: float

    @property
    def frequencies(self) -> dict[int, int]: ...


def raw_synthesis_score(mol: MolGraph, stats: FragmentStats) -> float:
    """Unscaled score: fragment log-likelihood minus complexity penalties.

    Higher raw values mean easier synthesis; the public score inverts and
    rescales this.
    """
    freqs = stats.frequencies
    if not freqs:
        raise EmptyVocabularyError("fragment statistics are empty")
    max_freq = max(freqs.values())

    tokens = fragment_tokens(mol, stats.radius)
    fragment_score = sum(
        math.log10(freqs[t] / max_freq) if t in freqs else UNKNOWN_FRAGMENT_SCORE
        for t in tokens
    ) / len(tokens)

    n_heavy = len(mol.atoms)
    size_penalty = n_heavy ** 1.005 - n_heavy

    membership = [0] * n_heavy
    for ring in mol.rings:
        for idx in ring:
            membership[idx] += 1
    fusion_penalty = math.log10(1 + sum(1 for m in membership if m > 1))

    macrocycle_penalty = math.log10(2) if any(len(r) > 8 for r in mol.rings) else 0.0
    stereo_penalty = math.log10(1 + sum(1 for a in mol.atoms if a.stereo))

    return (
        fragment_score
        - size_penalty
        - fusion_penalty
        - macrocycle_penalty
        - stereo_penalty
    )


def rescale_anchors(raw_scores: list[float]) -> tuple[float, float]:
    """(hi, lo) anchors: 99th/1st percentile with a minimum span."""
    ordered = sorted(raw_scores)
    n = len(ordered)

    def pct(p: float) -> float:
        rank = p / 100.0 * (n - 1)
        below = int(rank)
        frac = rank - below
        if below + 1 >= n:
            return ordered[-1]
        return ordered[below] + frac * (ordered[below + 1] - ordered[below])

    hi, lo = pct(99.0), pct(1.0)
    if hi - lo < MIN_ANCHOR_SPAN:
        lo = hi - MIN_ANCHOR_SPAN
    return hi, lo


def sa_score(mol: MolGraph, fragment_stats: FragmentStats) -> float:
    """Score in [1, 10]; 1 = fragments ubiquitous in the corpus, no penalties."""
    raw = raw_synthesis_score(mol, fragment_stats)
    hi, lo = fragment_stats.sa_hi, fragment_stats.sa_lo
    score = 1.0 + 9.0 * (hi - raw) / (hi - lo)
    return min(10.0, max(1.0, score))
