"""Binary circular fingerprints and set-overlap similarities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leadopt.errors import LengthMismatchError, ValidationError
from leadopt.fragments import fingerprint_identifiers
from leadopt.molgraph import MolGraph

DEFAULT_RADIUS = 3
DEFAULT_NBITS = 2048


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-length bit vector stored as an int mask."""

    mask: int
    nbits: int
    radius: int

    def __post_init__(self) -> None:
        if self.nbits <= 0 or self.nbits & (self.nbits - 1):
            raise ValidationError("fingerprint length must be a power of two")

    @property
    def set_count(self) -> int:
        return self.mask.bit_count()

    @property
    def bits(self) -> set[int]:
        return {i for i in range(self.nbits) if self.mask >> i & 1}

    def to_hex(self) -> str:
        return format(self.mask, f"0{self.nbits // 4}x")

    @classmethod
    def from_hex(cls, text: str, radius: int = DEFAULT_RADIUS) -> "Fingerprint":
        return cls(mask=int(text, 16), nbits=len(text) * 4, radius=radius)

    @classmethod
    def from_bits(cls, bits, nbits: int, radius: int = DEFAULT_RADIUS) -> "Fingerprint":
        mask = 0
        for b in bits:
            mask |= 1 << (b % nbits)
        return cls(mask=mask, nbits=nbits, radius=radius)

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.nbits, dtype=np.float64)
        mask = self.mask
        while mask:
            low = mask & -mask
            out[low.bit_length() - 1] = 1.0
            mask ^= low
        return out


def circular_fingerprint(
    mol: MolGraph,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> Fingerprint:
    """Fold deduplicated environment identifiers modulo nbits and OR them."""
    if radius < 0:
        raise ValidationError("radius must be non-negative")
    identifiers = fingerprint_identifiers(mol, radius)
    mask = 0
    for ident in identifiers:
        mask |= 1 << (ident % nbits)
    return Fingerprint(mask=mask, nbits=nbits, radius=radius)


def _check_lengths(a: Fingerprint, b: Fingerprint) -> None:
    if a.nbits != b.nbits:
        raise LengthMismatchError(
            f"fingerprint lengths differ ({a.nbits} vs {b.nbits})"
        )


def dice_similarity(a: Fingerprint, b: Fingerprint) -> float:
    """2|a&b| / (|a|+|b|); defined as 1 when both fingerprints are empty."""
    _check_lengths(a, b)
    total = a.set_count + b.set_count
    if total == 0:
        return 1.0
    return 2.0 * (a.mask & b.mask).bit_count() / total


def tanimoto_similarity(a: Fingerprint, b: Fingerprint) -> float:
    """|a&b| / |a|b|; defined as 1 when both fingerprints are empty."""
    _check_lengths(a, b)
    union = (a.mask | b.mask).bit_count()
    if union == 0:
        return 1.0
    return (a.mask & b.mask).bit_count() / union
