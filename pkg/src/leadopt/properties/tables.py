"""Contribution-table loading.

All tables ship as delimited text under properties/data with provenance
comments; alternate paths can be supplied for any loader, so deployments can
swap tables without code changes.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


def _data_text(filename: str, path: str | Path | None) -> str:
    if path is not None:
        return Path(path).read_text()
    return (resources.files("leadopt.properties") / "data" / filename).read_text()


def _rows(text: str) -> list[list[str]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line.split("\t"))
    return out


@lru_cache(maxsize=8)
def _atomic_weights_cached(path: str | None) -> dict[str, float]:
    return {row[0]: float(row[1]) for row in _rows(_data_text("atomic_weights.tsv", path))}


def atomic_weights(path: str | Path | None = None) -> dict[str, float]:
    return _atomic_weights_cached(str(path) if path is not None else None)


@lru_cache(maxsize=8)
def _crippen_cached(path: str | None) -> dict[str, float]:
    return {row[0]: float(row[1]) for row in _rows(_data_text("crippen.tsv", path))}


def crippen_contributions(path: str | Path | None = None) -> dict[str, float]:
    """type code -> logP contribution."""
    return _crippen_cached(str(path) if path is not None else None)


@lru_cache(maxsize=8)
def _tpsa_cached(path: str | None) -> tuple[tuple[tuple[str, ...], float], ...]:
    out = []
    for row in _rows(_data_text("tpsa.tsv", path)):
        out.append((tuple(row[0].split(";")), float(row[1])))
    return tuple(out)


def tpsa_patterns(path: str | Path | None = None) -> tuple[tuple[tuple[str, ...], float], ...]:
    """Ordered (pattern fields, contribution) rows; first match wins."""
    return _tpsa_cached(str(path) if path is not None else None)
