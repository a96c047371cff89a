"""Configuration file handling.

The config file is JSON mirroring CampaignConfig, with the backend nested
under "backend". Any subset of fields may be given; the rest fall back to
defaults. The backend auth token is never stored in the file — only the name
of the environment variable that holds it.
"""

from __future__ import annotations

import json
from pathlib import Path

from leadopt.campaign import CampaignConfig
from leadopt.generation import GeneratorBackendConfig
from leadopt.properties import ConditionSpec
from leadopt.qsar import GbtParams


def load_config(path: str | Path | None, seed: int | None = None) -> CampaignConfig:
    """CampaignConfig from a JSON file; `seed` overrides the file value."""
    data: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text())
    defaults = CampaignConfig().to_dict()
    merged = {**defaults, **data}
    if seed is not None:
        merged["seed"] = seed
        backend = dict(merged.get("backend") or {})
        if backend.get("kind", "mock") == "mock":
            backend["seed"] = seed
            merged["backend"] = {**GeneratorBackendConfig().to_dict(), **backend}
    merged["conditions"] = [
        c if isinstance(c, dict) else c for c in merged.get("conditions", [])
    ]
    # normalize nested sections that may be partial
    merged["backend"] = {**GeneratorBackendConfig().to_dict(), **(merged.get("backend") or {})}
    merged["gbt"] = {**GbtParams().to_dict(), **(merged.get("gbt") or {})}
    return CampaignConfig.from_dict(merged)


def conditions_from_dicts(data: list[dict]) -> tuple[ConditionSpec, ...]:
    return tuple(ConditionSpec.from_dict(d) for d in data)
