"""Robust extraction of JSON payloads from backend responses.

Hosted models wrap JSON in prose, so extraction scans for the first
well-formed top-level array (generation) or object (prediction) rather than
expecting a clean body. Parsing never raises on arbitrary text: the result
is a GeneratedBatch or a structured MalformedResponseError carrying the raw
text for audit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from leadopt.errors import (
    MalformedResponseError,
    NonNumericActivityError,
    SmilesError,
)
from leadopt.fragments import stable_hash64
from leadopt.molgraph import parse_smiles, to_canonical

VALID = "valid"
PARSE_ERROR = "parse_error"
MULTI_FRAGMENT = "multi_fragment"
SCHEMA_ERROR = "schema_error"


@dataclass
class GeneratedMolecule:
    smiles: str
    status: str
    canonical: str | None = None
    error: str | None = None
    duplicate: bool = False

    @property
    def is_valid(self) -> bool:
        return self.status == VALID


@dataclass
class GeneratedBatch:
    raw_response: str
    molecules: list[GeneratedMolecule] = field(default_factory=list)
    request_fingerprint: str = ""
    truncated_examples: int = 0

    @property
    def valid_molecules(self) -> list[GeneratedMolecule]:
        return [m for m in self.molecules if m.is_valid]


def prompt_fingerprint(prompt: str) -> str:
    return format(stable_hash64(prompt.encode("utf-8")), "016x")


def extract_json_array(text: str) -> list:
    """First well-formed top-level JSON array found by bracket scan."""
    decoder = json.JSONDecoder()
    pos = text.find("[")
    while pos != -1:
        try:
            value, _ = decoder.raw_decode(text, pos)
        except ValueError:
            pass
        else:
            if isinstance(value, list):
                return value
        pos = text.find("[", pos + 1)
    raise MalformedResponseError("no JSON array found in response", raw_text=text)


def extract_json_object(text: str) -> dict:
    """First well-formed top-level JSON object found by bracket scan."""
    decoder = json.JSONDecoder()
    pos = text.find("{")
    while pos != -1:
        try:
            value, _ = decoder.raw_decode(text, pos)
        except ValueError:
            pass
        else:
            if isinstance(value, dict):
                return value
        pos = text.find("{", pos + 1)
    raise MalformedResponseError("no JSON object found in response", raw_text=text)


def classify_smiles(smiles: str) -> GeneratedMolecule:
    try:
        mol = parse_smiles(smiles)
    except SmilesError as exc:
        return GeneratedMolecule(smiles=smiles, status=PARSE_ERROR, error=str(exc))
    if mol.fragment_count > 1:
        return GeneratedMolecule(
            smiles=smiles,
            status=MULTI_FRAGMENT,
            error="multi-fragment molecules are invalid for design",
        )
    return GeneratedMolecule(smiles=smiles, status=VALID, canonical=to_canonical(mol))


def parse_generation_response(raw: str, prompt: str) -> GeneratedBatch:
    """Parse a generation response; entries stay in response order and
    invalid or duplicate entries are retained with their status."""
    entries = extract_json_array(raw)
    batch = GeneratedBatch(raw_response=raw, request_fingerprint=prompt_fingerprint(prompt))
    seen: set[str] = set()
    for entry in entries:
        if not isinstance(entry, dict) or not isinstance(entry.get("smiles"), str):
            batch.molecules.append(GeneratedMolecule(
                smiles="",
                status=SCHEMA_ERROR,
                error=f"entry without a smiles field: {entry!r}",
            ))
            continue
        mol = classify_smiles(entry["smiles"])
        if mol.canonical is not None:
            if mol.canonical in seen:
                mol.duplicate = True
            seen.add(mol.canonical)
        batch.molecules.append(mol)
    return batch


def parse_prediction_response(raw: str) -> float:
    obj = extract_json_object(raw)
    if "activity" not in obj:
        raise NonNumericActivityError(
            "response object has no activity field", raw_text=raw
        )
    value = obj["activity"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NonNumericActivityError(
            f"activity field is not numeric: {value!r}", raw_text=raw
        )
    return float(value)
