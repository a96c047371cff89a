"""Single-molecule operations against a backend: ICL activity prediction
and text-instruction modification."""

from __future__ import annotations

from leadopt.errors import MalformedResponseError

from dataclasses import dataclass, field

from leadopt.generation.backends import (
    AuditLog,
    GeneratorBackendConfig,
    complete_with_retries,
    make_backend,
)
from leadopt.generation.parsing import (
    classify_smiles,
    extract_json_object,
    parse_prediction_response,
)
from leadopt.generation.prompts import build_modify_prompt, build_prediction_prompt
from leadopt.molgraph import parse_smiles, to_canonical
from leadopt.properties import crippen_logp, ertl_tpsa, molecular_weight, sa_score


def icl_predict_activity(
    config: GeneratorBackendConfig,
    examples,
    query: str,
    audit: AuditLog | None = None,
    backend=None,
) -> float:
    """Predict activity for one molecule via a many-shot prompt."""
    engine = backend if backend is not None else make_backend(config, temperature=0.0)
    prompt = build_prediction_prompt(examples, query)
    raw = complete_with_retries(
        engine, prompt,
        max_retries=config.max_retries,
        backoff=config.backoff,
        audit=audit,
    )
    return parse_prediction_response(raw)


@dataclass
class ModificationResult:
    input_smiles: str
    output_smiles: str
    valid: bool
    canonical: str | None = None
    error: str | None = None
    input_properties: dict[str, float] = field(default_factory=dict)
    output_properties: dict[str, float] = field(default_factory=dict)
    deltas: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "input_smiles": self.input_smiles,
            "output_smiles": self.output_smiles,
            "valid": self.valid,
            "canonical": self.canonical,
            "error": self.error,
            "input_properties": self.input_properties,
            "output_properties": self.output_properties,
            "deltas": self.deltas,
        }


def _properties(mol, fragment_stats=None) -> dict[str, float]:
    out = {
        "molecular_weight": molecular_weight(mol),
        "logp": crippen_logp(mol),
        "tpsa": ertl_tpsa(mol),
    }
    if fragment_stats is not None:
        out["sa_score"] = sa_score(mol, fragment_stats)
    return out


def modify_molecule(
    config: GeneratorBackendConfig,
    molecule: str,
    instruction: str,
    context_examples: list[tuple[str, dict[str, float]]] | None = None,
    fragment_stats=None,
    audit: AuditLog | None = None,
    backend=None,
) -> ModificationResult:
    """Ask the backend for a modification and report property deltas.

    Invalid results come back with valid=False and the parser error; they
    are never silently dropped. The input molecule must parse.
    """
    input_mol = parse_smiles(molecule)
    engine = backend if backend is not None else make_backend(config)
    prompt = build_modify_prompt(molecule, instruction, context_examples)
    raw = complete_with_retries(
        engine, prompt,
        max_retries=config.max_retries,
        backoff=config.backoff,
        audit=audit,
    )
    obj = extract_json_object(raw)
    if not isinstance(obj.get("smiles"), str):
        raise MalformedResponseError(
            "modification response has no smiles field", raw_text=raw
        )

    result = ModificationResult(
        input_smiles=to_canonical(input_mol),
        output_smiles=obj["smiles"],
        valid=False,
        input_properties=_properties(input_mol, fragment_stats),
    )
    verdict = classify_smiles(obj["smiles"])
    if not verdict.is_valid:
        result.error = verdict.error
        return result

    out_mol = parse_smiles(obj["smiles"])
    result.valid = True
    result.canonical = verdict.canonical
    result.output_properties = _properties(out_mol, fragment_stats)
    result.deltas = {
        key: result.output_properties[key] - result.input_properties[key]
        for key in result.input_properties
        if key in result.output_properties
    }
    return result
