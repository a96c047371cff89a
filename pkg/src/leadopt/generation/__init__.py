"""Prompt building, generator backends, and response handling."""

from leadopt.generation.backends import (
    AuditLog,
    GeneratorBackendConfig,
    MockBackend,
    RemoteBackend,
    ScriptedBackend,
    complete_with_retries,
    generate_batch,
    make_backend,
)
from leadopt.generation.mock import mock_generate
from leadopt.generation.modify import ModificationResult, icl_predict_activity, modify_molecule
from leadopt.generation.parsing import (
    GeneratedBatch,
    GeneratedMolecule,
    classify_smiles,
    parse_generation_response,
    parse_prediction_response,
    prompt_fingerprint,
)
from leadopt.generation.prompts import (
    GENERATION_SCHEMA_NOTE,
    MODIFY_SCHEMA_NOTE,
    PREDICTION_SCHEMA_NOTE,
    PromptExample,
    PromptSpec,
    build_generation_prompt,
    build_modify_prompt,
    build_prediction_prompt,
    truncate_to_budget,
)

__all__ = [
    "AuditLog",
    "GENERATION_SCHEMA_NOTE",
    "GeneratedBatch",
    "GeneratedMolecule",
    "GeneratorBackendConfig",
    "MODIFY_SCHEMA_NOTE",
    "MockBackend",
    "ModificationResult",
    "PREDICTION_SCHEMA_NOTE",
    "PromptExample",
    "PromptSpec",
    "RemoteBackend",
    "ScriptedBackend",
    "build_generation_prompt",
    "build_modify_prompt",
    "build_prediction_prompt",
    "classify_smiles",
    "complete_with_retries",
    "generate_batch",
    "icl_predict_activity",
    "make_backend",
    "mock_generate",
    "modify_molecule",
    "parse_generation_response",
    "parse_prediction_response",
    "prompt_fingerprint",
    "truncate_to_budget",
]
