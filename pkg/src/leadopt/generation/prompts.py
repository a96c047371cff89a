"""Many-shot prompt construction.

Prompts are deterministic text: instructions, one line per example (SMILES,
activity, and extra property labels only when requested), the rendered
design conditions, the lead molecule, and a JSON output-schema note. Section
headers double as parse anchors for the offline mock backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from leadopt.errors import ValidationError
from leadopt.properties import ConditionSpec

EXAMPLES_HEADER = "Examples (SMILES<TAB>activity, one per line):"
LEAD_PREFIX = "Lead molecule to modify: "
BATCH_SENTENCE = "Propose exactly {n} new candidate molecules."

GENERATION_SCHEMA_NOTE = (
    'Return only a JSON array of objects, each with a "smiles" field, '
    'for example: [{"smiles": "CCO"}, {"smiles": "c1ccccc1O"}]. '
    "No text outside the JSON array."
)
PREDICTION_SCHEMA_NOTE = (
    'Return only a JSON object with a numeric "activity" field, '
    'for example: {"activity": 7.2}. No text outside the JSON object.'
)
MODIFY_SCHEMA_NOTE = (
    'Return only a JSON object with a "smiles" field holding the modified '
    'molecule, for example: {"smiles": "CCO"}. No text outside the JSON object.'
)


@dataclass(frozen=True)
class PromptExample:
    smiles: str
    activity: float
    extra: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class PromptSpec:
    examples: tuple[PromptExample, ...]
    conditions: tuple[ConditionSpec, ...]
    lead: str
    batch_size: int
    output_schema_note: str = GENERATION_SCHEMA_NOTE

    def __post_init__(self) -> None:
        if not self.examples:
            raise ValidationError("prompt needs at least one example")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")


def _example_line(ex: PromptExample, include_extra: bool) -> str:
    parts = [ex.smiles, f"{ex.activity:g}"]
    if include_extra:
        parts.extend(f"{k}={v:g}" for k, v in sorted(ex.extra.items()))
    return "\t".join(parts)


def build_generation_prompt(spec: PromptSpec, include_extra_labels: bool = False) -> str:
    """Deterministic prompt text; example order is preserved exactly."""
    lines = [
        "You are an expert medicinal chemist designing drug-like molecules.",
        "Learn the structure-activity patterns from the examples, then design "
        "new molecules by modifying the lead molecule.",
        "",
        "Requirements:",
    ]
    if spec.conditions:
        lines.extend(f"- {c.render()}" for c in spec.conditions)
    else:
        lines.append("- maximize activity")
    lines += ["", EXAMPLES_HEADER]
    lines.extend(_example_line(ex, include_extra_labels) for ex in spec.examples)
    lines += [
        "",
        LEAD_PREFIX + spec.lead,
        "",
        BATCH_SENTENCE.format(n=spec.batch_size),
        spec.output_schema_note,
    ]
    return "\n".join(lines)


def truncate_to_budget(spec: PromptSpec, char_budget: int | None,
                       include_extra_labels: bool = False) -> tuple[PromptSpec, int]:
    """Drop examples from the tail until the rendered prompt fits.

    Examples arrive sorted by activity descending, so the tail is the
    low-activity end. Returns the fitted spec and the dropped-example count.
    """
    if char_budget is None:
        return spec, 0
    dropped = 0
    current = spec
    while (
        len(build_generation_prompt(current, include_extra_labels)) > char_budget
        and len(current.examples) > 1
    ):
        current = replace(current, examples=current.examples[:-1])
        dropped += 1
    return current, dropped


def build_prediction_prompt(examples: tuple[PromptExample, ...] | list, query: str) -> str:
    """Activity-prediction prompt: examples, query molecule, schema note."""
    if not examples:
        raise ValidationError("prediction needs at least one example")
    lines = [
        "You are an expert in quantitative structure-activity relationships.",
        "Given the example molecules and their measured activities, predict "
        "the activity of the query molecule.",
        "",
        EXAMPLES_HEADER,
    ]
    for ex in examples:
        if isinstance(ex, PromptExample):
            lines.append(_example_line(ex, include_extra=False))
        else:
            smiles, activity = ex
            lines.append(f"{smiles}\t{activity:g}")
    lines += ["", f"Query molecule: {query}", "", PREDICTION_SCHEMA_NOTE]
    return "\n".join(lines)


def build_modify_prompt(
    molecule: str,
    instruction: str,
    context_examples: list[tuple[str, dict[str, float]]] | None = None,
) -> str:
    """Single-molecule modification prompt with optional property examples."""
    lines = [
        "You are an expert medicinal chemist.",
        f"Modify the molecule: {molecule}",
        f"Instruction: {instruction}",
    ]
    if context_examples:
        lines += ["", "Reference molecules with measured properties:"]
        for smiles, props in context_examples:
            rendered = "\t".join(f"{k}={v:g}" for k, v in sorted(props.items()))
            lines.append(f"{smiles}\t{rendered}")
    lines += ["", MODIFY_SCHEMA_NOTE]
    return "\n".join(lines)
