"""Design conditions: property targets a candidate must satisfy.

Comparisons are strict for above/below ("activity above 10", "SA under 3")
and inclusive for ranges ("molecular weight between 320-420").
"""

from __future__ import annotations

from dataclasses import dataclass

from leadopt.errors import ValidationError
from leadopt.properties.profile import PropertyProfile

CONDITION_PROPERTIES = ("activity", "molecular_weight", "sa_score", "logp", "tpsa")
CONDITION_KINDS = ("above", "below", "range")

_UNITS = {
    "activity": "",
    "molecular_weight": " g/mol",
    "sa_score": "",
    "logp": "",
    "tpsa": " A^2",
}


@dataclass(frozen=True)
class ConditionSpec:
    property: str
    kind: str
    bounds: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.property not in CONDITION_PROPERTIES:
            raise ValidationError(f"unknown condition property {self.property!r}")
        if self.kind not in CONDITION_KINDS:
            raise ValidationError(f"unknown condition kind {self.kind!r}")
        if self.kind == "range":
            if len(self.bounds) != 2 or not self.bounds[0] < self.bounds[1]:
                raise ValidationError("range bounds must be ordered (low, high)")
        elif len(self.bounds) != 1:
            raise ValidationError(f"{self.kind} takes exactly one bound")

    def passes(self, value: float) -> bool:
        if self.kind == "above":
            return value > self.bounds[0]
        if self.kind == "below":
            return value < self.bounds[0]
        return self.bounds[0] <= value <= self.bounds[1]

    def label(self) -> str:
        unit = _UNITS[self.property]
        if self.kind == "range":
            return f"{self.property} in [{self.bounds[0]:g}, {self.bounds[1]:g}]{unit}"
        return f"{self.property} {self.kind} {self.bounds[0]:g}{unit}"

    def render(self) -> str:
        """Prompt-facing phrasing of the requirement."""
        name = self.property.replace("_", " ")
        if self.kind == "range":
            return f"{name} between {self.bounds[0]:g} and {self.bounds[1]:g}"
        direction = "above" if self.kind == "above" else "below"
        return f"{name} {direction} {self.bounds[0]:g}"

    def to_dict(self) -> dict:
        return {"property": self.property, "kind": self.kind, "bounds": list(self.bounds)}

    @classmethod
    def from_dict(cls, data: dict) -> "ConditionSpec":
        return cls(data["property"], data["kind"], tuple(data["bounds"]))


def check_conditions(
    profile: PropertyProfile,
    predicted_activity: float | None,
    conditions: list[ConditionSpec],
) -> dict[str, bool]:
    """Per-condition pass map keyed by condition label.

    The empty condition list passes vacuously; overall_pass() folds the map.
    """
    values = profile.as_dict()
    out: dict[str, bool] = {}
    for i, spec in enumerate(conditions):
        if spec.property == "activity":
            value = predicted_activity
            if value is None:
                raise ValidationError("activity condition needs a predicted activity")
        else:
            value = values[spec.property]
        label = spec.label()
        if label in out:
            label = f"{label} #{i}"
        out[label] = spec.passes(value)
    return out


def overall_pass(results: dict[str, bool]) -> bool:
    return all(results.values())
