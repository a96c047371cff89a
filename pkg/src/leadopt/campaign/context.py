"""The evolving generation context: molecules and their activity labels."""

from __future__ import annotations

from dataclasses import dataclass, field

from leadopt.data import TargetDataset
from leadopt.errors import InsufficientDataError, ValidationError

EXPERIMENTAL = "experimental"
GENERATED = "generated"


@dataclass(frozen=True)
class ContextEntry:
    smiles: str                 # canonical form, unique within the context
    activity: float             # measured, or the consensus label
    origin: str                 # experimental | generated
    iteration_added: int

    def to_dict(self) -> dict:
        return {
            "smiles": self.smiles,
            "activity": self.activity,
            "origin": self.origin,
            "iteration_added": self.iteration_added,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ContextEntry":
        return cls(data["smiles"], data["activity"], data["origin"],
                   data["iteration_added"])


@dataclass
class Context:
    entries: list[ContextEntry] = field(default_factory=list)
    _seen: set[str] = field(default_factory=set, repr=False)

    def __post_init__(self) -> None:
        for entry in self.entries:
            if entry.smiles in self._seen:
                raise ValidationError(f"duplicate context entry {entry.smiles}")
            self._seen.add(entry.smiles)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, canonical: str) -> bool:
        return canonical in self._seen

    def add(self, entry: ContextEntry) -> None:
        if entry.smiles in self._seen:
            raise ValidationError(f"duplicate context entry {entry.smiles}")
        self.entries.append(entry)
        self._seen.add(entry.smiles)

    def activities(self) -> list[float]:
        return [e.activity for e in self.entries]

    def pairs_by_activity(self) -> list[tuple[str, float]]:
        """(smiles, activity) sorted most-active first, ties by SMILES."""
        ordered = sorted(self.entries, key=lambda e: (-e.activity, e.smiles))
        return [(e.smiles, e.activity) for e in ordered]

    def experimental_entries(self) -> list[ContextEntry]:
        return [e for e in self.entries if e.origin == EXPERIMENTAL]

    def to_dicts(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]

    @classmethod
    def from_dicts(cls, data: list[dict]) -> "Context":
        return cls(entries=[ContextEntry.from_dict(d) for d in data])


def init_context(dataset: TargetDataset, shots: int) -> Context:
    """Top `shots` records by activity, most active first."""
    if len(dataset.records) < shots:
        raise InsufficientDataError(
            f"dataset has {len(dataset.records)} records, need {shots}"
        )
    ordered = sorted(dataset.records, key=lambda r: (-r.activity, r.smiles))
    ctx = Context()
    for record in ordered[:shots]:
        ctx.add(ContextEntry(
            smiles=record.smiles,
            activity=record.activity,
            origin=EXPERIMENTAL,
            iteration_added=0,
        ))
    return ctx


def percentile(values: list[float], p: float) -> float:
    """Linear-interpolation percentile: rank = p/100 * (n-1) on the sorted
    values, interpolating between the bracketing order statistics."""
    if not values:
        raise ValidationError("percentile of an empty list")
    ordered = sorted(values)
    n = len(ordered)
    rank = p / 100.0 * (n - 1)
    below = int(rank)
    frac = rank - below
    if below + 1 >= n:
        return ordered[-1]
    return ordered[below] + frac * (ordered[below + 1] - ordered[below])


def percentile_cutoff(context: Context, p: float) -> float:
    """Activity cutoff at the p-th percentile of the context labels."""
    return percentile(context.activities(), p)
