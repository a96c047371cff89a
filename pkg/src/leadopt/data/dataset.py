"""Per-target activity datasets.

Input is delimited text with header `smiles,activity[,mw,sa_score,tpsa,logp]`.
Rows with unparseable SMILES are collected as line-numbered errors rather
than aborting the load; duplicate molecules (by canonical form) collapse to
the record with the highest activity. Precomputed property columns, when
present, are checked against recomputation and logged on disagreement.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from leadopt.errors import SchemaMismatchError, SmilesError
from leadopt.molgraph import parse_smiles, to_canonical
from leadopt.properties import crippen_logp, ertl_tpsa, molecular_weight

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("smiles", "activity")
OPTIONAL_COLUMNS = ("mw", "sa_score", "tpsa", "logp")
PRECOMPUTED_TOLERANCE = 0.5


@dataclass
class ActivityRecord:
    smiles: str                     # canonical form
    activity: float
    mw: float | None = None
    sa_score: float | None = None
    tpsa: float | None = None
    logp: float | None = None


@dataclass
class TargetDataset:
    target_name: str
    records: list[ActivityRecord] = field(default_factory=list)
    best20: list[int] = field(default_factory=list)
    pool50: list[int] = field(default_factory=list)
    allminus20: list[int] = field(default_factory=list)
    row_errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def pools_ready(self) -> bool:
        return bool(self.best20 or self.pool50 or self.allminus20)

    def pool_records(self, name: str) -> list[ActivityRecord]:
        indices = {"best20": self.best20, "pool50": self.pool50,
                   "allminus20": self.allminus20}[name]
        return [self.records[i] for i in indices]


def _check_precomputed(record: ActivityRecord, mol, line_no: int) -> None:
    checks = (
        ("mw", record.mw, molecular_weight(mol)),
        ("tpsa", record.tpsa, ertl_tpsa(mol)),
        ("logp", record.logp, crippen_logp(mol)),
    )
    for name, given, computed in checks:
        if given is None:
            continue
        if abs(given - computed) > PRECOMPUTED_TOLERANCE:
            log.warning(
                "line %d: precomputed %s=%.3f disagrees with recomputed %.3f",
                line_no, name, given, computed,
            )


def load_dataset(
    path: str | Path,
    target_name: str,
    min_activity: float | None = 4.0,
) -> TargetDataset:
    """Load a delimited activity file; pools stay unset.

    min_activity drops weakly active rows (the potency filter); pass None to
    keep everything.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")

    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise SchemaMismatchError(f"{path}: empty file") from None
        if tuple(header[:2]) != REQUIRED_COLUMNS:
            raise SchemaMismatchError(
                f"{path}: header must start with 'smiles,activity', got {header!r}"
            )
        extra = header[2:]
        if any(col not in OPTIONAL_COLUMNS for col in extra):
            raise SchemaMismatchError(
                f"{path}: unknown columns {sorted(set(extra) - set(OPTIONAL_COLUMNS))}"
            )

        dataset = TargetDataset(target_name=target_name)
        best: dict[str, ActivityRecord] = {}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                smiles = row[0].strip()
                activity = float(row[1])
                if not math.isfinite(activity):
                    raise ValueError("activity not finite")
                mol = parse_smiles(smiles)
                canonical = to_canonical(mol)
            except (SmilesError, ValueError, IndexError) as exc:
                dataset.row_errors.append((line_no, str(exc)))
                continue
            if min_activity is not None and activity < min_activity:
                continue
            record = ActivityRecord(smiles=canonical, activity=activity)
            for col, value in zip(extra, row[2:]):
                if value.strip():
                    setattr(record, col, float(value))
            _check_precomputed(record, mol, line_no)
            existing = best.get(canonical)
            if existing is None or activity > existing.activity:
                best[canonical] = record

        dataset.records = list(best.values())
        return dataset


def save_dataset(dataset: TargetDataset, path: str | Path) -> None:
    """Write records back out in the load schema (idempotent round trip)."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS + OPTIONAL_COLUMNS)
        for r in dataset.records:
            writer.writerow([
                r.smiles, r.activity,
                "" if r.mw is None else r.mw,
                "" if r.sa_score is None else r.sa_score,
                "" if r.tpsa is None else r.tpsa,
                "" if r.logp is None else r.logp,
            ])
