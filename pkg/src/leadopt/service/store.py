"""File-backed persistence for datasets, campaigns, and sessions.

Everything lives under one data directory, keyed by id, in append-friendly
JSON/CSV formats — easy to diff, easy to resume, no database. Campaign state
itself is written by the campaign loop; the store tracks handles (status and
config snapshots) and owns sessions and dataset registration.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from leadopt.data import TargetDataset, load_dataset, prepare_pools, save_dataset
from leadopt.errors import ConflictError, DatasetMissingError, NotFoundError
from leadopt.features import FragmentVocabulary, build_fragment_vocabulary
from leadopt.molgraph import parse_smiles

HANDLE_SCHEMA = "leadopt-campaign-handle-v1"
SESSION_SCHEMA = "leadopt-session-v1"

VALID_TRANSITIONS = {
    "created": {"running", "failed"},
    "running": {"paused", "finished", "failed"},
    "paused": {"running", "failed"},
    "finished": set(),
    "failed": set(),
}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class CampaignHandle:
    id: str
    status: str
    created_at: str
    updated_at: str
    config: dict
    dataset: str
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": HANDLE_SCHEMA,
            "id": self.id,
            "status": self.status,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "config": self.config,
            "dataset": self.dataset,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignHandle":
        return cls(
            id=data["id"],
            status=data["status"],
            created_at=data["created_at"],
            updated_at=data["updated_at"],
            config=data["config"],
            dataset=data["dataset"],
            error=data.get("error"),
        )


@dataclass
class SessionRecord:
    id: str
    history: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"schema": SESSION_SCHEMA, "id": self.id, "history": self.history}

    @classmethod
    def from_dict(cls, data: dict) -> "SessionRecord":
        return cls(id=data["id"], history=data["history"])


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        for sub in ("datasets", "campaigns", "sessions"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- datasets ---------------------------------------------------------

    def dataset_path(self, name: str) -> Path:
        return self.root / "datasets" / f"{name}.csv"

    def _pools_path(self, name: str) -> Path:
        return self.root / "datasets" / f"{name}.pools.json"

    def save_dataset(self, dataset: TargetDataset) -> None:
        save_dataset(dataset, self.dataset_path(dataset.target_name))
        if dataset.pools_ready:
            self._pools_path(dataset.target_name).write_text(json.dumps({
                "best20": dataset.best20,
                "pool50": dataset.pool50,
                "allminus20": dataset.allminus20,
            }))

    def load_dataset(self, name: str, min_activity: float | None = None) -> TargetDataset:
        path = self.dataset_path(name)
        if not path.exists():
            raise DatasetMissingError(f"dataset {name!r} is not registered")
        ds = load_dataset(path, name, min_activity=min_activity)
        pools = self._pools_path(name)
        if pools.exists():
            data = json.loads(pools.read_text())
            ds.best20 = data["best20"]
            ds.pool50 = data["pool50"]
            ds.allminus20 = data["allminus20"]
        return ds

    def list_datasets(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "datasets").glob("*.csv"))

    def prepare_pools(self, name: str, threshold: float = 0.65) -> TargetDataset:
        ds = self.load_dataset(name)
        prepare_pools(ds, threshold=threshold)
        self.save_dataset(ds)
        return ds

    # -- vocabulary -------------------------------------------------------

    def default_vocabulary(self) -> FragmentVocabulary:
        """Vocabulary over the bundled reference corpus, cached on disk."""
        path = self.root / "vocab.json"
        if path.exists():
            return FragmentVocabulary.load(path)
        text = (resources.files("leadopt") / "resources" / "reference_corpus.smi").read_text()
        corpus = [
            parse_smiles(line.strip())
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        ]
        vocab = build_fragment_vocabulary(corpus, radius=2, dim=64, seed=0, epochs=3)
        vocab.save(path)
        return vocab

    # -- campaign handles --------------------------------------------------

    def campaign_dir(self, campaign_id: str) -> Path:
        return self.root / "campaigns" / campaign_id

    def _handle_path(self, campaign_id: str) -> Path:
        return self.campaign_dir(campaign_id) / "handle.json"

    def create_campaign(self, campaign_id: str, dataset: str, config: dict) -> CampaignHandle:
        with self._lock:
            if self._handle_path(campaign_id).exists():
                raise ConflictError(f"campaign {campaign_id!r} already exists")
            handle = CampaignHandle(
                id=campaign_id,
                status="created",
                created_at=_now(),
                updated_at=_now(),
                config=config,
                dataset=dataset,
            )
            self.campaign_dir(campaign_id).mkdir(parents=True, exist_ok=True)
            self._write_handle(handle)
            return handle

    def _write_handle(self, handle: CampaignHandle) -> None:
        path = self._handle_path(handle.id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(handle.to_dict()))
        tmp.replace(path)

    def get_campaign(self, campaign_id: str) -> CampaignHandle:
        path = self._handle_path(campaign_id)
        if not path.exists():
            raise NotFoundError(f"campaign {campaign_id!r} not found")
        return CampaignHandle.from_dict(json.loads(path.read_text()))

    def list_campaigns(self) -> list[str]:
        return sorted(p.name for p in (self.root / "campaigns").iterdir() if p.is_dir())

    def set_campaign_status(
        self, campaign_id: str, status: str, error: str | None = None
    ) -> CampaignHandle:
        with self._lock:
            handle = self.get_campaign(campaign_id)
            if status != handle.status:
                if status not in VALID_TRANSITIONS.get(handle.status, set()):
                    raise ConflictError(
                        f"illegal status transition {handle.status} -> {status}"
                    )
                handle.status = status
            handle.updated_at = _now()
            handle.error = error
            self._write_handle(handle)
            return handle

    def campaign_reports(self, campaign_id: str) -> list[dict]:
        state = self.campaign_dir(campaign_id) / "state.json"
        if not state.exists():
            return []
        return json.loads(state.read_text()).get("reports", [])

    def campaign_context(self, campaign_id: str) -> list[dict]:
        state = self.campaign_dir(campaign_id) / "state.json"
        if not state.exists():
            return []
        return json.loads(state.read_text()).get("context", [])

    # -- sessions ----------------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.json"

    def get_session(self, session_id: str, create: bool = False) -> SessionRecord:
        path = self._session_path(session_id)
        if not path.exists():
            if not create:
                raise NotFoundError(f"session {session_id!r} not found")
            return SessionRecord(id=session_id)
        return SessionRecord.from_dict(json.loads(path.read_text()))

    def save_session(self, record: SessionRecord) -> None:
        with self._lock:
            path = self._session_path(record.id)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(record.to_dict()))
            tmp.replace(path)
