"""HTTP API over the platform.

Resource-oriented JSON: datasets, campaigns (asynchronous, one worker thread
per campaign, file-backed state), and interactive modification sessions.
Unknown ids produce uniform structured errors, never empty bodies.
"""

from __future__ import annotations

import logging
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from leadopt.campaign import CampaignConfig, run_campaign
from leadopt.data import load_dataset
from leadopt.errors import (
    ConflictError,
    DatasetMissingError,
    LeadoptError,
    NotFoundError,
    SmilesError,
    ValidationError,
)
from leadopt.generation import GeneratorBackendConfig, modify_molecule
from leadopt.molgraph import parse_smiles
from leadopt.properties import property_profile
from leadopt.service.depiction import depict
from leadopt.service.store import Store

log = logging.getLogger(__name__)


class DatasetUpload(BaseModel):
    name: str
    csv_text: str
    prepare_pools: bool = False
    min_activity: float | None = None


class CampaignRequest(BaseModel):
    dataset: str
    config: dict = {}
    id: str | None = None


class ModifyRequest(BaseModel):
    smiles: str
    instruction: str


class AcceptRequest(BaseModel):
    turn: int
    accept: bool = True


def create_app(
    data_dir: str | Path,
    backend: GeneratorBackendConfig | None = None,
) -> FastAPI:
    store = Store(data_dir)
    backend_config = backend or GeneratorBackendConfig(kind="mock", seed=0)
    app = FastAPI(title="leadopt", version="0.1.0")
    app.state.store = store
    app.state.backend_config = backend_config
    app.state.workers: dict[str, threading.Thread] = {}
    app.state.vocab_lock = threading.Lock()

    def vocabulary():
        with app.state.vocab_lock:
            return store.default_vocabulary()

    # -- error mapping -----------------------------------------------------

    @app.exception_handler(LeadoptError)
    async def leadopt_error_handler(request: Request, exc: LeadoptError):
        status = 500
        if isinstance(exc, (NotFoundError, DatasetMissingError)):
            status = 404
        elif isinstance(exc, ConflictError):
            status = 409
        elif isinstance(exc, (ValidationError, SmilesError)):
            status = 400
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    # -- datasets ----------------------------------------------------------

    @app.get("/datasets")
    def list_datasets():
        return {"datasets": store.list_datasets()}

    @app.post("/datasets")
    def upload_dataset(body: DatasetUpload):
        tmp = store.root / "datasets" / f".upload-{body.name}.csv"
        tmp.write_text(body.csv_text)
        try:
            ds = load_dataset(tmp, body.name, min_activity=body.min_activity)
        finally:
            tmp.unlink(missing_ok=True)
        store.save_dataset(ds)
        if body.prepare_pools:
            ds = store.prepare_pools(body.name)
        return {
            "name": body.name,
            "records": len(ds.records),
            "row_errors": ds.row_errors,
            "pools_ready": ds.pools_ready,
        }

    # -- campaigns -----------------------------------------------------------

    def _campaign_worker(campaign_id: str, dataset_name: str, config: CampaignConfig,
                         resume: bool) -> None:
        try:
            ds = store.load_dataset(dataset_name, min_activity=None)
            run_campaign(
                ds, config,
                state_dir=store.campaign_dir(campaign_id),
                resume=resume,
            )
            store.set_campaign_status(campaign_id, "finished")
        except Exception as exc:  # worker thread: report, never raise
            log.exception("campaign %s failed", campaign_id)
            try:
                store.set_campaign_status(campaign_id, "failed", error=str(exc))
            except LeadoptError:
                pass

    @app.post("/campaigns")
    def start_campaign(body: CampaignRequest):
        if body.dataset not in store.list_datasets():
            raise DatasetMissingError(f"dataset {body.dataset!r} is not registered")
        config = CampaignConfig.from_dict(body.config) if body.config else CampaignConfig()
        campaign_id = body.id or uuid.uuid4().hex[:12]
        handle = store.create_campaign(campaign_id, body.dataset, config.to_dict())
        store.set_campaign_status(campaign_id, "running")
        worker = threading.Thread(
            target=_campaign_worker,
            args=(campaign_id, body.dataset, config, False),
            daemon=True,
        )
        app.state.workers[campaign_id] = worker
        worker.start()
        return store.get_campaign(campaign_id).to_dict()

    @app.post("/campaigns/{campaign_id}/resume")
    def resume_campaign(campaign_id: str):
        handle = store.get_campaign(campaign_id)
        config = CampaignConfig.from_dict(handle.config)
        store.set_campaign_status(campaign_id, "running")
        worker = threading.Thread(
            target=_campaign_worker,
            args=(campaign_id, handle.dataset, config, True),
            daemon=True,
        )
        app.state.workers[campaign_id] = worker
        worker.start()
        return store.get_campaign(campaign_id).to_dict()

    @app.get("/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str):
        handle = store.get_campaign(campaign_id)
        return {
            **handle.to_dict(),
            "reports": store.campaign_reports(campaign_id),
            "context_size": len(store.campaign_context(campaign_id)),
        }

    @app.get("/campaigns/{campaign_id}/report")
    def campaign_report(campaign_id: str):
        store.get_campaign(campaign_id)  # 404 on unknown id
        return {"reports": store.campaign_reports(campaign_id)}

    # -- sessions ------------------------------------------------------------

    @app.post("/sessions/{session_id}/modify")
    def session_modify(session_id: str, body: ModifyRequest):
        record = store.get_session(session_id, create=True)
        vocab = vocabulary()
        result = modify_molecule(
            backend_config,
            body.smiles,
            body.instruction,
            fragment_stats=vocab,
        )
        input_depiction = depict(parse_smiles(body.smiles))
        output_depiction = (
            depict(parse_smiles(result.canonical)) if result.valid else None
        )
        turn = {
            "input_smiles": result.input_smiles,
            "instruction": body.instruction,
            "result_smiles": result.output_smiles,
            "canonical": result.canonical,
            "valid": result.valid,
            "error": result.error,
            "input_properties": result.input_properties,
            "output_properties": result.output_properties,
            "deltas": result.deltas,
            "accepted": False,
        }
        record.history.append(turn)
        store.save_session(record)
        return {
            "turn_index": len(record.history) - 1,
            "result": result.to_dict(),
            "input_depiction": input_depiction,
            "output_depiction": output_depiction,
            "history_length": len(record.history),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return store.get_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/accept")
    def session_accept(session_id: str, body: AcceptRequest):
        record = store.get_session(session_id)
        if not 0 <= body.turn < len(record.history):
            raise NotFoundError(f"session turn {body.turn} does not exist")
        turn = record.history[body.turn]
        if not turn["valid"] and body.accept:
            raise ValidationError("cannot accept an invalid modification")
        turn["accepted"] = body.accept
        store.save_session(record)
        return {"turn": body.turn, "accepted": body.accept,
                "pool_size": sum(1 for t in record.history if t["accepted"])}

    @app.get("/sessions/{session_id}/pool")
    def session_pool(session_id: str):
        record = store.get_session(session_id)
        vocab = vocabulary()
        pool = []
        for turn in record.history:
            if not turn["accepted"] or not turn["canonical"]:
                continue
            profile = property_profile(parse_smiles(turn["canonical"]), vocab)
            pool.append({
                "smiles": turn["canonical"],
                "properties": profile.as_dict(),
            })
        return {"pool": pool}

    return app


def serve(data_dir: str | Path, host: str = "127.0.0.1", port: int = 8000,
          backend: GeneratorBackendConfig | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, backend=backend), host=host, port=port)
