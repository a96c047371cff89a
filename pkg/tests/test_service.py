"""HTTP API, session flows, depiction, and persistence."""

import time

import pytest
from fastapi.testclient import TestClient

from helpers import synthetic_dataset
from leadopt.data import save_dataset
from leadopt.generation import GeneratorBackendConfig
from leadopt.molgraph import parse_smiles
from leadopt.service import create_app, depict
from leadopt.service.store import Store


@pytest.fixture(scope="module")
def service_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("service-data")
    ds = synthetic_dataset(9, 80)
    store = Store(root)
    store.save_dataset(ds)
    return root


@pytest.fixture(scope="module")
def scripted_client(service_dir, tmp_path_factory):
    """Client whose backend maps the benzene->phenol script."""
    import json

    script = tmp_path_factory.mktemp("scripts") / "script.json"
    script.write_text(json.dumps([
        {"pattern": "add a hydroxyl", "response": '{"smiles": "Oc1ccccc1"}'},
        {"pattern": "break it", "response": '{"smiles": "C(("}'},
    ]))
    backend = GeneratorBackendConfig(kind="scripted", script_path=str(script))
    app = create_app(service_dir, backend=backend)
    return TestClient(app)


@pytest.fixture(scope="module")
def mock_client(service_dir):
    app = create_app(service_dir, backend=GeneratorBackendConfig(kind="mock", seed=0))
    return TestClient(app)


class TestDatasets:
    def test_list_and_upload(self, mock_client):
        assert "SYNTH" in mock_client.get("/datasets").json()["datasets"]
        csv_text = "smiles,activity\nCCO,7.0\nCCN,6.5\nC((,5.0\n"
        resp = mock_client.post("/datasets", json={
            "name": "tiny", "csv_text": csv_text,
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["records"] == 2
        assert len(body["row_errors"]) == 1


class TestCampaignEndpoints:
    def test_unknown_dataset_rejected(self, mock_client):
        resp = mock_client.post("/campaigns", json={"dataset": "missing"})
        assert resp.status_code == 404
        assert resp.json()["error"] == "DatasetMissingError"

    def test_unknown_campaign_structured_404(self, mock_client):
        resp = mock_client.get("/campaigns/nope")
        assert resp.status_code == 404
        assert resp.json()["detail"]

    def test_start_poll_finish(self, mock_client):
        config = {
            "initial_shots": 25,
            "max_iterations": 2,
            "batch_size": 10,
            "backend": {"kind": "mock", "seed": 1, "mutation_rate": 0.05},
            "gbt": {"n_trees": 30, "max_depth": 3, "learning_rate": 0.1,
                    "min_leaf": 3, "seed": 0},
            "vocab_radius": 1, "vocab_dim": 16, "vocab_epochs": 1,
            "vocab_augment": 0,
        }
        resp = mock_client.post("/campaigns", json={
            "dataset": "SYNTH", "config": config, "id": "api-test",
        })
        assert resp.status_code == 200
        assert resp.json()["status"] == "running"

        deadline = time.time() + 120
        status = "running"
        while time.time() < deadline:
            body = mock_client.get("/campaigns/api-test").json()
            status = body["status"]
            if status in ("finished", "failed"):
                break
            time.sleep(0.3)
        assert status == "finished", body
        reports = mock_client.get("/campaigns/api-test/report").json()["reports"]
        assert len(reports) == 2
        assert body["context_size"] >= 25

    def test_duplicate_id_conflict(self, mock_client):
        resp = mock_client.post("/campaigns", json={
            "dataset": "SYNTH", "config": {}, "id": "api-test",
        })
        assert resp.status_code == 409


class TestSessions:
    def test_modify_returns_depictions_and_deltas(self, scripted_client):
        resp = scripted_client.post("/sessions/s1/modify", json={
            "smiles": "c1ccccc1", "instruction": "add a hydroxyl group",
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["result"]["valid"]
        assert body["result"]["deltas"]["tpsa"] == pytest.approx(20.23, abs=0.01)
        assert len(body["input_depiction"]["atoms"]) == 6
        assert len(body["output_depiction"]["atoms"]) == 7
        assert body["history_length"] == 1

    def test_invalid_input_smiles_structured_error(self, scripted_client):
        resp = scripted_client.post("/sessions/s1/modify", json={
            "smiles": "C((", "instruction": "anything",
        })
        assert resp.status_code == 400
        # history unchanged
        assert len(scripted_client.get("/sessions/s1").json()["history"]) == 1

    def test_invalid_result_recorded_not_dropped(self, scripted_client):
        resp = scripted_client.post("/sessions/s1/modify", json={
            "smiles": "c1ccccc1", "instruction": "break it",
        })
        body = resp.json()
        assert resp.status_code == 200
        assert not body["result"]["valid"]
        assert body["output_depiction"] is None
        assert body["history_length"] == 2

    def test_accept_flow_and_pool_export(self, scripted_client):
        pool = scripted_client.get("/sessions/s1/pool").json()["pool"]
        assert pool == []
        resp = scripted_client.post("/sessions/s1/accept", json={"turn": 0})
        assert resp.json()["pool_size"] == 1
        # accepting an invalid turn is rejected
        resp = scripted_client.post("/sessions/s1/accept", json={"turn": 1})
        assert resp.status_code == 400
        # idempotent accept
        resp = scripted_client.post("/sessions/s1/accept", json={"turn": 0})
        assert resp.json()["pool_size"] == 1

        pool = scripted_client.get("/sessions/s1/pool").json()["pool"]
        assert len(pool) == 1
        entry = pool[0]
        from leadopt.properties import ertl_tpsa

        assert entry["properties"]["tpsa"] == pytest.approx(
            ertl_tpsa(parse_smiles(entry["smiles"])), abs=1e-9
        )

    def test_unknown_session_404(self, scripted_client):
        assert scripted_client.get("/sessions/ghost/pool").status_code == 404

    def test_history_append_only(self, scripted_client):
        before = len(scripted_client.get("/sessions/s1").json()["history"])
        scripted_client.post("/sessions/s1/modify", json={
            "smiles": "CCO", "instruction": "add a hydroxyl group",
        })
        after = len(scripted_client.get("/sessions/s1").json()["history"])
        assert after == before + 1


class TestDepiction:
    def test_benzene_layout_is_regular_hexagon(self):
        payload = depict(parse_smiles("c1ccccc1"))
        assert len(payload["atoms"]) == 6
        assert len(payload["bonds"]) == 6
        import math

        xs = [a["x"] for a in payload["atoms"]]
        ys = [a["y"] for a in payload["atoms"]]
        radii = [math.hypot(x, y) for x, y in zip(xs, ys)]
        assert max(radii) - min(radii) < 0.05

    def test_bond_lengths_reasonable(self):
        import math

        payload = depict(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
        atoms = {a["index"]: (a["x"], a["y"]) for a in payload["atoms"]}
        for bond in payload["bonds"]:
            ax, ay = atoms[bond["a"]]
            bx, by = atoms[bond["b"]]
            length = math.hypot(ax - bx, ay - by)
            assert 0.4 < length < 2.5

    def test_no_coincident_atoms(self):
        import math

        payload = depict(parse_smiles("CC(C)(C)c1ccc(O)cc1"))
        pts = [(a["x"], a["y"]) for a in payload["atoms"]]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                assert math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]) > 0.05

    def test_deterministic(self):
        a = depict(parse_smiles("CC(=O)Nc1ccc(O)cc1"))
        b = depict(parse_smiles("CC(=O)Nc1ccc(O)cc1"))
        assert a == b


class TestStoreStatusMachine:
    def test_illegal_transition_rejected(self, tmp_path):
        from leadopt.errors import ConflictError

        store = Store(tmp_path)
        store.create_campaign("c1", "SYNTH", {})
        store.set_campaign_status("c1", "running")
        store.set_campaign_status("c1", "finished")
        with pytest.raises(ConflictError):
            store.set_campaign_status("c1", "running")
