import numpy as np
import pytest
from fastapi.testclient import TestClient

import temporal_hierarchy.service as service_module
from temporal_hierarchy.sdp import SolverError
from temporal_hierarchy.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok" and "version" in body


def test_config_schema(client):
    resp = client.get("/config-schema")
    assert resp.status_code == 200
    schema = resp.json()
    assert "oneOf" in schema and "discriminator" in schema


def test_run_lg(client):
    resp = client.post(
        "/run", json={"experiment": "lg", "grid": {"stop": 1.1, "points": 4}}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"] == ["tau", "K", "flag"]
    assert len(body["rows"]) == 4
    assert body["csv"].startswith("tau,K,flag\n")
    assert abs(body["rows"][0][1] - 1.0) < 1e-12


def test_run_classical(client):
    resp = client.post(
        "/run", json={"experiment": "classical", "pairs": [[0.8, 0.3]]}
    )
    assert resp.status_code == 200
    body = resp.json()
    row = body["rows"][0]
    assert abs(row[2] - 0.5) < 1e-6
    assert body["summary"]["max_abs_tsr_minus_distance"] <= 1e-6


def test_run_hierarchy_small(client):
    resp = client.post(
        "/run",
        json={"experiment": "hierarchy", "grid": {"stop": 1.2, "points": 7}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"] == ["t", "f", "tsr", "tchsh_max"]
    assert abs(body["summary"]["vanishing_time_tchsh"] - np.log(2) / 2) < 1e-4


def test_run_causal_small(client):
    resp = client.post(
        "/run", json={"experiment": "causal", "grid": {"stop": 5.0, "points": 5}}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["verdict_direct"] == "direct-cause-detected"
    assert body["summary"]["peak_tsr_common"] <= 1e-8


def test_validation_errors(client):
    assert client.post("/run", json={"experiment": "unknown"}).status_code == 422
    assert client.post("/run", json={"experiment": "lg", "nope": 1}).status_code == 422
    assert (
        client.post(
            "/run", json={"experiment": "lg", "grid": {"stop": 1.0, "points": 0}}
        ).status_code
        == 422
    )


def test_solver_failure_maps_to_500(client, monkeypatch):
    def boom(cfg):
        raise SolverError("stalled")

    monkeypatch.setattr(service_module, "run_experiment", boom)
    resp = client.post("/run", json={"experiment": "lg"})
    assert resp.status_code == 500
    assert "stalled" in resp.json()["detail"]
