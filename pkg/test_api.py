"""Tests for the HTTP service."""

import os

from fastapi.testclient import TestClient

from cobhamkit.api import app

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

client = TestClient(app)


def read_fixture(name: str) -> str:
    with open(os.path.join(FIXTURES, name), "r", encoding="utf-8") as f:
        return f.read()


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_evaluate_and_prefix():
    response = client.post("/evaluate", json={"dfao": read_fixture("parity.dfao"), "x": 5})
    assert response.status_code == 200
    assert response.json()["value"] == "o"

    response = client.post("/prefix", json={"dfao": read_fixture("periodic_3_12_base2.dfao"), "count": 5})
    assert response.json()["values"] == ["3", "1", "2", "1", "2"]


def test_invalid_dfao_is_bad_request():
    response = client.post("/evaluate", json={"dfao": "base 2\n", "x": 1})
    assert response.status_code == 400
    assert "missing" in response.json()["detail"]


def test_negative_index_is_validation_error():
    response = client.post("/evaluate", json={"dfao": read_fixture("parity.dfao"), "x": -1})
    assert response.status_code == 422


def test_independence():
    assert client.post("/independence", json={"a": 4, "b": 8}).json() == {"independent": False, "m": 3, "n": 2}
    assert client.post("/independence", json={"a": 2, "b": 3}).json()["independent"] is True


def test_approx():
    response = client.post("/approx", json={"a": 2, "b": 3, "eps": "1/12"})
    assert response.status_code == 200
    body = response.json()
    assert abs(int(body["difference"])) * 12 <= 3 ** body["n"]
    assert client.post("/approx", json={"a": 2, "b": 3, "eps": "0.1"}).status_code == 400


def test_extract_then_verify():
    response = client.post("/extract", json={
        "dfao_a": read_fixture("periodic_3_12_base2.dfao"),
        "dfao_b": read_fixture("periodic_3_12_base3.dfao"),
    })
    assert response.status_code == 200
    body = response.json()
    assert int(body["period"]) % 2 == 0

    response = client.post("/verify", json={
        "dfao": read_fixture("periodic_3_12_base3.dfao"),
        "certificate": body["certificate"],
        "window": 200,
        "samples": 200,
    })
    assert response.status_code == 200
    assert response.json()["passed"] is True
    assert response.json()["counterexample"] is None


def test_extract_dependent_bases():
    response = client.post("/extract", json={
        "dfao_a": read_fixture("parity.dfao"),
        "dfao_b": read_fixture("parity.dfao"),
    })
    assert response.status_code == 400
