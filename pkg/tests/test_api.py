import json

import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.services.scenarios import BUILTIN_SCENARIOS


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def scenario(name="example1", **overrides):
    return {**BUILTIN_SCENARIOS[name], **overrides}


def test_health(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "service": "signal-designer"}


def test_list_builtin(client):
    names = client.get("/scenarios/builtin").json()["scenarios"]
    assert "example1" in names and "example3" in names


def test_get_builtin(client):
    response = client.get("/scenarios/builtin/example2")
    assert response.status_code == 200
    assert response.json()["material"]["builtin"] == "example2"
    assert client.get("/scenarios/builtin/nope").status_code == 404


def test_verify(client):
    response = client.post("/scenarios/verify", json=scenario())
    assert response.status_code == 200
    report = response.json()
    assert report["sign"] == 1
    assert report["all_time_independent"] is True
    assert report["start_image"] == pytest.approx(11.0)


def test_verify_rejects_non_encircling_path(client):
    body = scenario(trajectory={"coefficients": [[0.0, 1.5], [1.0, 0.0], [-1.0, -0.3]]})
    response = client.post("/scenarios/verify", json=body)
    assert response.status_code == 422
    assert response.json()["kind"] == "NotEncircling"


def test_request_validation(client):
    response = client.post("/scenarios/verify", json=scenario(a0=5.0))
    assert response.status_code == 422


def test_simulate(client):
    response = client.post("/scenarios/simulate", params={"points": 21}, json=scenario())
    assert response.status_code == 200
    series = {s["label"]: s for s in response.json()}
    assert set(series) == {"simulated", "predicted"}
    assert len(series["simulated"]["times"]) == 21
    assert series["predicted"]["values"][-1] == pytest.approx(-0.6)


def test_bounds(client):
    response = client.post("/scenarios/bounds", params={"grid": 11}, json=scenario(times={"start": -1.0, "stop": 0.0, "points": 5}))
    assert response.status_code == 200
    assert response.json()["max_width"] < 1e-8


def test_recover(client):
    response = client.post("/scenarios/recover", json=scenario())
    assert response.status_code == 200
    assert response.json()["f1"] == pytest.approx(0.3)


def test_upload(client):
    files = {"file": ("example3.json", json.dumps(scenario("example3")), "application/json")}
    response = client.post("/scenarios/upload", files=files)
    assert response.status_code == 200
    assert response.json()["all_time_independent"] is False


def test_upload_rejects_other_files(client):
    files = {"file": ("example.csv", "a,b\n", "text/csv")}
    assert client.post("/scenarios/upload", files=files).status_code == 400


def test_upload_rejects_bad_json(client):
    files = {"file": ("broken.json", "{", "application/json")}
    response = client.post("/scenarios/upload", files=files)
    assert response.status_code == 422
    assert response.json()["kind"] == "ScenarioError"


def test_figures(client):
    assert "fig1" in client.get("/figures/").json()["figures"]
    csv = client.get("/figures/fig1")
    assert csv.status_code == 200
    assert csv.text.startswith("s,c_re,c_im,d_re,d_im")
    svg = client.get("/figures/fig1", params={"format": "svg"})
    assert svg.headers["content-type"].startswith("image/svg+xml")
    assert 'id="series-c_re"' in svg.text


def test_unknown_figure(client):
    response = client.get("/figures/fig99")
    assert response.status_code == 404
    assert response.json()["kind"] == "UnknownFigure"
