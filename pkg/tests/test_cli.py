import json

from app.cli import main
from app.core.config import settings
from app.services.scenarios import BUILTIN_SCENARIOS


def test_verify_writes_report(tmp_path):
    assert main(["verify", "--scenario", "example1", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "example1-verify.json").read_text())
    assert report["sign"] == 1
    assert report["omega_poles"][0]["winding"] == -1


def test_reproduce_is_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["reproduce", "fig1", "--out", str(first), "--svg"]) == 0
    assert main(["reproduce", "fig1", "--out", str(second)]) == 0
    assert (first / "fig1.csv").read_bytes() == (second / "fig1.csv").read_bytes()
    assert (first / "fig1.svg").exists()


def test_bounds_columns(tmp_path):
    assert main(["bounds", "--scenario", "example1", "--grid", "11", "--out", str(tmp_path)]) == 0
    header = (tmp_path / "example1-bounds.csv").read_text().splitlines()[0]
    assert header == "t,lower,upper,argmin_lambda,argmax_lambda"


def test_recover(tmp_path):
    assert main(["recover", "--scenario", "example1-moment", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "example1-moment-recovery.json").read_text())
    assert abs(report["first_moment"] - 0.4) < 1e-9


def test_tolerance_override_is_temporary(tmp_path):
    before = settings.QUAD_RTOL
    assert main(["design", "--scenario", "example1", "--tol", "1e-7", "--out", str(tmp_path)]) == 0
    assert settings.QUAD_RTOL == before
    assert (tmp_path / "example1-input.csv").exists()


def test_unknown_figure_exit_code(tmp_path, capsys):
    assert main(["reproduce", "fig99", "--out", str(tmp_path)]) == 2
    assert "UnknownFigure" in capsys.readouterr().err


def test_invalid_trajectory_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    bad = {**BUILTIN_SCENARIOS["example1"], "name": "bad", "trajectory": {"coefficients": [[0.0, 1.5], [1.0, 0.0]]}}
    path.write_text(json.dumps(bad))
    assert main(["verify", "--scenario", str(path), "--out", str(tmp_path)]) == 2
    assert not (tmp_path / "bad-verify.json").exists()
