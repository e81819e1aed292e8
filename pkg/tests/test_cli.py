import json

import pytest

from qgtbundle.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_MODEL, EXIT_OFFSHELL, EXIT_OK, main


def write(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def load(path):
    data = json.loads(path.read_text())
    data.pop("timestamp", None)
    return data


BLOCH = {"model": "bloch", "grid": {"counts": [2, 2], "margin": 0.1}, "seed": 3}


def test_verify_bloch_passes(tmp_path):
    out = tmp_path / "out"
    assert main(["verify", "--config", write(tmp_path, "c.json", BLOCH), "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "verify_report.json").read_text())
    assert report["schema"]
    assert report["summary"]["failed"] == 0
    assert report["summary"]["records"] > 0


def test_verify_is_deterministic(tmp_path):
    cfg = write(tmp_path, "c.json", BLOCH)
    main(["verify", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["verify", "--config", cfg, "--out", str(tmp_path / "b"), "--workers", "3"])
    assert load(tmp_path / "a" / "verify_report.json") == load(tmp_path / "b" / "verify_report.json")


def test_unreachable_tolerance_fails(tmp_path):
    cfg = dict(BLOCH, tolerances={"gauss_parallel": 1e-30})
    assert main(["verify", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == EXIT_FAIL


def test_off_shell_ray_exit_code(tmp_path):
    cfg = {"model": "minkowski", "trace": {"rays": [{"x": [0, 0, 0, 0], "k": [-1.0, 0.5, 0, 0]}]}}
    assert main(["trace", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == EXIT_OFFSHELL


@pytest.mark.parametrize(
    "cfg,code",
    [
        ({"model": "bloch", "bogus": 1}, EXIT_CONFIG),
        ({"model": "bloch", "grid": {"counts": [0, 2]}}, EXIT_CONFIG),
        ({"model": "nope"}, EXIT_MODEL),
        ({"model": {"name": "bloch", "params": {"radius": 2}}}, EXIT_MODEL),
    ],
)
def test_bad_inputs(tmp_path, cfg, code):
    assert main(["verify", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == code


def test_malformed_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    assert main(["verify", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_eval_metric_values(tmp_path):
    cfg = {"model": "bloch", "points": [[1.5707963267948966, 1.0]], "what": "metric"}
    assert main(["eval", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == EXIT_OK
    files = list(tmp_path.glob("eval_metric*.json"))
    assert files
    text = files[0].read_text()
    assert "0.25" in text or "0.24999" in text


def test_eval_csv_and_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("QGTBUNDLE_OUT", str(tmp_path / "env"))
    cfg = {"model": "bloch", "grid": {"counts": [2, 1], "margin": 0.2}, "what": "qgt", "output": {"tidy": True}}
    assert main(["eval", "--config", write(tmp_path, "c.json", cfg), "--format", "csv"]) == EXIT_OK
    assert list((tmp_path / "env").glob("*.csv"))


def test_trace_fan(tmp_path):
    cfg = {
        "model": {"name": "hyperbolic-half-plane", "params": {"q": 1.0, "e_field": [0.1, 0.05], "b_field": 0.5}},
        "trace": {"fan": {"x": [0, 1, 0, 0], "speed": 0.1, "count": 3}, "tau_end": 1.0, "dt": 0.01, "dt_halving": True},
    }
    assert main(["trace", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == EXIT_OK
    summary = json.loads((tmp_path / "trace_summary.json").read_text())
    assert len(list(tmp_path.glob("ray_*.csv"))) == 3
    text = json.dumps(summary)
    assert "kz_drift" in text


def test_models_listing(capsys):
    assert main(["models"]) == EXIT_OK
    names = {m["name"] for m in json.loads(capsys.readouterr().out)["models"]}
    assert {"bloch", "random", "minkowski", "hyperbolic-half-plane", "hyperbolic-disk"} <= names
