import json

import pytest

from ricci_lab import cli, ode


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def test_verify_example_pass(tmp_path, capsys):
    assert cli.main(["verify-example", "schwarzschild_exterior", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify_schwarzschild_exterior.json").read_text())
    assert rep["pass"] and rep["tolerance"] == 1e-10
    assert len(rep["config_sha256"]) == 64


def test_verify_example_horizon_is_invalid(tmp_path, capsys):
    cfg = write(tmp_path, {"example": {"grid": {"lo": 2.0, "hi": 10, "count": 8}}})
    assert cli.main(["verify-example", "schwarzschild_exterior", "--config", cfg]) == 2
    assert "NonpositiveLapse" in capsys.readouterr().err


def test_verify_example_tight_tolerance_fails(tmp_path, capsys):
    cfg = write(tmp_path, {"tolerance": 1e-30})
    assert cli.main(["verify-example", "schwarzschild_interior", "--config", cfg]) == 1


def test_env_tolerance(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RICCI_LAB_TOL", "1e-30")
    assert cli.main(["verify-example", "schwarzschild_interior"]) == 1
    monkeypatch.setenv("RICCI_LAB_TOL", "nope")
    assert cli.main(["verify-example", "schwarzschild_interior"]) == 2


def test_identities_suite(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": {
        "structure": {"example": "schwarzschild_exterior"},
        "suite": ["trace", "dh", "f2s", "bochner", "lemma51", "eigenstructure", "csf_gradient"]}})
    assert cli.main(["identities", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rep = json.loads((tmp_path / "o" / "identities.json").read_text())
    status = {r["identity_id"]: r["status"] for r in rep["results"]}
    assert status["csf_gradient"] == "SKIP"
    assert all(v == "PASS" for k, v in status.items() if k != "csf_gradient")
    assert (tmp_path / "o" / "identity_trace.json").exists()


def test_identities_skip_band(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": {
        "structure": {"example": "schwarzschild_interior"},
        "h_override": {"preset": "csf", "c": 0.25}, "suite": ["csf_gradient"]}})
    assert cli.main(["identities", "--config", cfg]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["results"][0]["status"] == "SKIP"


def test_identities_on_trajectory_csv(tmp_path, capsys):
    st, p = ode.synthesize_initial_state(3, 1.0, -0.2, bp_sign=-1)
    ode.integrate(st, p, 0.3).to_csv(tmp_path / "traj.csv")
    cfg = write(tmp_path, {"identities": {
        "structure": {"trajectory": str(tmp_path / "traj.csv"), "n": 3, "h": 1.0},
        "suite": ["einstein", "trace", "lemma51", "eigenstructure", "f2s"]}})
    assert cli.main(["identities", "--config", cfg]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["summary"] == {"PASS": 5, "FAIL": 0, "SKIP": 0}


def test_integrate_outputs(tmp_path, capsys):
    cfg = write(tmp_path, {"integrate": {"preset": "sphere", "lambda": 2, "h": 2}})
    out = tmp_path / "run"
    assert cli.main(["integrate", "--config", cfg, "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("SPHERE_LIKE")
    assert (out / "trajectory.csv").read_text().splitlines()[0] == ode.CSV_HEADER
    assert json.loads((out / "events.json").read_text())["status"] == "COMPLETE"
    cls = json.loads((out / "classification.json").read_text())
    assert cls["classification"]["label"] == "SPHERE_LIKE"
    assert "a0_tol" in cls["tolerances"]


@pytest.mark.parametrize("cfg", [
    {"integrat": {}},
    {"integrate": {"h": 1}},
    {"integrate": {"h": 1, "a0": 5, "kappa": 3}},
    {"integrate": {"h": 1, "a0": 0, "t_span": -1}},
    {"integrate": {"preset": "flat", "lambda": 2}},
])
def test_integrate_invalid(tmp_path, cfg, capsys):
    assert cli.main(["integrate", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 2


def test_unreadable_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["integrate", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert cli.main(["integrate", "--config", str(tmp_path / "missing.json"),
                     "--out", str(tmp_path)]) == 2
    assert cli.main(["verify-example", "nope"]) == 2


def test_sweep(tmp_path, capsys):
    cfg = write(tmp_path, {"sweep": {"parameter": "a0", "values": [-0.2, 0, 0.2, 9],
                                     "inner": {"h": 1, "bp_sign": -1, "t_span": 2}}})
    assert cli.main(["sweep", "--config", cfg, "--out", str(tmp_path / "s")]) == 0
    rows = json.loads((tmp_path / "s" / "sweep.json").read_text())["rows"]
    assert [r["label"] for r in rows] == ["INCOMPLETE_OR_INCONSISTENT", "RICCI_FLAT",
                                           "INCOMPLETE_OR_INCONSISTENT", ""]
    assert rows[3]["status"] == "ERROR" and "BadInitialData" in rows[3]["error"]
    csv_lines = (tmp_path / "s" / "sweep.csv").read_text().splitlines()
    assert csv_lines[0].split(",") == cli.SWEEP_HEADER and len(csv_lines) == 5


def test_empty_sweep(tmp_path, capsys):
    cfg = write(tmp_path, {"sweep": {"parameter": "a0", "values": [], "inner": {"h": 1}}})
    assert cli.main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.csv").read_text().splitlines() == [",".join(cli.SWEEP_HEADER)]


def test_reports_are_deterministic(tmp_path, capsys):
    cfg = write(tmp_path, {"integrate": {"a0": 0.2, "h": 1, "bp_sign": -1, "t_span": 2}})
    for k in (1, 2):
        assert cli.main(["integrate", "--config", cfg, "--out", str(tmp_path / f"r{k}")]) == 0
    for name in ("trajectory.csv", "events.json", "classification.json"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()


def test_config_hash_depends_on_content():
    assert cli.config_hash("x", {"a": 1}) == cli.config_hash("x", {"a": 1})
    assert cli.config_hash("x", {"a": 1}) != cli.config_hash("x", {"a": 2})
