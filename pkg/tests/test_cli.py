import json

import pytest

from lbs.cli import run
from lbs.regions import SCAN_HEADER


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_consts_json(capsys):
    code, out = _capture(capsys, ["consts", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["a11_0"] == pytest.approx(0.1263655, abs=1e-6)
    assert data["mu0"] == pytest.approx(5.8731, abs=1e-3)
    assert set(data) == {"a11_0", "a12_0", "a22_0", "a_a12_0", "mu0", "mu2_crit"}


def test_band_json(capsys):
    code, out = _capture(capsys, ["band", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["results"] == {"e_min": 0, "e_max": 24}


def test_spectrum_empty_couplings(capsys):
    code, out = _capture(capsys, ["spectrum", "--mu1", "0", "--mu2", "0", "--json"])
    assert code == 0
    data = json.loads(out)
    for sector in ("S", "A12", "MIX"):
        assert data["results"][sector] == {"below": [], "above": []}


def test_spectrum_side_filter(capsys):
    code, out = _capture(
        capsys, ["spectrum", "--mu1", "0", "--mu2", "0", "--side", "below", "--json"]
    )
    data = json.loads(out)
    assert data["results"]["S"] == {"below": []}


def test_det_json(capsys):
    code, out = _capture(
        capsys, ["det", "--mu1", "0", "--mu2", "0", "--z", "-2", "--json"]
    )
    data = json.loads(out)
    assert data["results"] == {"delta_s": 1, "delta_a12": 1}


def test_afuncs_reports_both_paths(capsys):
    code, out = _capture(capsys, ["afuncs", "--z", "-1", "--json"])
    data = json.loads(out)
    a11 = data["results"]["a11"]
    assert a11["quadrature"] == pytest.approx(a11["bessel"], abs=1e-7)
    assert a11["discrepancy"] < 1e-7


def test_classify_json(capsys):
    code, out = _capture(capsys, ["classify", "--mu1", "-20", "--mu2", "-10", "--json"])
    data = json.loads(out)
    assert data["results"]["a_minus"] == 2
    assert data["results"]["sector_sum"] == [2, 0]


def test_phase_diagram_csv(tmp_path, capsys):
    out_file = tmp_path / "scan.csv"
    code, _ = _capture(capsys, [
        "phase-diagram", "--mu1", "-1:1:3", "--mu2", "-1:1:3", "--out", str(out_file),
    ])
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == SCAN_HEADER
    assert len(lines) == 10
    assert lines[1].startswith("-1,-1,0,0,0,0,0,0,,,")


def test_phase_diagram_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    argv = ["phase-diagram", "--mu1", "-30:30:4", "--mu2", "-30:30:4"]
    _capture(capsys, argv + ["--out", str(a)])
    _capture(capsys, argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_curves_csv(tmp_path, capsys):
    out_file = tmp_path / "curve.csv"
    code, _ = _capture(capsys, [
        "curves", "--side", "minus", "--mu1", "-20:20:5", "--out", str(out_file),
    ])
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "mu1,mu2_curve"
    assert len(lines) == 6


def test_eigenfunction_csv(tmp_path, capsys):
    out_file = tmp_path / "f.csv"
    code, _ = _capture(capsys, [
        "eigenfunction", "--mu1", "-16", "--mu2", "-2",
        "--z", "-5.78552338991", "--grid", "4", "--out", str(out_file),
    ])
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "p1,p2,p3,f"
    assert len(lines) == 65


def test_eigenfunction_rejects_non_root(capsys):
    code = run(["eigenfunction", "--mu1", "-16", "--mu2", "-2", "--z", "-1.0"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_verify_gamma_pass(capsys):
    code, out = _capture(capsys, [
        "verify", "--mu1", "-16", "--mu2", "-2", "--grid", "8", "--json",
    ])
    assert code == 0
    data = json.loads(out)
    assert data["results"]["status"] == "PASS"
    assert data["results"]["det_below"] == 1
    assert data["results"]["oracle_below"] == 1
    assert data["results"]["root_distances"][0] < 0.05


def test_verify_counts_shallow_state(capsys):
    # the second bound state here is only 0.153 below the band; the
    # comparison margin adapts so both paths still count it
    code, out = _capture(capsys, [
        "verify", "--mu1", "-20", "--mu2", "-10", "--grid", "12", "--json",
    ])
    assert code == 0
    data = json.loads(out)
    assert data["results"]["det_below"] == 2
    assert data["results"]["oracle_below"] == 2
    assert data["results"]["status"] == "PASS"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["spectrum", "--bogus"])
    assert exc.value.code == 2


def test_config_file_with_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"quadrature_n": 32}')
    code, out = _capture(capsys, [
        "afuncs", "--z", "-1", "--config", str(cfg), "--json",
    ])
    assert json.loads(out)["inputs"]["quadrature_n"] == 32
    code, out = _capture(capsys, [
        "afuncs", "--z", "-1", "--config", str(cfg), "--n", "16", "--json",
    ])
    assert json.loads(out)["inputs"]["quadrature_n"] == 16


def test_config_validation(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"grid_n": 7}')
    code = run(["verify", "--mu1", "0", "--mu2", "0", "--config", str(cfg)])
    assert code == 1
    assert "grid_n" in capsys.readouterr().err


def test_threads_env_does_not_change_output(tmp_path, capsys, monkeypatch):
    argv = ["phase-diagram", "--mu1", "-16:-16:2", "--mu2", "-2:1:2", "--verify"]
    monkeypatch.setenv("LBS_THREADS", "1")
    _, out1 = _capture(capsys, argv)
    monkeypatch.setenv("LBS_THREADS", "4")
    _, out2 = _capture(capsys, argv)
    assert out1 == out2
