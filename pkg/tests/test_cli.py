import json
import math

import pytest

from driventls import DomainError
from driventls.cli import _f17, main, render


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_weights_csv_stdout(capsys):
    code, out, err = _run(capsys, ["weights", "--zetas", "0", "--grid", "64"])
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    meta = [line for line in lines if line.startswith("# ")]
    assert "# command = weights" in meta
    assert any(line.startswith("# params.delta = ") for line in meta)
    header_idx = next(i for i, line in enumerate(lines) if not line.startswith("#"))
    assert lines[header_idx] == "zeta,mode,source,tau,weight1,weight2"
    rows = [line.split(",") for line in lines[header_idx + 1 :] if line]
    # 1 zeta x 2 sources x 2 modes x 64 samples
    assert len(rows) == 256
    for row in rows:
        if row[1] == "1":
            assert float(row[4]) == pytest.approx(1.0, abs=1e-12)
            assert float(row[5]) == pytest.approx(0.0, abs=1e-12)


def test_default_drive_strength(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--format", "json", "--grid", "64", "--k-max", "1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["params"]["zeta"] == pytest.approx(math.pi / 5, abs=1e-15)
    assert payload["params"]["delta"] == 0.02


def test_spectrum_json_roundtrip(capsys):
    code, out, _ = _run(
        capsys,
        ["spectrum", "--zeta", "3.14", "--format", "json", "--grid", "64", "--k-max", "2"],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "spectrum"
    assert payload["k_max"] == 2
    assert len(payload["rows"]) == 10
    row = payload["rows"][0]
    assert set(row) == {
        "i",
        "j",
        "k",
        "frequency",
        "intensity_numeric",
        "intensity_analytic",
        "class",
        "forbidden",
        "direction",
    }
    assert all(not r["forbidden"] for r in payload["rows"])


def test_sweep_endpoints_and_crossing(capsys):
    code, out, _ = _run(
        capsys,
        [
            "sweep",
            "--delta",
            "0.1",
            "--zeta-min",
            "0",
            "--zeta-max",
            "1",
            "--zeta-steps",
            "3",
            "--manifolds",
            "1",
            "--format",
            "json",
        ],
    )
    assert code == 0
    payload = json.loads(out)
    rows = payload["rows"]
    assert len(rows) == 9
    first_center = next(r for r in rows if r["zeta"] == 0.0 and r["n"] == 0)
    assert first_center["eps1_analytic"] == pytest.approx(-0.05, abs=1e-15)
    assert first_center["eps1_exact"] == pytest.approx(-0.05, abs=1e-9)
    assert first_center["eps2_exact"] == pytest.approx(0.05, abs=1e-9)
    assert payload["crossings"] == []
    replica = next(r for r in rows if r["zeta"] == 0.0 and r["n"] == 1)
    assert replica["eps1_analytic"] == pytest.approx(0.95, abs=1e-12)


def test_sweep_finds_crossing(capsys):
    code, out, _ = _run(
        capsys,
        [
            "sweep",
            "--zeta-min",
            "2.3",
            "--zeta-max",
            "2.5",
            "--zeta-steps",
            "5",
            "--manifolds",
            "0",
            "--format",
            "json",
        ],
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["crossings"]) == 1
    assert payload["crossings"][0] == pytest.approx(2.404825557695773, abs=0.01)


def test_byte_identical_output(tmp_path, capsys):
    argv = ["sweep", "--zeta-min", "0", "--zeta-max", "2", "--zeta-steps", "5", "--manifolds", "0"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")


def test_validate_passes_in_regime(capsys):
    code, out, _ = _run(capsys, ["validate", "--zetas", "3.141592653589793", "--grid", "128"])
    assert code == 0
    payload = json.loads(out)
    assert payload["overall_pass"] is True
    check = payload["checks"][0]
    assert check["pass"] is True
    assert check["error"] is None
    assert check["quasienergy_gap"] <= 2e-3
    assert check["min_mode_fidelity"] >= 0.996
    assert check["max_forbidden_leakage"] <= 1e-10
    assert check["unitarity_drift"] <= 1e-10


def test_validate_always_json(capsys):
    code, out, _ = _run(
        capsys, ["validate", "--zetas", "3.141592653589793", "--grid", "128", "--format", "csv"]
    )
    assert code == 0
    assert out.lstrip().startswith("{")
    json.loads(out)


def test_validate_flags_out_of_regime(capsys):
    # strong detuning breaks the first-order formulas but not the solver
    code, out, _ = _run(
        capsys, ["validate", "--delta", "0.5", "--zetas", "0.5", "--grid", "128"]
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["overall_pass"] is False
    check = payload["checks"][0]
    assert check["pass_unitarity"] is True
    assert check["pass_selection_rules"] is True
    assert check["pass_quasienergy"] is False


def test_usage_errors_exit_2(capsys):
    for argv in (
        ["weights"],
        ["weights", "--zetas", "-1"],
        ["weights", "--zetas", "1", "--steps", "100"],
        ["nonsense"],
        [],
    ):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == 2
        capsys.readouterr()


def test_runtime_error_exits_3(capsys):
    code, out, err = _run(
        capsys, ["weights", "--zetas", "40", "--steps", "64", "--grid", "64"]
    )
    assert code == 3
    assert out == ""
    assert "error:" in err


def test_unwritable_output_exits_3(capsys):
    code, _, err = _run(
        capsys,
        [
            "weights",
            "--zetas",
            "0",
            "--grid",
            "64",
            "--out",
            "/nonexistent_dir_zz/out.csv",
        ],
    )
    assert code == 3
    assert "cannot write" in err


def test_float_formatting_roundtrip():
    for x in (math.pi, 0.1, 1.0 / 3.0, 1e-300, 0.015212108882204693, 123456.7890123):
        assert float(_f17(x)) == x
    assert _f17(1.0) == "1"


def test_render_rejects_unknown_format():
    with pytest.raises(DomainError):
        render({"rows": []}, "yaml")
