"""End-to-end command behavior: files, JSON schemas, exit codes."""

import json

import numpy as np
import pytest

from flatwalsh import boolfun, cli, gf2n


def run(argv):
    return cli.main(argv)


def test_construct_writes_files(tmp_path):
    table = tmp_path / "f.tt"
    report = tmp_path / "f.json"
    code = run(["construct", "--n", "9", "--v", "7", "--seed", "1",
                "--restarts", "2", "--budget", "100",
                "--out-table", str(table), "--out-report", str(report)])
    assert code == 0
    assert table.exists() and report.exists()
    rep = json.loads(report.read_text())
    assert set(rep) == {"manifest", "construction", "spectrum_summary",
                        "solver", "timings"}
    assert set(rep["spectrum_summary"]) == {
        "max_f_hat", "max_f1_hat", "max_f2_hat", "epsilon_measured",
        "spencer_bound", "proposition_bound"}
    assert rep["manifest"]["command"] == "construct"
    assert rep["manifest"]["version"]
    assert rep["construction"]["modulus"] == 0b1000000011
    assert rep["solver"]["certified"] is True
    f = boolfun.read_table(table)
    assert f.n == 9 and f.is_total


def test_construct_roundtrip_spectrum(tmp_path):
    table = tmp_path / "f.tt"
    report = tmp_path / "f.json"
    spec_out = tmp_path / "spec.json"
    run(["construct", "--n", "9", "--v", "7", "--seed", "2",
         "--restarts", "2", "--budget", "100",
         "--out-table", str(table), "--out-report", str(report)])
    assert run(["spectrum", str(table), "--out", str(spec_out)]) == 0
    spec = json.loads(spec_out.read_text())
    f = boolfun.read_table(table)
    ctx = gf2n.make_field(9)
    coeffs = boolfun.field_transform(ctx, f.values)
    assert spec["coeffs"] == [int(x) for x in coeffs]
    assert spec["max_abs_coeff"] == int(np.abs(coeffs).max())
    rep = json.loads(report.read_text())
    assert spec["max_abs_coeff"] == round(
        rep["spectrum_summary"]["max_f_hat"] * 2 ** 4.5)


def test_construct_balanced(tmp_path):
    table = tmp_path / "b.tt"
    report = tmp_path / "b.json"
    code = run(["construct", "--n", "9", "--v", "7", "--seed", "3",
                "--restarts", "2", "--budget", "100", "--balanced",
                "--g-mode", "random",
                "--out-table", str(table), "--out-report", str(report)])
    assert code == 0
    f = boolfun.read_table(table)
    assert boolfun.is_balanced(f)
    rep = json.loads(report.read_text())
    cons = rep["construction"]
    assert cons["h_sum"] == -1
    assert cons["balance_flips"] == abs(cons["h_sum_before"] + 1) // 2


def test_construct_determinism(tmp_path):
    outs = []
    for tag in ("a", "b"):
        table = tmp_path / f"{tag}.tt"
        report = tmp_path / f"{tag}.json"
        run(["construct", "--n", "9", "--v", "7", "--seed", "9",
             "--restarts", "2", "--budget", "100",
             "--out-table", str(table), "--out-report", str(report)])
        outs.append((table.read_text(), json.loads(report.read_text())))
    assert outs[0][0] == outs[1][0]
    assert outs[0][1]["spectrum_summary"] == outs[1][1]["spectrum_summary"]
    assert outs[0][1]["construction"]["h_hex"] == outs[1][1]["construction"]["h_hex"]


@pytest.mark.parametrize("argv", [
    ["construct", "--n", "10", "--v", "7"],      # even n
    ["construct", "--n", "9", "--v", "8"],       # v not a power of 7
    ["construct", "--n", "9", "--v", "49"],      # n not a multiple of ord
    ["construct", "--n", "15", "--v", "7", "--seed", "0", "--restarts", "0"],
    ["rho", "--n", "6"],
    ["gauss", "--n", "9", "--v", "5"],
])
def test_invalid_parameters_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2


def test_gauss_output(capsys):
    assert run(["gauss", "--n", "3", "--v", "7"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sums"][0] == {"j": 0, "re": -1.0, "im": 0.0, "abs2": 1.0}
    assert len(data["sums"]) == 7
    for entry in data["sums"][1:]:
        assert entry["abs2"] == pytest.approx(8.0, rel=1e-9)


def test_rho_command(capsys):
    assert run(["rho", "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["rho"] == 6


def test_search_s_command(capsys):
    assert run(["search-s", "--e", "1", "--epsilon", "0.2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["found"] is True
    assert data["s"] == 13


def test_spectrum_all_ones(tmp_path, capsys):
    table = tmp_path / "ones.tt"
    boolfun.write_table(table, boolfun.sign_function([1] * 16))
    assert run(["spectrum", str(table)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["nonzero"] == 1
    assert data["max_abs_coeff"] == 16


def test_spectrum_missing_file(tmp_path):
    assert run(["spectrum", str(tmp_path / "nope.tt")]) == 2


def test_verify_table_good(tmp_path, capsys):
    table = tmp_path / "t.tt"
    rng = np.random.default_rng(0)
    boolfun.write_table(table, boolfun.sign_function(
        (1 - 2 * rng.integers(0, 2, 64)).astype(np.int8)))
    code = run(["verify", "--level", "fast", "--table", str(table)])
    out = capsys.readouterr().out
    assert code == 0
    assert "table-file" in out and "FAIL" not in out


def test_verify_corrupted_table_exit_nonzero(tmp_path):
    bad = tmp_path / "bad.tt"
    bad.write_text("n=3\nzz\n")
    assert run(["verify", "--level", "fast", "--table", str(bad)]) == 2


def test_verify_identity_failure_exit_3(monkeypatch, capsys, tmp_path):
    monkeypatch.setattr(cli, "_check_orders",
                        lambda: (False, "forced failure for the negative path"))
    report = tmp_path / "verify.json"
    code = run(["verify", "--level", "fast", "--report", str(report)])
    assert code == 3
    assert "FAIL multiplicative-orders" in capsys.readouterr().out
    rep = json.loads(report.read_text())
    assert rep["ok"] is False
    assert any(not c["ok"] for c in rep["checks"])


def test_atomic_write_replaces_existing(tmp_path):
    target = tmp_path / "out.json"
    target.write_text("old")
    cli._write_atomic(str(target), "new contents\n")
    assert target.read_text() == "new contents\n"
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".flatwalsh-")]
