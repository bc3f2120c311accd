import csv
import io
import json
import subprocess
import sys

import mpmath as mp
import pytest

from hyperwell.cli import main
from oracles import oracle_eigenvalue


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_json_rows(capsys):
    code, out, _ = run(capsys, "solve", "--m", "1", "--v", "5", "--beta", "0")
    assert code == 0
    payload = json.loads(out)
    row = payload["rows"][0]
    assert set(row) >= {"m", "v", "beta", "n", "epsilon", "method", "iterations", "residual"}
    assert isinstance(row["epsilon"], str)
    assert row["epsilon"].startswith("-0.54795220509546095910")
    truth = oracle_eigenvalue(1, 0, 5, mp.mpf(row["epsilon"]))
    assert abs(mp.mpf(row["epsilon"]) - truth) < mp.mpf(10) ** -25


def test_solve_empty_sector(capsys):
    code, _, err = run(capsys, "solve", "--m", "0", "--v", "1", "--beta", "0.5")
    assert code == 3


def test_solve_two_pt_levels_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "solve", "--m", "0", "--v", "16", "--beta", "0", "--levels", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["0", "1"]
    assert mp.nstr(mp.mpf(rows[0]["epsilon"]), 20) == mp.nstr(-(mp.sqrt(65) - 1) ** 2 / 4, 20)


def test_global_options_after_subcommand(capsys):
    code, out, _ = run(capsys, "exact", "--v", "25", "--beta", "0", "--format", "csv", "--digits", "40")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3 and all(r["count"] == "3" for r in rows)
    assert len(rows[0]["epsilon"].lstrip("-").replace(".", "")) <= 41


def test_exact_closed_form(capsys):
    code, out, _ = run(capsys, "exact", "--v", "1", "--beta", "0")
    assert code == 0
    eps = mp.mpf(json.loads(out)["rows"][0]["epsilon"])
    assert abs(eps + (3 - mp.sqrt(5)) / 2) < mp.mpf(10) ** -95


def test_exact_empty(capsys):
    assert run(capsys, "exact", "--v", "0.1", "--beta", "0.5")[0] == 3


def test_qes_zero_degree(capsys):
    code, out, _ = run(capsys, "qes", "--N", "0", "--beta", "0")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 1
    assert rows[0]["v"].startswith("57.844410")
    assert mp.nstr(mp.mpf(rows[0]["epsilon"]), 16) == "-5.302775637731995"


def test_qes_scan_range_note(capsys):
    code, _, err = run(capsys, "qes", "--N", "0", "--beta", "0", "--tmax", "5")
    assert code == 3
    assert "scan range" in err


def test_qes_degree_four_odd(capsys):
    code, out, _ = run(capsys, "--format", "csv", "qes", "--N", "4", "--beta", "0.5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert any(r["epsilon"].startswith("-1027.866880025139082") for r in rows)


def test_heun_quadratic_roots(capsys):
    args = ["heun", "--a1", "1", "--a2", "1", "--b0", "1", "--b1", "3", "--b2", "1", "--N", "1", "--bracket", "-10", "10"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    taus = sorted(mp.mpf(r["tau0"]) for r in json.loads(out)["rows"])
    assert abs(taus[0] - (3 - mp.sqrt(5)) / 2) < mp.mpf(10) ** -80


def test_wavefunction_qes_at_origin(capsys):
    code, out, _ = run(capsys, "wavefunction", "--source", "qes", "--N", "0", "--beta", "0",
                       "--zmin", "-1", "--zmax", "1", "--points", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["z", "psi"]
    assert abs(mp.mpf(rows[1]["psi"]) - mp.exp(-(4 + mp.sqrt(13)) / 2)) < mp.mpf(10) ** -90
    zs = [mp.mpf(r["z"]) for r in rows]
    assert zs == sorted(zs)


def test_wavefunction_odd_pt_and_m1(capsys):
    for source in ("pt", "m1"):
        code, out, _ = run(capsys, "wavefunction", "--source", source, "--v", "25", "--beta", "0.5",
                           "--zmin", "-2", "--zmax", "2", "--points", "5")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert mp.mpf(rows[2]["psi"]) == 0
        assert abs(mp.mpf(rows[0]["psi"]) + mp.mpf(rows[4]["psi"])) < mp.mpf(10) ** -50


def test_wavefunction_pt_ground_state(capsys):
    code, out, _ = run(capsys, "wavefunction", "--source", "pt", "--v", "1", "--beta", "0", "--points", "7")
    k = mp.sqrt((3 - mp.sqrt(5)) / 2)
    for r in csv.DictReader(io.StringIO(out)):
        assert abs(mp.mpf(r["psi"]) - mp.sech(mp.mpf(r["z"])) ** k) < mp.mpf(10) ** -90


def test_table_one(capsys):
    code, out, _ = run(capsys, "table", "--id", "1", "--format", "text")
    assert code == 0
    assert "MISMATCH" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--m", "7", "--v", "1", "--beta", "0"],
        ["solve", "--m", "1", "--v", "-3", "--beta", "0"],
        ["solve", "--m", "1", "--v", "3", "--beta", "0.25"],
        ["exact", "--v", "3", "--beta", "0", "--digits", "10"],
        ["exact", "--v", "3", "--beta", "0", "--r0", "1.5"],
        ["wavefunction", "--source", "qes", "--beta", "0"],
        ["table", "--id", "9"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_missing_qes_pair_is_empty(capsys):
    code = run(capsys, "wavefunction", "--source", "qes", "--N", "0", "--beta", "0", "--n", "3")[0]
    assert code == 3


def test_environment_sets_default_precision():
    cmd = [sys.executable, "-m", "hyperwell", "exact", "--v", "1", "--beta", "0"]
    out = subprocess.run(cmd, capture_output=True, text=True, env={"HYPERWELL_DIGITS": "35", "PATH": ""}, check=True)
    eps = json.loads(out.stdout)["rows"][0]["epsilon"]
    assert len(eps.lstrip("-").replace(".", "").lstrip("0")) <= 36
    bad = subprocess.run(cmd, capture_output=True, text=True, env={"HYPERWELL_DIGITS": "abc", "PATH": ""})
    assert bad.returncode == 1
