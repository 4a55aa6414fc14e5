import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from cachendt.cli import decimal12, main
from cachendt.regions import classify_3x3
from cachendt import CachePoint


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_corner(capsys):
    code, out, _ = run(capsys, "compute", "--nt", "3", "--nr", "3", "--l", "3", "--mur", "0", "--mut", "1/3")
    assert code == 0
    rep = json.loads(out)
    assert rep["tau_upper"] == {"exact": "5/3", "decimal": 1.66666666667}
    assert rep["gap"]["exact"] == "1"
    assert rep["optimality"] == {"case": 3, "tau_star": {"exact": "5/3", "decimal": 1.66666666667}}
    assert rep["lower_argmax"] == {"l": 1, "s1": 1, "s2": 2}


def test_compute_2x2(capsys):
    code, out, _ = run(capsys, "compute", "--nt", "2", "--nr", "2", "--l", "2", "--mur", "1/2", "--mut", "0.5")
    assert code == 0
    assert json.loads(out)["tau_upper"]["exact"] == "1/2"


def test_compute_infeasible_exit_code(capsys):
    code, out, err = run(capsys, "compute", "--nt", "3", "--nr", "3", "--mur", "0", "--mut", "0")
    assert code == 2
    assert out == ""
    assert "mu_r + n_tx*mu_t" in err


def test_compute_uncoded_enables_tight_line_case(capsys):
    code, out, _ = run(capsys, "compute", "--nt", "3", "--nr", "3", "--mur", "1/4", "--mut", "1/4", "--uncoded")
    assert code == 0
    assert json.loads(out)["optimality"]["case"] == 4


def test_bad_rational_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--nt", "3", "--nr", "3", "--mur", "x", "--mut", "1"])
    assert exc.value.code == 2


def test_bad_config_exit_code(capsys):
    code, _, err = run(capsys, "compute", "--nt", "3", "--nr", "3", "--l", "2", "--mur", "1", "--mut", "1")
    assert code == 2 and "library" in err


def _csv(out):
    assert "\r" not in out
    return list(csv.DictReader(io.StringIO(out)))


def test_sweep_3x3_third_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--nt", "3", "--nr", "3", "--step", "1/3", "--mode", "regions")
    assert code == 0
    rows = _csv(out)
    # 16 lattice points minus (0,0), (1/3,0), (2/3,0)
    assert len(rows) == 13
    keys = [(F(r["mu_r_exact"]), F(r["mu_t_exact"])) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert F(r["tau_l1_exact"]) <= F(r["tau_upper_exact"])
        pt = CachePoint(r["mu_r_exact"], r["mu_t_exact"])
        assert r["region"] == str(classify_3x3(pt))
        assert r["tau_upper"] == decimal12(F(r["tau_upper_exact"]))


@pytest.mark.parametrize("mode,cols", [
    ("upper", ["mu_r", "mu_t", "tau_upper"]),
    ("lower", ["mu_r", "mu_t", "tau_l1", "tau_l2"]),
    ("gap", ["mu_r", "mu_t", "tau_upper", "tau_l1", "tau_l2", "gap"]),
])
def test_sweep_modes(capsys, mode, cols):
    code, out, _ = run(capsys, "sweep", "--nt", "2", "--nr", "3", "--step", "1/4", "--mode", mode)
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header == cols + [c + "_exact" for c in cols]


def test_sweep_rejects_big_step_and_missing_regions(capsys):
    assert run(capsys, "sweep", "--nt", "3", "--nr", "3", "--step", "2/3")[0] == 2
    assert run(capsys, "sweep", "--nt", "2", "--nr", "3", "--mode", "regions")[0] == 2


def test_sweep_to_file_and_json(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    assert run(capsys, "sweep", "--nt", "2", "--nr", "2", "--step", "1/2", "--out", str(path))[0] == 0
    text = path.read_bytes().decode("utf-8")
    assert text.endswith("\n") and "\r" not in text
    code, out, _ = run(capsys, "sweep", "--nt", "2", "--nr", "2", "--step", "1/2", "--json")
    assert code == 0
    assert [row["mu_r_exact"] for row in json.loads(out)] == [row["mu_r_exact"] for row in _csv(text)]


def test_regions_command(capsys):
    code, out, _ = run(capsys, "regions", "--nt", "2", "--nr", "2", "--step", "1/2")
    assert code == 0
    rows = _csv(out)
    got = {(r["mu_r_exact"], r["mu_t_exact"]): (r["region"], r["tau_exact"]) for r in rows}
    assert got[("0", "1/2")] == ("R2", "3/2")
    assert got[("1/2", "1/2")] == ("R1", "1/2")
    assert run(capsys, "regions", "--nt", "4", "--nr", "4")[0] == 2


@pytest.mark.parametrize("pt,ratios,ndt", [
    (("1/3", "2/3"), {"1,2": "1/9"}, "2/3"),
    (("2/3", "1/3"), {"2,1": "1/9"}, "1/3"),
    (("1", "0"), {"2,0": "1"}, "0"),
])
def test_simulate_with_ratio_file(capsys, tmp_path, pt, ratios, ndt):
    n = "2" if "2,0" in ratios else "3"
    path = tmp_path / "ratios.json"
    path.write_text(json.dumps(ratios))
    code, out, _ = run(capsys, "simulate", "--nt", n, "--nr", n, "--mur", pt[0], "--mut", pt[1],
                       "--ratios", str(path), "--seed", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["total_ndt"]["exact"] == ndt
    assert rep["all_decoded"] is True


def test_simulate_reports_groups(capsys):
    code, out, _ = run(capsys, "simulate", "--nt", "3", "--nr", "3", "--mur", "1/3", "--mut", "2/3")
    rep = json.loads(out)
    assert code == 0
    assert rep["file_size_bits"] >= 1
    assert rep["demand"] == [1, 2, 3]
    assert all(v["decoded"] for v in rep["receivers"])


def test_simulate_bad_ratios(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"1,2": "1/18"}))
    code, _, err = run(capsys, "simulate", "--nt", "3", "--nr", "3", "--mur", "1/3", "--mut", "2/3",
                       "--ratios", str(path))
    assert code == 2 and "invalid ratios" in err


@pytest.mark.parametrize("argv,case,limit", [
    (["--nt", "3", "--nr", "3", "--r", "1", "--t", "2", "--case", "A"], "A", "1"),
    (["--nt", "3", "--nr", "3", "--r", "0", "--t", "2", "--case", "B"], "B", "6/7"),
    (["--nt", "3", "--nr", "3", "--r", "0", "--t", "1", "--case", "C"], "C_tLtNT", "3/5"),
])
def test_verify_phy(capsys, argv, case, limit):
    code, out, _ = run(capsys, "verify-phy", *argv, "--seeds", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["case"] == case and rep["passed"]
    assert rep["limit_dof"]["exact"] == limit
    assert rep["seeds"] == [0, 1, 2]


def test_verify_phy_wrong_case(capsys):
    code, _, err = run(capsys, "verify-phy", "--nt", "3", "--nr", "3", "--r", "1", "--t", "2", "--case", "B")
    assert code == 2 and "belongs to case A" in err


def test_verify_phy_failure_exit_code(capsys, monkeypatch):
    import cachendt.cli as cli

    real = cli.verify_scheme

    def broken(scheme, symbol_seed=0):
        scheme.precoders[0, 0, :] += 1.0
        return real(scheme, symbol_seed)

    monkeypatch.setattr(cli, "verify_scheme", broken)
    code, out, _ = run(capsys, "verify-phy", "--nt", "2", "--nr", "2", "--r", "0", "--t", "2",
                       "--case", "A", "--seeds", "2")
    assert code == 4
    assert json.loads(out)["failures"]


def test_simulate_decode_failure_exit_code(capsys, monkeypatch):
    import cachendt.cachesim as sim

    real = sim.build_group_messages

    def corrupt(cfg, tx, demand, group):
        msgs = real(cfg, tx, demand, group)
        msgs[0].bits[0] ^= 1
        return msgs

    monkeypatch.setattr(sim, "build_group_messages", corrupt)
    code, out, _ = run(capsys, "simulate", "--nt", "3", "--nr", "3", "--mur", "1/3", "--mut", "1/3")
    assert code == 3
    assert json.loads(out)["all_decoded"] is False


def test_dof_table(capsys):
    code, out, _ = run(capsys, "dof-table", "--nt", "3", "--nr", "3")
    rows = _csv(out)
    assert code == 0 and len(rows) == 9
    cell = next(r for r in rows if (r["r"], r["t"]) == ("0", "2"))
    assert cell["per_user_exact"] == "6/7" and cell["sum_dof_exact"] == "18/7"


def test_decimal_rendering():
    assert decimal12(F(1, 3)) == "0.333333333333"
    assert decimal12(F(0)) == "0"
    assert decimal12(F(5, 1)) == "5"
    assert decimal12(F(-7, 4)) == "-1.75"


def test_console_script_is_byte_identical():
    argv = [sys.executable, "-m", "cachendt.cli", "sweep", "--nt", "3", "--nr", "3", "--step", "1/6"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
