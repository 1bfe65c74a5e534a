import csv
import io
import math
import subprocess
import sys

import pytest

from burgesslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, list(csv.reader(io.StringIO(out))), err


def test_charsum_header_and_full_period(capsys):
    code, rows, _ = run(capsys, "charsum", "--q", "101", "--char-index", "5", "--H", "101", "--n-values", "0", "17")
    assert code == 0
    assert rows[0] == ["N", "H", "magnitude", "bound_chang", "bound_vin", "ratio_vin"]
    assert len(rows) == 3
    assert all(float(r[2]) < 1e-9 for r in rows[1:])


def test_charsum_gauss(capsys):
    code, rows, _ = run(capsys, "charsum", "--q", "101", "--coeffs", "0,1/101", "--H", "101", "--char-index", "7")
    assert code == 0
    assert float(rows[1][2]) == pytest.approx(math.sqrt(101), rel=1e-9)


def test_charsum_bound_columns(capsys):
    code, rows, _ = run(capsys, "charsum", "--q", "10007", "--coeffs", "0,1/3", "--h-exp", "0.4", "--samples", "3",
                        "--seed", "1")
    assert code == 0 and len(rows) == 4
    for r in rows[1:]:
        assert float(r[4]) > 0
        assert float(r[5]) == pytest.approx(float(r[2]) / float(r[4]))


def test_charsum_reproducible(capsys):
    argv = ["charsum", "--q", "1009", "--coeffs", "0.25,1/7,3/11", "--h-exp", "0.5", "--samples", "5", "--seed", "9"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_charsum_invalid(capsys):
    assert run(capsys, "charsum", "--q", "100")[0] == 2
    assert run(capsys, "charsum", "--q", "101", "--char-index", "0")[0] == 2
    assert run(capsys, "charsum", "--q", "101", "--coeffs", "x")[0] == 2


def test_jcount(capsys):
    code, rows, _ = run(capsys, "jcount", "--r", "2", "--d", "1", "--x-max", "6")
    assert code == 0
    assert rows[0] == ["X", "J", "J_bruteforce", "conjecture_ratio"]
    assert rows[2][:3] == ["2", "6", "6"]
    assert all(r[1] == r[2] for r in rows[1:])
    _, rows, _ = run(capsys, "jcount", "--r", "1", "--d", "3", "--x-max", "8")
    assert [int(r[1]) for r in rows[1:]] == list(range(1, 9))


def test_jcount_guard(capsys):
    code, rows, err = run(capsys, "jcount", "--r", "5", "--x-max", "100")
    assert code == 3 and rows == [] and "guard" in err


def test_bounds_kappa(capsys):
    code, rows, _ = run(capsys, "bounds", "--kappa", "0.05", "0.1", "--d", "2")
    assert code == 0
    assert rows[0][3:6] == ["delta_chang", "delta_chang_refined", "delta_vin"]
    first = rows[1]
    assert int(first[6]) == 40 and int(first[7]) == 14
    assert float(rows[2][4]) == pytest.approx(0.0025)


def test_bounds_rows_and_rejects(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code = main(["bounds", "--q", "1000003", "--h-exp", "0.4", "--d", "2", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][5] == "theorem"
    assert rows[-1][5].startswith("best:")
    rejects = list(csv.reader((tmp_path / "b.csv.rejects.csv").open()))
    assert rejects[0] == ["reason", "params"]
    assert any("vinogradov" in r[1] for r in rejects[1:])
    # rejected combinations never appear as rows
    assert not any(r[5] == "vinogradov" and int(r[3]) <= 3 for r in rows[1:])


def test_grid(capsys):
    code, rows, err = run(capsys, "grid")
    assert code == 0
    assert "r=2 d=2 Q=3: PASS 81/81" in err
    code, rows, err = run(capsys, "grid", "--r", "2", "--d", "2", "--Q", "3", "--tau", "4")
    assert code == 0 and "PASS 256/256" in err
    assert run(capsys, "grid", "--Q", "3")[0] == 2


def test_pipeline_moments(capsys):
    code, rows, _ = run(capsys, "pipeline", "--q", "1009", "--h-exp", "0.5")
    assert code == 0
    header = rows[0]
    assert header[0] == "q" and "moment_ratio" in header
    for r in rows[1:]:
        S1, S2 = int(r[6]), int(r[7])
        assert S1 <= S2


def test_pipeline_s4(capsys):
    code, rows, _ = run(capsys, "pipeline", "--what", "s4", "--q", "53", "--r", "2", "--d", "1", "--Q", "2",
                        "--tau", "4", "--char-index", "1")
    assert code == 0
    assert [int(r[7]) for r in rows[1:]] == [1, 6, 19, 44]


def test_pipeline_invalid(capsys):
    assert run(capsys, "pipeline", "--q", "1000")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "burgesslab", "charsum", "--q", "15"], capture_output=True, text=True)
    assert res.returncode == 2
    res = subprocess.run([sys.executable, "-m", "burgesslab", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "burgesslab" in res.stdout
