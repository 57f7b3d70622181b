import csv
import io
import subprocess
import sys

import pytest

from stripemin.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def data_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def test_exact_table(capsys):
    code, out, _ = run(["exact"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert rows[0] == ["lambda", "phi0", "e_const", "mu1", "mu2", "theta", "delta_E"]
    assert rows[-1] == ["lambda_c", "1.500000000"]
    one = next(r for r in rows[1:] if r[0] == "1")
    assert float(one[1]) == pytest.approx(1 / 3, abs=1e-9)
    assert float(one[2]) == pytest.approx(2 / 3, abs=1e-9)
    assert out.splitlines()[-1].startswith("# config_sha256=")


def test_verify_campaign_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, _, _ = run(["verify", "--seed", "42", "--cases", "100", "--out", str(p)], capsys)
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = data_rows(paths[0].read_text())
    assert rows[0] == ["seed", "case", "check", "blocks", "lhs", "rhs", "margin"]
    assert len(rows) == 101
    for r in rows[1:]:
        assert float(r[6]) >= -1e-8 * (1 + abs(float(r[4])))


def test_verify_single_check(capsys):
    code, out, _ = run(["verify", "--check", "chessboard", "--cases", "5", "--seed", "1"], capsys)
    assert code == 0
    assert {r[2] for r in data_rows(out)[1:]} == {"chessboard"}


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[kernel]\nstrength = 2.0\ncomponents = 0.5:1.0, 0.5:3.0\n"
                   "[local_term]\nvariant = quartic\n[run]\ncases = 4\nseed = 3\n")
    code, out, _ = run(["verify", "--config", str(cfg), "--cases", "2"], capsys)
    assert code == 0
    assert len(data_rows(out)) == 3


@pytest.mark.parametrize("text,needle", [
    ("[run]\nh = abc\n", "bad.ini:2:"),
    ("[kernel]\ncomponents = 0.5:1.0, 0.4:2.0\n", "kernel"),
    ("[local_term]\nvariant = sextic\n", "variant"),
    ("[run]\nt_min = 0.1\nh = 0.05\n", "h"),
])
def test_config_errors_exit_2(tmp_path, capsys, text, needle):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    code, _, err = run(["verify", "--config", str(cfg), "--cases", "1"], capsys)
    assert code == 2
    assert needle in err


def test_sweep_needs_couplings(capsys):
    code, _, err = run(["sweep"], capsys)
    assert code == 2 and "lambda" in err


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(["exact", "--config", str(tmp_path / "nope.ini")], capsys)
    assert code == 2


def test_point_with_fixed_period(capsys):
    code, out, _ = run(["point", "--lambda", "3", "--period", "2.8"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert rows[0] == ["x", "f"]
    assert float(rows[1][1]) == 0.0 and float(rows[-1][1]) == 0.0
    assert "el_residual=" in out and "converged=True" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "stripemin", "exact", "--lambda", "1.5"],
                         capture_output=True, text=True, check=True)
    assert "lambda_c,1.500000000" in res.stdout


@pytest.mark.slow
def test_sweep_two_couplings(monkeypatch, capsys):
    monkeypatch.setenv("STRIPEMIN_THREADS", "1")
    code, out, _ = run(["sweep", "--lambda", "1,3"], capsys)
    assert code == 0
    rows = data_rows(out)[1:]
    assert rows[0][4] == "constant" and float(rows[0][2]) == pytest.approx(2 / 3, abs=1e-6)
    assert rows[1][4] == "periodic" and float(rows[1][2]) < 6 / 7
