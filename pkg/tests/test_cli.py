import json

import pytest

from itermap import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestAnalyze:
    def test_basic(self, capsys, tmp_path):
        p = tmp_path / "f.txt"
        p.write_text("5 2 1 4 5 3\n")
        code, out, _ = run(capsys, "analyze", str(p))
        assert code == 0
        payload = json.loads(out)
        assert payload["T"] == "6" and payload["B"] == "6" and payload["O"] == "6"

    def test_parse_error(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("2 0 1\n")
        code, _, err = run(capsys, "analyze", str(p))
        assert code == cli.EXIT_PARSE
        assert "invalid target" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", str(tmp_path / "nope"))
        assert code == cli.EXIT_IO
        assert "error" in err


class TestExact:
    def test_table_with_crosschecks(self, capsys):
        code, out, err = run(capsys, "exact", "--n", "4")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,E_T_num,E_T_den,E_B_num,E_B_den"
        assert lines[2] == "2,5,4,5,4"
        assert lines[4] == "4,431,256,437,256"
        assert err.count("PASS") == 4 and "FAIL" not in err

    def test_orders_table(self, capsys):
        code, out, _ = run(capsys, "exact", "--n", "4", "--orders")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "m,M_num,M_den,b_num,b_den"
        assert lines[4] == "4,67,24,73,24"

    def test_ceiling(self, capsys):
        code, _, err = run(capsys, "exact", "--n", "100", "--orders")
        assert code == cli.EXIT_CEILING
        assert "too large" in err


class TestSeries:
    def test_eval(self, capsys):
        code, out, _ = run(capsys, "series", "--degree", "100", "--eval-n", "50", "100")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("n,log_E_B,rankin_log_bound")
        assert len(lines) == 3

    def test_coefficients(self, capsys):
        code, out, _ = run(capsys, "series", "--degree", "5", "--coefficients")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "m,e_coeff,mu"
        assert lines[1].startswith("0,1.0,1.0")

    def test_renyi_table(self, capsys):
        code, out, _ = run(capsys, "series", "--degree", "10", "--renyi-table")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "d,U_d,kappa_num,kappa_den,Q_d,c_d"
        assert lines[3].startswith("3,17,27,17,")

    def test_eval_above_degree(self, capsys):
        code, _, err = run(capsys, "series", "--degree", "10", "--eval-n", "50")
        assert code == cli.EXIT_CEILING
        assert "degree above configured cap" in err


class TestConstants:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "constants")
        assert code == 0
        payload = json.loads(out)
        assert 3.35 <= payload["k0"] <= 3.37
        assert payload["quadrature_error"] < 1e-8

    def test_bad_tolerance(self, capsys):
        code, _, err = run(capsys, "constants", "--tolerance", "1")
        assert code == cli.EXIT_CEILING
        assert "tolerance error" in err


class TestAsymptotics:
    def test_rows(self, capsys):
        code, out, _ = run(capsys, "asymptotics", "--n", "10000", "100000")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,leading,lower_log,upper_log,x_star,m_star"
        assert len(lines) == 3

    def test_small_n_rejected(self, capsys):
        code, _, err = run(capsys, "asymptotics", "--n", "10")
        assert code == cli.EXIT_CEILING


class TestSimulate:
    def test_csv_and_histogram(self, capsys, tmp_path):
        hpath = tmp_path / "hist.csv"
        code, out, _ = run(
            capsys, "simulate", "--n", "100", "--samples", "200", "--seed", "1",
            "--histogram", str(hpath),
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("n,samples,seed,blocks,mean_log_T")
        assert lines[1].startswith("100,200,1,")
        hlines = hpath.read_text().strip().splitlines()
        assert hlines[0] == "bin_low,bin_high,count,phi_delta"
        assert hlines[1].startswith("-inf,")

    def test_too_large(self, capsys):
        code, _, err = run(capsys, "simulate", "--n", "100000000", "--samples", "1")
        assert code == cli.EXIT_CEILING


def test_byte_identical_reruns(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(
            capsys, "simulate", "--n", "300", "--samples", "100", "--seed", "9"
        )
        assert code == 0
        outs.append(out.encode())
    assert outs[0] == outs[1]

    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "series", "--degree", "200", "--eval-n", "200")
        assert code == 0
        outs.append(out.encode())
    assert outs[0] == outs[1]
