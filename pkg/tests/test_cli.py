import csv
import io
import json
from fractions import Fraction

import pytest

from binomtail import cli
from binomtail.cli import decode_exact, main

import oracles


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def one(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    (rec,) = records(out)
    return code, rec["results"]


def test_sum(capsys):
    code, res = one(capsys, "sum", "24", "9")
    assert code == 0 and res["s"] == 2579130


def test_record_shape(capsys):
    _, out, _ = run(capsys, "sum", "5", "2")
    rec = json.loads(out)
    assert rec["schema_version"] == "1" and rec["command"] == "sum"
    assert rec["inputs"] == {"m": 5, "r": 2}


def test_q_and_t(capsys):
    assert one(capsys, "q", "6", "1")[1]["q"] == "30/7"
    assert one(capsys, "t", "8", "4")[1]["t"] == "219/163"
    assert one(capsys, "t", "4", "3")[1]["t"] == "16/15"


def test_cf(capsys):
    code, res = one(capsys, "cf", "4", "1", "--show-R", "--show-tails", "--head", "1")
    assert code == 0
    assert res["R"] == [12, 5, 2, 0]
    assert decode_exact(res["Q"]) == Fraction(12, 5)
    assert [decode_exact(x) for x in res["tails"]] == [Fraction(2, 5), 0]


def test_bounds_coarse(capsys):
    code, res = one(capsys, "bounds", "10", "3", "--method", "coarse")
    assert code == 0
    assert decode_exact(res["lo"]) == 4 and decode_exact(res["hi"]) == Fraction(34, 7)
    assert res["contains"]


def test_bounds_decimal_is_extra(capsys):
    code, res = one(capsys, "bounds", "10", "3", "--method", "heads", "--depth", "3",
                    "--target", "s", "--decimal", "6")
    assert code == 0 and decode_exact(res["exact"]) == oracles.s(10, 3)
    assert res["decimal"]["hi"] == "176.129032"


def test_bounds_out_of_domain(capsys):
    code, _, err = run(capsys, "bounds", "4", "4", "--method", "coarse")
    assert code == 2 and "r < (m+3)/2" in err


def test_maximize(capsys):
    code, res = one(capsys, "maximize", "--omega", "5/2", "--m", "8")
    assert code == 0
    assert (res["r_prime"], res["r0"], res["tie"]) == (2, 3, False)
    assert decode_exact(res["g_r0"]) == Fraction(744, 125)
    assert one(capsys, "maximize", "--omega", "sqrt:3", "--m", "10")[1]["r0"] == 4
    assert decode_exact(one(capsys, "maximize", "--omega", "3", "--m", "12")[1]["g_r0"]) == Fraction(299, 27)


def test_maximize_chain_verify(capsys):
    code, res = one(capsys, "maximize", "--omega", "sqrt:3", "--m", "10", "--chain-verify", "--decimal", "4")
    assert code == 0 and res["chain_verified"] and res["decimal"]["g_r0"] == "42.8889"


@pytest.mark.parametrize("argv", [
    ["sum", "3", "5"],
    ["sum", "-1", "0"],
    ["maximize", "--omega", "2.5", "--m", "3"],
    ["maximize", "--omega", "1/2", "--m", "3"],
    ["scan", "--omega", "5/2", "--m", "1..3", "--check", "formula"],
    ["scan", "--m", "1..3", "--check", "root3"],
    ["normal", "10", "11"],
    ["cf", "3", "3", "--head", "1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sum", "x", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--m", "5..2", "--check", "gap"])
    assert exc.value.code == 2


def test_failed_check_exits_1(capsys, monkeypatch):
    from binomtail.maximizer import CheckResult

    def broken(omega, m):
        return CheckResult("formula", m, omega, False, 0, 1, False, m, "forced failure")

    monkeypatch.setattr(cli, "check_formula_theorem", broken)
    code, out, _ = run(capsys, "scan", "--omega", "3", "--m", "1..2", "--check", "formula")
    assert code == 1 and all(not r["results"]["passed"] for r in records(out))


def test_scan_lines_in_order(capsys):
    code, out, _ = run(capsys, "scan", "--omega", "3", "--m", "1..20", "--check", "formula")
    recs = records(out)
    assert code == 0 and [r["inputs"]["m"] for r in recs] == list(range(1, 21))
    assert all(r["results"]["passed"] for r in recs)


@pytest.mark.parametrize("argv", [
    ["--omega", "sqrt:3", "--m", "0..60", "--check", "root3"],
    ["--m", "0..60", "--check", "omega2"],
    ["--omega", "5/2", "--m", "0..40", "--check", "gerhard"],
    ["--m", "1..30", "--check", "gap"],
    ["--omega", "11/10", "--m", "0..30", "--check", "dgap", "--d", "2"],
])
def test_scans_pass(capsys, argv):
    code, out, _ = run(capsys, "scan", *argv)
    assert code == 0 and records(out)


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--omega", "3", "--m", "1..4", "--check", "formula", "--csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["m"] for r in rows] == ["1", "2", "3", "4"]
    assert rows[1]["tie"] == "True"


def test_threads_deterministic(capsys):
    argv = ["scan", "--omega", "sqrt:2", "--m", "0..40", "--check", "gerhard"]
    single = run(capsys, *argv, "--threads", "1")[1]
    multi = run(capsys, *argv, "--threads", "4")[1]
    assert single == multi
    v1 = run(capsys, "verify", "--m-max", "15", "--threads", "1")[1]
    v4 = run(capsys, "verify", "--m-max", "15", "--threads", "3")[1]
    assert v1 == v4


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("BINOMTAIL_THREADS", "2")
    assert cli.thread_count(None) == 2
    assert cli.thread_count(1) == 1
    monkeypatch.setenv("BINOMTAIL_THREADS", "many")
    code, _, err = run(capsys, "verify", "--m-max", "2")
    assert code == 2 and "BINOMTAIL_THREADS" in err


def plot(capsys, *argv):
    code, out, _ = run(capsys, "plot-data", *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    return {int(r["r"]): r["g"] for r in rows}


def test_plot_data_normalized(capsys):
    rows = plot(capsys, "--omega", "2", "--m", "24", "--normalize")
    assert len(rows) == 25 and rows[9] == "1.0000"
    assert abs(float(rows[12]) - 0.4720) <= 2e-4


def test_plot_data_raw(capsys):
    rows = plot(capsys, "--omega", "1", "--m", "24", "--decimal", "0")
    assert rows[24] == "16777216"
    rows = plot(capsys, "--omega", "3/2", "--m", "24")
    peak = max(rows, key=lambda r: float(rows[r]))
    assert peak == 11 and round(float(rows[11])) == 81349


def test_normal(capsys):
    code, res = one(capsys, "normal", "100", "50")
    assert code == 0 and res["within"]
    assert abs(float(res["abs_diff"]) - 0.0398) < 1e-4
    code, res = one(capsys, "normal", "40", "10", "--p", "1/4", "--precision", "12")
    assert code == 0 and res["within"] and res["precision"] == 12


def test_verify(capsys):
    code, res = one(capsys, "verify", "--m-max", "12")
    assert code == 0 and res["passed"] and res["failures"] == 0 and res["checks"] > 0


@pytest.mark.parametrize("value", [Fraction(7, 3), Fraction(-5, 2), Fraction(4), 0])
def test_exact_round_trip(value):
    assert decode_exact(json.loads(json.dumps(cli.encode(Fraction(value))))) == value
