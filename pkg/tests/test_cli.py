import csv
import io
import json

from endoscope.cli import FL_COLUMNS, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_verify_fl_oracle():
    code, out = run("verify-fl", "--q", "3", "--case", "e3", "--A", "1", "--B", "1", "--C", "1", "--r", "1",
                    "--mode", "oracle", "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["kappa_oracle"] == "1/1" and rec["stable_oracle"] == "1/1" and rec["pass"] == "true"
    assert (rec["delta_num"], rec["delta_den"]) == (1, 9)


def test_sweep_csv_deterministic():
    args = ("sweep-fl", "--q", "3", "--r", "0,1", "--max", "1", "--format", "csv")
    code, a = run(*args)
    _, b = run(*args)
    assert code == 0 and a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert list(rows[0]) == FL_COLUMNS
    assert all(r["pass"] == "true" for r in rows)
    keys = [(r["case"], int(r["q"]), int(r["A"]), int(r["B"]), int(r["C"] or 0), int(r["r"])) for r in rows]
    assert keys == sorted(keys)
    assert "\r" not in a


def test_orders_and_growth():
    code, out = run("orders", "--n", "3", "--q", "2", "--check-bruteforce", "--format", "csv")
    assert code == 0 and "U3,2,648,648,true" in out
    code, out = run("growth", "--ideal", "3,inert,4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["rows"][0]["beta_upper"] == "551124/1"
    code, out = run("growth", "--inert-sweep", "3,8")
    assert code == 0 and len(out.strip().splitlines()) == 9


def test_errors():
    code, out = run("growth", "--ideal", "3,inert,1;3,inert,2")
    assert code == 2 and json.loads(out)["code"] == "DUPLICATE_PLACE"
    code, out = run("growth", "--ideal", "3;inert")
    assert code == 2 and json.loads(out)["code"] == "PARSE_ERROR"
    code, out = run("sweep-fl", "--q", "7")
    assert code == 2 and json.loads(out)["code"] == "GRID_EXCEEDED"


def test_state_cap(monkeypatch):
    monkeypatch.setenv("ENDOSCOPE_MAX_STATES", "20")
    code, out = run("verify-fl", "--q", "3", "--case", "exel", "--A", "2", "--B", "2", "--mode", "oracle")
    assert code == 2 and json.loads(out)["code"] == "INFEASIBLE_GRID"
