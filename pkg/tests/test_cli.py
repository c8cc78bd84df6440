import csv
import io
import json
import os
import subprocess
import sys

import pytest

from cubicfields import cli
from cubicfields.construct import build_construction
from cubicfields.errors import IntegralityError, InternalConsistencyError
from cubicfields.sieve import SieveSpec, count_in_window


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_field_t1(capsys):
    code, out, _ = run(capsys, "field", "--t", "1")
    assert code == 0
    assert "conductor: 13" in out and "h: 1" in out
    assert "absL_exact: 0.648085907789" in out


def test_field_json(capsys):
    code, out, _ = run(capsys, "field", "--t", "2", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["h"] == 1 and rec["conductor"] == 19 and rec["splitting"]["19"] == "ramified"


@pytest.mark.parametrize("t, g", [(5, 49), (3, 27)])
def test_field_not_squarefree(capsys, t, g):
    code, out, _ = run(capsys, "field", "--t", str(t))
    assert code == 0
    assert f"conductor {g} not squarefree" in out and "\nh:" not in out


def test_char(capsys):
    code, out, _ = run(capsys, "char", "--t", "1", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["values"]["5"] == 0 and rec["values"]["7"] in (1, 2) and rec["values"]["13"] is None


def test_census_csv(capsys):
    code, out, _ = run(capsys, "census", "--t-max", "100")
    assert code == 0
    rows = data_rows(out)
    assert rows[0] == "t,g,d,R,absL,h,ratio,split_bound"
    assert len(rows) - 1 == 64
    assert "# count ratio>=0.139438195962 (threshold_4_91)" in out


def test_census_json_roundtrip(capsys):
    _, csv_out, _ = run(capsys, "census", "--t-max", "60")
    _, json_out, _ = run(capsys, "census", "--t-max", "60", "--format", "json")
    recs = [json.loads(line) for line in json_out.splitlines()]
    assert all(list(r) == cli.CENSUS_COLUMNS for r in recs[:-1])
    assert cli.census_json_to_csv(json_out) == csv_out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, out, _ = run(capsys, "census", "--t-max", "20", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("t,g,d,")


def test_tuples_empty_desk_scale(capsys):
    code, out, _ = run(capsys, "tuples", "--k", "2", "--x", "1e16", "--epsilon", "0.3")
    assert code == 0
    assert "# no tuples: no tuples at this scale" in out


def test_tuples_construction_block_and_determinism(capsys):
    argv = ["tuples", "--k", "1", "--x", "1e20", "--epsilon", "0.163", "--max-tuples", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "# gaps" not in first
    sections = first.split("# ")
    con = next(s for s in sections if s.startswith("construction"))
    q = int(list(csv.DictReader(io.StringIO(con.split("\n", 1)[1])))[0]["q"])
    offs = next(s for s in sections if s.startswith("offsets"))
    primes = next(s for s in sections if s.startswith("primes"))
    a = [int(r["a"]) for r in csv.DictReader(io.StringIO(offs.split("\n", 1)[1]))]
    table = {int(r["p"]): [int(v) for v in r["residues"].split(";")] for r in csv.DictReader(io.StringIO(primes.split("\n", 1)[1]))}
    prod = 1
    for p, res in table.items():
        prod *= p
        assert [aj % p for aj in a] == res
    assert prod == q
    c = build_construction(1, 0.163, 10**20)
    assert tuple(a) == c.a


def test_tuples_json(capsys):
    code, out, _ = run(capsys, "tuples", "--k", "1", "--x", "1e20", "--epsilon", "0.163", "--max-tuples", "2", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and recs[0]["type"] == "construction"
    fields = [r for r in recs if r["type"] == "field"]
    assert len(fields) == 2 and [r["t"] for r in fields] == sorted(r["t"] for r in fields)


def test_sieve_count_matches_library_and_brute_force(capsys):
    argv = ["sieve-count", "--x", "5000", "--alpha", "0.5", "--a", "1", "--q", "6", "--offsets", "0,4", "--floor", "3", "--z", "60"]
    _, out, _ = run(capsys, *argv)
    _, brute, _ = run(capsys, *argv, "--brute-force")
    n = int(out.split("N_alpha=")[1].split()[0])
    assert n == int(brute.split("N_alpha=")[1].split()[0])
    assert n == count_in_window(SieveSpec(5000, 0.5, 1, 6, (0, 4), 3, 60))
    assert "method=brute_force" in brute


def test_sieve_count_empty_window(capsys):
    code, out, _ = run(capsys, "sieve-count", "--x", "100", "--alpha", "0.02", "--a", "5", "--q", "30", "--floor", "5", "--z", "50")
    assert code == 0 and "N_alpha=0" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["census", "--t-max", "5000"],
        ["census", "--t-max", "10", "--backend", "magic"],
        ["tuples", "--k", "3", "--x", "1e16", "--epsilon", "0.2"],
        ["tuples", "--k", "0", "--x", "1e16", "--epsilon", "0.5"],
        ["field", "--t", "-4"],
        ["field", "--t", "1.5"],
        ["field", "--t", "1", "--threads", "0"],
        ["sieve-count", "--x", "100", "--alpha", "2", "--a", "1", "--q", "6", "--floor", "3"],
        ["sieve-count", "--x", "100", "--alpha", "0.5", "--a", "1", "--q", "6", "--floor", "3", "--offsets", "0,x"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as ei:
        sys.exit(cli.main(argv))
    assert ei.value.code == 1


@pytest.mark.parametrize("exc", [InternalConsistencyError("f_t has 1 root mod p"), IntegralityError("h = 1.3", 1.3)])
def test_internal_error_exit_2(capsys, monkeypatch, exc):
    def boom(*args, **kwargs):
        raise exc

    monkeypatch.setattr(cli, "run_census", boom)
    code, out, err = run(capsys, "census", "--t-max", "10")
    assert code == 2 and out == "" and "internal consistency" in err


def test_module_entry_point():
    env = dict(os.environ)
    out = subprocess.run(
        [sys.executable, "-m", "cubicfields", "field", "--t", "1", "--format", "json"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert json.loads(out.stdout)["h"] == 1


def test_threads_env_default(monkeypatch, capsys):
    monkeypatch.setenv("CUBICFIELDS_THREADS", "2")
    _, a, _ = run(capsys, "census", "--t-max", "30")
    _, b, _ = run(capsys, "census", "--t-max", "30", "--threads", "1")
    assert a == b
