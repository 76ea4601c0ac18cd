import csv
import io
import json
import subprocess
import sys
import time

import pytest

from qvcompact import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def values(text):
    return [row["value"] for row in json.loads(text)]


def test_hilbert_examples(capsys):
    code, out, _ = run(capsys, "hilbert", "--q", "2", "--r", "2", "--n", "0:3")
    assert code == 0 and values(out) == [1, 3, 5, 7]
    _, out, _ = run(capsys, "hilbert", "--q", "5", "--r", "1", "--n", "0:4")
    assert values(out) == [1] * 5
    _, out, _ = run(capsys, "hilbert", "--q", "2", "--r", "3", "--n", "2", "--verify")
    rows = json.loads(out)
    assert rows[0]["value"] == 21 and rows[0]["verified"] is True


def test_hilbert_verification_over_cap_is_flagged(capsys):
    code, out, _ = run(capsys, "hilbert", "--q", "3", "--r", "3", "--n", "4", "--verify", "--cap-dim", "10")
    row = json.loads(out)[0]
    assert code == 0 and row["verified"] is None and "cap-dim" in row["note"]


def test_count_points_examples(capsys):
    _, out, _ = run(capsys, "count-points", "Q", "--q", "2", "--r", "2", "--m", "1", "--verify")
    total = json.loads(out)[-1]
    assert total["value"] == 3 and total["verified"] is True and total["method"] == "formula+bruteforce"
    _, out, _ = run(capsys, "count-points", "B", "--q", "2", "--r", "3", "--verify")
    assert json.loads(out)[-1]["value"] == 21
    _, out, _ = run(capsys, "count-points", "Omega", "--q", "2", "--r", "2", "--m", "2", "--verify")
    assert values(out) == [2]
    _, out, _ = run(capsys, "count-points", "P", "--q", "3", "--r", "3", "--m", "2", "--verify")
    assert json.loads(out)[-1]["value"] == (9**3 - 1) // 8


@pytest.mark.parametrize("argv", [
    ["verify", "relations", "--q", "3", "--r", "2"],
    ["verify", "strange-maps", "--q", "2", "--r", "2", "--m", "2"],
    ["verify", "charts", "--q", "2", "--r", "3", "--m", "2"],
    ["verify", "freeness", "--q", "2", "--r", "2", "--n", "0:4"],
    ["verify", "dickson", "--q", "3", "--r", "2", "--n", "0:8"],
    ["verify", "dualizing", "--q", "2", "--r", "2", "--n", "0:4"],
    ["verify", "strata", "--q", "2", "--r", "2", "--m", "2"],
    ["verify", "singular-locus", "--q", "2", "--r", "3", "--m", "2"],
    ["verify", "cohomology-identity", "--q", "3", "--r", "4", "--n", "0:10"],
    ["verify", "boundary-orders", "--q", "2", "--r", "3"],
    ["verify", "invariants", "--q", "2", "--r", "2", "--n", "0:3"],
])
def test_verify_suites_pass(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    rows = json.loads(out)
    assert rows and all(r["verified"] is True for r in rows)


def test_failing_suite_exit_code_and_witness(capsys, monkeypatch):
    def broken(cfg):
        yield cli.Check("ok-check", cfg.params(), 1, 1)
        yield cli.Check("bad-check", cfg.params(), 2, 3)

    monkeypatch.setitem(cli.SUITE_FUNCS, "relations", broken)
    code, out, err = run(capsys, "verify", "relations", "--q", "2", "--r", "2")
    assert code == 1
    assert "bad-check" in err and "observed 2" in err and "expected 3" in err
    assert [r["verified"] for r in json.loads(out)] == [True, False]


def test_config_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["hilbert", "--q", "6", "--r", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["verify", "nonsense", "--q", "2", "--r", "2"])
    with pytest.raises(SystemExit):
        cli.main(["hilbert", "--q", "2", "--r", "2", "--n", "3:1"])
    code, _, err = run(capsys, "hilbert", "--q", "2", "--r", "0")
    assert code == 2 and "error" in err


def test_infeasible_exit_code(capsys):
    code, _, err = run(capsys, "verify", "relations", "--q", "3", "--r", "4", "--cap-vectors", "10")
    assert code == 3 and "infeasible" in err and "--cap-vectors" in err


@pytest.mark.parametrize("argv,cap", [
    (["count-points", "B", "--q", "2", "--r", "9", "--m", "9"], "--cap-flags"),
    (["verify", "relations", "--q", "2", "--r", "13"], "--cap-vectors"),
    (["verify", "relations", "--q", "5", "--r", "5"], "--cap-dim"),
    (["verify", "dickson", "--q", "3", "--r", "3"], "--cap-dim"),
    (["verify", "dualizing", "--q", "3", "--r", "4"], "--cap-dim"),
    (["verify", "strata", "--q", "3", "--r", "4", "--m", "2"], "--cap-points"),
    (["verify", "charts", "--q", "3", "--r", "4", "--m", "2"], "--cap-bruteforce"),
    (["verify", "boundary-orders", "--q", "3", "--r", "4"], "--cap-bruteforce"),
    (["verify", "invariants", "--q", "2", "--r", "4"], "Cayley table"),
])
def test_caps_refuse_before_enumerating(capsys, argv, cap):
    start = time.perf_counter()
    code, _, err = run(capsys, *argv)
    assert code == 3 and cap in err
    assert time.perf_counter() - start < 10


def test_formats(capsys):
    argv = ["count-points", "Q", "--q", "2", "--r", "3", "--m", "2"]
    _, js, _ = run(capsys, *argv, "--format", "json")
    _, cs, _ = run(capsys, *argv, "--format", "csv")
    _, tx, _ = run(capsys, *argv, "--format", "text")
    parsed = list(csv.DictReader(io.StringIO(cs)))
    assert [int(r["value"]) for r in parsed] == values(js)
    assert tx.splitlines()[0].split()[:5] == ["q", "r", "m", "n", "value"]
    assert len(tx.splitlines()) == len(parsed) + 1


def test_determinism_byte_identical():
    argv = [sys.executable, "-m", "qvcompact", "verify", "strange-maps", "--q", "2", "--r", "3", "--m", "2",
            "--samples", "20", "--seed", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_output_dir_env(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "hilbert", "--q", "2", "--r", "2", "--format", "csv")
    path = tmp_path / "hilbert-q2-r2.csv"
    assert code == 0 and out.strip() == str(path) and path.read_text().startswith("q,r,m,n")
    code, out, _ = run(capsys, "hilbert", "--q", "2", "--r", "2", "--out", "sub/h.json")
    assert json.loads((tmp_path / "sub" / "h.json").read_text())[0]["value"] == 1
    absolute = tmp_path / "abs.json"
    run(capsys, "hilbert", "--q", "2", "--r", "2", "--out", str(absolute))
    assert absolute.exists()


def test_stdout_without_env(capsys, monkeypatch):
    monkeypatch.delenv(cli.OUTPUT_DIR_ENV, raising=False)
    _, out, _ = run(capsys, "hilbert", "--q", "4", "--r", "2", "--n", "1")
    assert values(out) == [5]
