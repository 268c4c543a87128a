import io
import json
import subprocess
import sys

import pytest

from ostrowski.cli import format_report, main, run
from ostrowski.exactreal import Real

PHI = "quad:(-1+1*sqrt(5))/2"


def cli(*argv, stdin=""):
    proc = subprocess.run([sys.executable, "-m", "ostrowski", *argv], input=stdin,
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout


def decode(js):
    return Real(int(js["p"]), int(js["q"]), int(js["d"]), int(js["r"]))


def test_cf_golden():
    code, out = cli("cf", "--alpha", PHI, "--depth", "10")
    assert code == 0
    data = json.loads(out)
    assert data["digits"] == [1] * 10
    assert data["period"] == {"preperiod_length": 0, "preperiod": [], "block": [1]}


def test_abs_expand_golden_half():
    code, out = cli("abs-expand", "--alpha", PHI, "--beta", "rat:1/2", "--depth", "16")
    assert code == 0
    data = json.loads(out)
    assert data["digits"][:5] == [0, 1, 0, 0, 1]
    assert data["audit"] == []


def test_identities_on_digit_list():
    code, data, _ = run(["identities", "--alpha", "cf:[1,2,3,4]", "--depth", "30"])
    assert code == 0 and data["mode"] == "interval" and data["passed"]
    assert len(data["identities"]) == 5


def test_byte_identical_output():
    args = ("alt-expand", "--alpha", "quad:(-1+1*sqrt(2))/1", "--gamma", "rat:-1/7")
    assert cli(*args) == cli(*args)


def test_expand_eval_round_trip(tmp_path):
    code, out = cli("abs-expand", "--alpha", PHI, "--beta", "rat:3/7", "--depth", "30")
    path = tmp_path / "e.json"
    path.write_text(out)
    code, data, _ = run(["abs-eval", "--alpha", PHI, "--input", str(path)])
    assert code == 0
    from fractions import Fraction
    lo, hi = decode(data["value"]), decode(data["value"]) + decode(data["error_bound"])
    assert lo <= Fraction(3, 7) <= hi


def test_alt_round_trip_through_stdin():
    _, out, _ = run(["alt-expand", "--alpha", PHI, "--gamma", "rat:-1/5", "--depth", "20"])
    code, data, _ = run(["alt-eval", "--alpha", PHI, "--input", "-"],
                        stdin=io.StringIO(json.dumps(out)))
    assert code == 0
    v, b = decode(data["value"]), decode(data["error_bound"])
    assert v - b <= Real(-1, 0, 0, 5) <= v + b


def test_batch_seeds_from_stdin():
    code, data, _ = run(["abs-expand", "--alpha", PHI, "--seed", "-", "--depth", "5"],
                        stdin=io.StringIO("rat:1/2\n\n" + PHI + "\n"))
    assert code == 0
    assert [r["digits"] for r in data["results"]][1] == [1]


def test_validate_commands():
    _, data, _ = run(["abs-validate", "--alpha", PHI, "--digits", "1,1"])
    assert (data["status"], data["condition"], data["index"]) == ("inadmissible", "ii", 1)
    _, data, _ = run(["alt-validate", "--alpha", PHI, "--digits", "", "--period", "1"])
    assert data["status"] == "admissible"
    _, data, _ = run(["alt-validate", "--alpha", PHI, "--digits", "", "--period", "1",
                      "--strictness", "definition"])
    assert data["status"] == "inadmissible"


def test_line_expand_and_theta_and_certify():
    _, data, _ = run(["line-expand", "--alpha", PHI, "--seed", "rat:-1/4", "--depth", "5"])
    assert data["b0"] == -1
    _, data, _ = run(["line-expand", "--alpha", PHI, "--seed", "rat:3", "--variant", "alt"])
    assert data["c0"] == -3 and data["digits"] == []
    code, data, _ = run(["theta", "--alpha", PHI, "--depth", "6"])
    assert code == 0 and [r["q"] for r in data["rows"]][1:] == ["1", "1", "2", "3", "5", "8",
                                                                "13"]
    code, data, _ = run(["certify", "--alpha", PHI, "--variant", "alt", "--depth", "4"])
    assert code == 0 and data["ok"]


@pytest.mark.parametrize("argv,error", [
    (["abs-expand", "--alpha", PHI, "--beta", "rat:0"], "SeedOutOfRange"),
    (["abs-expand", "--alpha", PHI, "--beta", "rat:1"], "SeedOutOfRange"),
    (["alt-expand", "--alpha", PHI, "--gamma", "quad:(1-1*sqrt(5))/2"], "SeedOutOfRange"),
    (["alt-expand", "--alpha", PHI, "--gamma", "rat:1"], "SeedOutOfRange"),
    (["abs-expand", "--alpha", "rat:1/3", "--beta", "rat:1/2"], "RationalBase"),
    (["abs-expand", "--alpha", PHI, "--beta", "quad:(0+1*sqrt(2))/3"], "MixedFields"),
    (["abs-eval", "--alpha", PHI, "--digits", "1,1"], "InadmissibleDigits"),
    (["certify", "--alpha", PHI, "--depth", "13"], "CapExceeded"),
    (["cf", "--alpha", "bogus"], "LiteralError"),
    (["abs-eval", "--alpha", PHI], "UsageError"),
    (["nope"], "UsageError"),
])
def test_rejections_exit_two(argv, error):
    code, data, _ = run(argv)
    assert code == 2
    assert data["error"]["type"] == error
    assert set(data["error"]) >= {"module", "operation", "index", "message"}


def test_exit_code_through_process():
    code, out = cli("abs-expand", "--alpha", PHI, "--beta", "rat:0")
    assert code == 2 and json.loads(out)["error"]["module"] == "ostrowski"


def test_table_format():
    code, data, fmt = run(["cf", "--alpha", PHI, "--depth", "3", "--format", "table"])
    text = format_report(data, fmt)
    assert "digits\t1,1,1" in text.splitlines()


def test_main_returns_code(capsys):
    assert main(["cf", "--alpha", "rat:7/3"]) == 0
    assert json.loads(capsys.readouterr().out)["digits"] == [3]
