import json
import subprocess
import sys

import pytest

from configlike.acceptance import BORSUK_ULAM, KNASTER_Q3, NEGATIVE_CONTROL
from configlike.cli import run


def call(argv, capsys):
    code = run(["--json-only"] + argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None), out


@pytest.fixture
def scenario_file(tmp_path):
    def write(data, name="s.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)
    return write


def test_homology_circle(capsys):
    code, rep, _ = call(["homology", "--family", "k-equal", "--q", "3", "--k", "3", "--p", "3"], capsys)
    assert code == 0 and rep["status"] == "pass" and rep["seed"] == 0
    assert rep["result"][0]["nonzero"] == {"1": 1}
    assert all(a["anchor"] for a in rep["assertions"])


def test_homology_v1_with_assertion(capsys):
    code, rep, _ = call(["homology", "--family", "v1", "--m", "2", "--q", "3", "--k", "2",
                         "--assert-connectivity"], capsys)
    assert code == 0 and [r["nonzero"] for r in rep["result"]] == [{"2": 5}] * 3


def test_homology_v1_needs_m(capsys):
    assert call(["homology", "--family", "v1", "--q", "3", "--k", "2"], capsys)[0] == 2


def test_cover_check(capsys):
    code, rep, _ = call(["cover-check", "--q", "5", "--k", "3", "--samples", "5000", "--seed", "1",
                         "--scalar", "rational"], capsys)
    assert code == 0 and rep["result"]["failures"] == [] and rep["seed"] == 1


def test_cover_check_p_torus_needs_prime_power(capsys):
    assert call(["cover-check", "--q", "6", "--k", "3", "--group", "p_torus"], capsys)[0] == 2


def test_coincide_borsuk_ulam(capsys, scenario_file):
    path = scenario_file(dict(BORSUK_ULAM, starts=10))
    code, rep, _ = call(["coincide", path], capsys)
    assert code == 0 and rep["result"]["residual"] < 1e-8


def test_coincide_negative_control_exits_one(capsys, scenario_file):
    code, rep, _ = call(["coincide", scenario_file(NEGATIVE_CONTROL)], capsys)
    assert code == 1 and rep["result"]["status"] == "budget_exhausted"


def test_knaster_scan(capsys, scenario_file):
    code, rep, _ = call(["knaster", scenario_file(KNASTER_Q3), "--scan"], capsys)
    assert code == 0 and "theta" in rep["result"]


def test_wrong_subcommand_for_target(capsys, scenario_file):
    assert call(["coincide", scenario_file(KNASTER_Q3)], capsys)[0] == 2
    assert call(["knaster", scenario_file(BORSUK_ULAM)], capsys)[0] == 2


@pytest.mark.parametrize("content", ["{not json", json.dumps({"domain": "sphere"}),
                                     json.dumps(dict(BORSUK_ULAM, k=7)),
                                     json.dumps(dict(BORSUK_ULAM, map={"expr": "import os"}))])
def test_invalid_input_exit_two(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert call(["coincide", str(p)], capsys)[0] == 2


def test_missing_file(capsys):
    assert call(["coincide", "/nonexistent/scenario.json"], capsys)[0] == 2


def test_unknown_flag_prints_usage(capsys):
    assert run(["homology", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_overrides_are_applied(capsys, scenario_file):
    code, rep, _ = call(["coincide", scenario_file(BORSUK_ULAM), "--starts", "3", "--seed", "5"], capsys)
    assert rep["seed"] == 5 and rep["result"]["starts_attempted"] == 3


def test_byte_identical_reports(capsys, scenario_file):
    path = scenario_file(dict(BORSUK_ULAM, starts=5))
    outs = [call(["coincide", path], capsys)[2] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [call(["cover-check", "--q", "4", "--k", "3", "--samples", "300"], capsys)[2] for _ in range(2)]
    assert outs[0] == outs[1]


def test_timing_flag_adds_wall_time(capsys):
    run(["--json-only", "--timing", "homology", "--family", "k-equal", "--q", "3", "--k", "3", "--p", "2"])
    assert "wall_time" in json.loads(capsys.readouterr().out)


def test_selftest_subset(capsys):
    code, rep, _ = call(["selftest", "--criteria", "4,5"], capsys)
    assert code == 0 and len(rep["assertions"]) == 4


def test_selftest_corrupt_group(capsys):
    code, rep, _ = call(["selftest", "--criteria", "4", "--inject", "corrupt-group"], capsys)
    assert code == 1
    bad = [a for a in rep["assertions"] if not a["passed"]]
    assert [a["name"] for a in bad] == ["group axioms"]


def test_selftest_zero_tolerance(capsys):
    code, rep, _ = call(["selftest", "--criteria", "4", "--inject", "zero-tolerance"], capsys)
    assert code == 1
    bad = [a for a in rep["assertions"] if not a["passed"]]
    assert bad[0]["name"] == "float patterns" and "AmbiguousPattern" in bad[0]["detail"]["error"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "configlike", "--json-only", "homology", "--family",
                           "k-equal", "--q", "3", "--k", "3", "--p", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    assert json.loads(proc.stdout)["status"] == "pass"
