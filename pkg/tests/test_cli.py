import io
import json
import subprocess
import sys

import pytest

from quartic_zeta.cli import (EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, EXIT_SINGULAR, JobConfig,
                              ParseError, build_report, main, parse_curve, run)
from quartic_zeta.padic_core import fast_profile
from quartic_zeta.pipeline import compute

C4 = {"p": 7, "n": 1, "g": [1, 4, 4], "h": [1, 2, 4, 3, 5]}


def write(tmp_path, doc, name="curve.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def invoke(cfg):
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_schema_mapping():
    c = parse_curve(json.dumps({"p": 7, "n": 1, "g": [1, 0, 0], "h": [1, 0, 0, 1, 0]}))
    ctx = c.ctx
    assert [x.to_int() for x in c.gbar] == [1, 0, 0]
    assert [x.to_int() for x in c.hbar] == [1, 0, 0, 1, 0]
    assert ctx.q == 7


def test_vector_coefficients_for_n2():
    doc = {"p": 7, "n": 2, "modulus": [1, 0, 1],
           "g": [[1, 0], [0, 1], [4, 0]], "h": [[1, 0], [2, 3], [4, 0], [3, 0], [5, 1]]}
    c = parse_curve(json.dumps(doc))
    assert c.ctx.q == 49
    assert c.gbar[1] == c.ctx.gen()


@pytest.mark.parametrize("doc,fragment", [
    ({"p": 7, "n": 1, "g": [1, 0, 0]}, "'h'"),
    ({"p": 2, "n": 1, "g": [1, 0, 0], "h": [1, 0, 0, 1, 0]}, "characteristic 2"),
    ({"p": 9, "n": 1, "g": [1, 0, 0], "h": [1, 0, 0, 1, 0]}, "not prime"),
    ({"p": 7, "n": 1, "g": [1, 0, 9], "h": [1, 0, 0, 1, 0]}, "g[2]"),
    ({"p": 7, "n": 2, "g": [1, [0, 1], 0], "h": [1, 0, 0, 1, 0]}, "g[0]"),
    ({"p": 7, "n": 1, "g": [1, 0], "h": [1, 0, 0, 1, 0]}, "'g'"),
    ("{not json", "invalid JSON"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(ParseError) as exc:
        parse_curve(doc if isinstance(doc, str) else json.dumps(doc))
    assert fragment in str(exc.value)


def test_exit_code_parse(tmp_path):
    code, _, err = invoke(JobConfig(write(tmp_path, {"p": 7, "g": [1, 0, 0]}), preset="fast"))
    assert code == EXIT_PARSE and "error" in err


def test_exit_code_singular(tmp_path):
    path = write(tmp_path, {"p": 7, "n": 1, "g": [0, 0, 0], "h": [0, 0, 0, 0, 1]})
    code, _, err = invoke(JobConfig(path, preset="fast"))
    assert code == EXIT_SINGULAR and "singular" in err


def test_overrides_must_come_together(tmp_path):
    code, _, err = invoke(JobConfig(write(tmp_path, C4), N3=100))
    assert code == EXIT_PARSE


def test_verify_reports_matches(tmp_path):
    code, out, _ = invoke(JobConfig(write(tmp_path, C4), preset="fast", verify_r=3, json=True))
    assert code == EXIT_OK
    rep = json.loads(out)
    assert [row["match"] for row in rep["counts"]] == [True, True, True]
    assert rep["P"] == [1, 0, 0, 20, 0, 0, 343]
    assert rep["case"] == "Case4" and rep["certified"] is False


def test_mismatch_exit_code():
    # a tampered Weil polynomial must be caught by the oracle comparison
    from quartic_zeta.cli import parse_curve as pc
    res = compute(pc(json.dumps(C4)), fast_profile(7, 1))
    res.weil.P = [1, 1, 0, 20, 0, -49, 343]
    _, mismatch = build_report(res, 1)
    assert mismatch
    assert EXIT_MISMATCH == 5


def test_output_is_deterministic_without_timings(tmp_path):
    path = write(tmp_path, C4)
    outs = [invoke(JobConfig(path, preset="fast", json=True, timings=False))[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert "timings_ms" not in json.loads(outs[0])


def test_text_output(tmp_path):
    code, out, _ = invoke(JobConfig(write(tmp_path, C4), preset="fast", verify_r=1))
    assert code == EXIT_OK
    assert "P " in out and "match" in out and "timings_ms" in out


def test_bench_reports_both_modes(tmp_path):
    code, out, _ = invoke(JobConfig(write(tmp_path, C4), preset="fast", bench=True, json=True))
    assert code == EXIT_OK
    bench = json.loads(out)["bench"]
    assert set(bench["split"]) == set(bench["full"]) == {"step1", "step2", "step3", "step4", "step5"}
    assert bench["predicted"] == 0.45 and bench["ratio"] > 0


def test_main_entry_point(tmp_path, capsys):
    code = main(["compute", "--input", write(tmp_path, C4), "--fast", "--no-timings"])
    assert code == EXIT_OK
    assert "Case4" in capsys.readouterr().out


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "quartic_zeta.cli", "compute", "--input",
                           write(tmp_path, C4), "--fast", "--json", "--no-timings"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["P_E"][0] == 1
