import csv
import io
import json
import math
import subprocess
import sys

import pytest

from leroyatlas import cli, jsonfmt
from leroyatlas.errors import ConvergenceError


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


# -- eval ---------------------------------------------------------------------------


def test_eval_exponential():
    code, d = run_json("eval", "--params", "1,1,1", "--z", "1,0")
    assert code == 0
    assert d["value"]["re"] == pytest.approx(math.e, abs=1e-12)
    assert d["value"]["im"] == 0.0
    assert set(d) == {"value", "tail_bound", "terms_used"}


def test_eval_normalized_origin():
    code, d = run_json("eval", "--params", "1,1,1", "--z", "0,0", "--normalized")
    assert code == 0 and d["value"] == {"re": 0.0, "im": 0.0}


def test_eval_squared_factorials():
    code, d = run_json("eval", "--params", "1,1,2", "--z", "1,0")
    assert d["value"]["re"] == pytest.approx(math.fsum(1 / math.factorial(k) ** 2 for k in range(30)), abs=1e-12)


def test_eval_derivative_and_tol():
    code, d = run_json("eval", "--params", "1,1,1", "--z", "0.5,0", "--derivative", "2", "--tol", "1e-14")
    assert code == 0 and d["value"]["re"] == pytest.approx(2.5 * math.exp(0.5), abs=1e-13)


def test_eval_csv_has_12_digits():
    code, text = run("eval", "--params", "1,1,1", "--z", "1,0", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["value_re"] == "2.71828182846"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--params", "1,1", "--z", "1,0"],
        ["eval", "--params", "1,1,1", "--z", "abc"],
        ["eval", "--params", "1,1,1"],
        ["eval", "--z", "1,0"],
        ["eval", "--params", "1,1,1", "--z", "1,0", "--tol", "0.5"],
        ["frobnicate"],
    ],
)
def test_eval_usage_errors(argv, capsys):
    assert cli.main(argv, out=io.StringIO()) == 2
    assert capsys.readouterr().err


def test_eval_computational_error(capsys):
    code, _ = run("eval", "--params", "0.5,0.5,0.5", "--z", "5,0")
    assert code == 3
    assert "ConvergenceError" in capsys.readouterr().err


# -- check ------------------------------------------------------------------------------


def test_check_exit_codes():
    code, d = run_json("check", "--params", "3,1,1", "--theorem", "thm-3-1")
    assert code == 0 and d["satisfied"] is True
    code, d = run_json("check", "--params", "1,1,1", "--theorem", "thm-3-1")
    assert code == 1 and d["satisfied"] is False and d["clauses"]
    code, _ = run("check", "--params", "1,1,1", "--theorem", "no-such")
    assert code == 2
    code, _ = run("check", "--params", "1,1,1;2,1,1", "--theorem", "thm-3-1")
    assert code == 3


def test_check_json_shape_and_round_trip():
    code, text = run("check", "--params", "2,1,1", "--params", "1,2,1", "--theorem", "thm-4-2-star")
    d = jsonfmt.loads(text)
    assert {"theorem_id", "params", "satisfied", "clauses"} <= set(d)
    assert d["params"] == [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0]]
    assert {"name", "lhs", "relation", "rhs", "margin", "pass"} <= set(d["clauses"][0])
    assert jsonfmt.dumps(d) + "\n" == text


def test_check_ozaki_k_max():
    code, d = run_json("check", "--params", "2,1,1", "--theorem", "ozaki", "--k-max", "20")
    assert code == 0 and d["notes"] == "chain=descending; k_max=20"


def test_check_csv():
    code, text = run("check", "--params", "3,1,1", "--theorem", "thm-3-1", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 5 and rows[0]["theorem_id"] == "thm-3-1"


# -- verify -------------------------------------------------------------------------------


def test_verify_examples():
    code, d = run_json("verify", "--params", "1,1,1", "--property", "starlike", "--radius", "0.999")
    assert code == 0 and d["pass"] is True and d["extremal_value"] == pytest.approx(0.001, abs=1e-9)
    code, d = run_json("verify", "--params", "1,1,1", "--property", "bound", "--radius", "0.999")
    assert code == 1 and d["pass"] is False and d["witness"]["re"] == pytest.approx(0.999)
    code, d = run_json("verify", "--params", "3,1,1", "--property", "exp-subordination")
    assert code == 0 and d["pass"] is True


def test_verify_exit_code_independent_of_format():
    for prop in ("bound", "starlike", "convex"):
        a, _ = run("verify", "--params", "1,1,1", "--property", prop, "--radius", "0.45")
        b, _ = run("verify", "--params", "1,1,1", "--property", prop, "--radius", "0.45", "--output", "csv")
        assert a == b


def test_verify_normalization_error_exit_3(capsys):
    code, _ = run("verify", "--params", "1,3,1", "--property", "exp-subordination")
    assert code == 3 and "NormalizationError" in capsys.readouterr().err


def test_verify_grid_overrides():
    code, d = run_json("verify", "--params", "1,1,1", "--property", "starlike", "--grid-angles", "128",
                       "--grid-radii", "0.2,0.5,0.8")
    assert d["grid"] == {"angles": 128, "radii": [0.2, 0.5, 0.8]}
    assert d["extremal_value"] == pytest.approx(0.2, abs=1e-12)
    code, _ = run("verify", "--params", "1,1,1", "--property", "starlike", "--grid-radii", "0.5,0.2")
    assert code == 2


def test_verify_growth():
    code, d = run_json("verify", "--params", "1,1,1", "--property", "growth")
    assert code == 0 and d["grid"] is None and abs(d["extremal_value"]) <= 1e-12


def test_verify_dump_grid_and_figure(tmp_path):
    dump, fig = tmp_path / "g.csv", tmp_path / "f.png"
    code, _ = run("verify", "--params", "1,1,1", "--property", "convex", "--radius", "0.45",
                  "--grid-angles", "64", "--dump-grid", str(dump), "--figure", str(fig))
    assert code == 1
    rows = list(csv.reader(dump.open()))
    assert rows[0] == ["radius", "angle", "value"]
    assert len(rows) == 1 + 11 * 64
    assert fig.stat().st_size > 1000 and fig.read_bytes()[:4] == b"\x89PNG"


def test_verify_failing_is_byte_identical():
    argv = ("verify", "--params", "1,1,1", "--property", "convex", "--radius", "0.45")
    assert run(*argv) == run(*argv)


# -- radius ---------------------------------------------------------------------------------


def test_radius_examples():
    _, d = run_json("radius", "--params", "1,1,1", "--property", "starlike")
    assert d["radius"] == 0.999
    _, d = run_json("radius", "--params", "1,1,1", "--property", "convex")
    assert d["radius"] == pytest.approx((3 - math.sqrt(5)) / 2, abs=2e-4)
    _, d = run_json("radius", "--params", "3,1,1", "--property", "starlike")
    assert d["radius"] == 0.999


# -- sweep ------------------------------------------------------------------------------------


def test_sweep_thm_3_1(tmp_path, capsys):
    w = tmp_path / "w.jsonl"
    code, text = run("sweep", "--axis", "alpha:1:4:0.5", "--theorem", "thm-3-1", "--witness-file", str(w))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 7
    sat = [float(r["alpha"]) for r in rows if r["certificate_satisfied"] == "True"]
    assert sat == [3.0, 3.5, 4.0]
    err = capsys.readouterr().err
    summary = json.loads(err.strip().splitlines()[-1].removeprefix("summary "))
    assert summary == {"checked": 7, "satisfied": 3, "verified": 7, "disagreements": 0}
    assert w.read_text() == ""


def test_sweep_thm_3_1_threshold_oracle():
    # satisfied exactly where Gamma(alpha+1) > e^2/(e-1) (other clauses hold for alpha >= 1.5)
    code, text = run("sweep", "--axis", "alpha:1:4:0.5", "--theorem", "thm-3-1", "--witness-file", "/dev/null")
    for r in csv.DictReader(io.StringIO(text)):
        a = float(r["alpha"])
        expected = math.gamma(a + 1) > math.e**2 / (math.e - 1) and a >= 1.5
        assert (r["certificate_satisfied"] == "True") == expected


def test_sweep_without_theorems_is_usage_error():
    code, _ = run("sweep", "--axis", "alpha:1:4:0.5")
    assert code == 2


@pytest.mark.parametrize(
    "axis",
    ["alpha:1:4", "delta:1:2:1", "alpha:2:1:1", "alpha:1:2:0", "triple-index:0.5:2:1"],
)
def test_sweep_bad_axis(axis):
    code, _ = run("sweep", "--axis", axis, "--theorem", "thm-3-2")
    assert code == 2


def test_sweep_three_axes_rejected():
    code, _ = run("sweep", "--axis", "alpha:1:2:1", "--axis", "beta:1:2:1", "--axis", "gamma:1:2:1",
                  "--theorem", "thm-3-2")
    assert code == 2


def test_sweep_ozaki_json(tmp_path):
    code, text = run("sweep", "--axis", "alpha:1:2:1", "--theorem", "ozaki", "--output", "json",
                     "--witness-file", str(tmp_path / "w"))
    recs = [json.loads(line) for line in text.splitlines()]
    assert len(recs) == 2
    assert recs[0]["results"]["ozaki"]["certificate_satisfied"] is False
    assert recs[1]["results"]["ozaki"]["certificate_satisfied"] is True
    assert set(recs[0]["results"]["ozaki"]) == {"certificate_satisfied", "verified_pass", "agree", "extremal_value"}


def test_sweep_triple_index_and_multi_axis(tmp_path):
    code, text = run("sweep", "--params", "2,1,1", "--axis", "triple-index:1:3:1", "--axis", "gamma@0:1:2:1",
                     "--theorem", "thm-3-2", "--witness-file", str(tmp_path / "w"))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["params"] for r in rows] == ["2,1,1", "2,1,2", "2,1,1;2,1,1", "2,1,2;2,1,1",
                                           "2,1,1;2,1,1;2,1,1", "2,1,2;2,1,1;2,1,1"]


def test_sweep_single_triple_theorem_with_multi_index_is_usage_error():
    code, _ = run("sweep", "--axis", "triple-index:1:2:1", "--theorem", "thm-3-1")
    assert code == 2


def test_sweep_rows_sorted_by_theorem(tmp_path):
    code, text = run("sweep", "--axis", "alpha:2:3:1", "--theorem", "thm-5-3a", "--theorem", "thm-3-2",
                     "--witness-file", str(tmp_path / "w"))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [(r["alpha"], r["theorem_id"]) for r in rows] == [
        ("2", "thm-3-2"), ("2", "thm-5-3a"), ("3", "thm-3-2"), ("3", "thm-5-3a")]


def test_sweep_deterministic_across_jobs(tmp_path):
    base = ["sweep", "--axis", "alpha:1:2:0.5", "--theorem", "all", "--grid-angles", "128"]
    a = run(*base, "--witness-file", str(tmp_path / "a"))
    b = run(*base, "--witness-file", str(tmp_path / "b"), "--jobs", "3")
    assert a == b
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_sweep_disagreement_witness_file(tmp_path):
    w = tmp_path / "w.jsonl"
    code, _ = run("sweep", "--axis", "alpha:1:1:1", "--theorem", "thm-5-1-cvx", "--witness-file", str(w))
    recs = [json.loads(line) for line in w.read_text().splitlines()]
    assert len(recs) == 1
    assert recs[0]["agree"] is False and recs[0]["report"]["witness"]["re"] == pytest.approx(-0.499)


def test_sweep_figure(tmp_path):
    fig = tmp_path / "s.png"
    code, _ = run("sweep", "--axis", "alpha:1:2:1", "--theorem", "thm-3-2", "--theorem", "ozaki",
                  "--witness-file", str(tmp_path / "w"), "--figure", str(fig))
    assert code == 0 and fig.read_bytes()[:4] == b"\x89PNG"


def test_sweep_partial_output_on_error(tmp_path, monkeypatch):
    calls = {"n": 0}
    real = cli._sweep_point

    def flaky(job):
        calls["n"] += 1
        if calls["n"] == 2:
            raise ConvergenceError("synthetic")
        return real(job)

    monkeypatch.setattr(cli, "_sweep_point", flaky)
    code, text = run("sweep", "--axis", "alpha:1:3:1", "--theorem", "thm-3-2", "--witness-file", str(tmp_path / "w"))
    assert code == 3
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 1 and rows[0]["alpha"] == "1"


# -- config files -------------------------------------------------------------------------------


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep config\ntriple=2,1,1\ntriple=1,2,1\ntheorem=thm-4-2-star\ngrid_angles=128\n"
                   f"witness_file={tmp_path / 'w'}\noutput=json\n")
    code, text = run("sweep", "--config", str(cfg))
    recs = [json.loads(line) for line in text.splitlines()]
    assert len(recs) == 1 and recs[0]["params"] == [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0]]
    code, text = run("sweep", "--config", str(cfg), "--params", "3,1,1", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["params"] == "3,1,1"


def test_config_for_check(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("params=3,1,1\ntheorem=thm-3-1\n")
    assert run("check", "--config", str(cfg))[0] == 0


@pytest.mark.parametrize("body", ["nonsense line\n", "colour=blue\n", "grid_angles=many\n"])
def test_config_errors(tmp_path, body):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("triple=1,1,1\ntheorem=thm-3-2\n" + body)
    assert run("sweep", "--config", str(cfg))[0] == 2


def test_missing_config_file(tmp_path):
    assert run("sweep", "--config", str(tmp_path / "nope"), "--theorem", "thm-3-2")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "leroyatlas.cli", "check", "--params", "3,1,1", "--theorem",
                           "thm-3-1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["satisfied"] is True
