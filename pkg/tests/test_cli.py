import csv
import json
import math
import shutil
import subprocess
import sys

import pytest

from contexture.cli import main

CHSH_SITES = "X,Y;(1.5707963268,0.7853981634),(1.5707963268,-0.7853981634)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_model(capsys, tmp_path, name, *args):
    path = tmp_path / name
    code, _, _ = run(capsys, "gen-model", *args, "--out", str(path))
    assert code == 0
    return path


def test_gen_model_counts(capsys, tmp_path):
    path = tmp_path / "ghz.model.json"
    code, out, _ = run(capsys, "gen-model", "--family", "ghz", "--n", "3",
                       "--sites", "X,Y;X,Y;X,Y", "--out", str(path))
    assert code == 0
    assert json.loads(out) == {"contexts": 8, "outcomes_per_context": 8, "out": str(path)}
    assert len(json.loads(path.read_text())["table"]) == 8


def test_gen_model_family_scenario(capsys):
    code, out, _ = run(capsys, "gen-model", "--family", "balanced", "--lambda",
                       "0,0,0.7853981634", "--Phi", "0", "--family-sites", "4")
    assert code == 0
    assert len(json.loads(out)["table"]) == 32


def test_gen_model_from_state_file(capsys, tmp_path):
    spec = tmp_path / "state.json"
    spec.write_text(json.dumps({"family": "bipartite", "params": {"delta": 0.3}}))
    code, out, _ = run(capsys, "gen-model", "--state", str(spec), "--sites", "X;Z")
    assert code == 0
    assert len(json.loads(out)["table"]) == 1


def test_malformed_json_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"sites": [\n  [1, 2,, 3]\n]}')
    code, _, err = run(capsys, "gen-model", "--family", "ghz", "--scenario", str(bad))
    assert code == 2
    assert "line 2" in err and "column" in err


def test_bad_field_is_a_usage_error(capsys, tmp_path):
    bad = tmp_path / "scenario.json"
    bad.write_text(json.dumps({"sites": [[{"theta": 0}]]}))
    code, _, err = run(capsys, "gen-model", "--family", "ghz", "--scenario", str(bad))
    assert code == 2 and "sites[0][0]" in err


def test_usage_errors(capsys):
    assert run(capsys, "gen-model", "--family", "ghz")[0] == 2
    assert run(capsys, "gen-model", "--sites", "X;X")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_check_family_two(capsys, tmp_path):
    path = write_model(capsys, tmp_path, "f2.json", "--family", "ghz", "--family-sites", "2")
    code, out, _ = run(capsys, "check", str(path), "--strong", "--fraction", "--gf2", "2")
    report = json.loads(out)
    assert code == 0
    assert report["strongly_contextual"] is True and report["witness"] is None
    assert abs(report["cf"] - 1.0) < 1e-6
    assert report["gf2"]["c_m0_unsat"] and report["gf2"]["c_m1_unsat"]


def test_check_gf2_four(capsys, tmp_path):
    path = write_model(capsys, tmp_path, "f4.json", "--family", "balanced",
                       "--lambda", "0,0,0.7853981634", "--family-sites", "4")
    code, out, _ = run(capsys, "check", str(path), "--gf2", "4")
    gf2 = json.loads(out)["gf2"]
    assert code == 0 and gf2 == {"c_m0_unsat": True, "c_m1_unsat": True, "matches_reference": True}
    assert run(capsys, "check", str(path), "--gf2", "6")[0] == 2


def test_check_chsh(capsys, tmp_path):
    path = write_model(capsys, tmp_path, "chsh.json", "--family", "bipartite",
                       "--delta", "0.7853981634", "--sites", CHSH_SITES)
    code, out, _ = run(capsys, "check", str(path), "--strong", "--fraction")
    report = json.loads(out)
    assert report["strongly_contextual"] is False
    assert report["witness"] == [[1, 1], [1, 1]]
    assert report["cf"] == pytest.approx(math.sqrt(2) - 1, abs=1e-9)
    assert run(capsys, "check", str(path), "--assert-strong")[0] == 1


def test_floats_have_twelve_significant_digits(capsys, tmp_path):
    path = write_model(capsys, tmp_path, "chsh.json", "--family", "bipartite",
                       "--delta", "0.7853981634", "--sites", CHSH_SITES)
    _, out, _ = run(capsys, "check", str(path), "--fraction")
    assert '"cf": 0.414213562373,' in out


@pytest.mark.parametrize("N,entropy", [(2, 1.0), (8, 0.233326628651)])
def test_family(capsys, N, entropy):
    code, out, _ = run(capsys, "family", "--N", str(N))
    report = json.loads(out)
    assert code == 0
    assert report["strongly_contextual"] and report["search_gf2_agree"]
    assert report["entropy_bits"] == pytest.approx(entropy, abs=1e-12)


def test_family_full_reports_cf(capsys):
    _, out, _ = run(capsys, "family", "--N", "4", "--full")
    assert json.loads(out)["cf"] == pytest.approx(1.0, abs=1e-6)


def test_family_odd(capsys):
    code, _, err = run(capsys, "family", "--N", "3")
    assert code == 2 and "N must be even" in err


@pytest.mark.parametrize(
    "args,count",
    [
        (["--theorem", "bipartite", "--delta", "0.3", "--grid", "12"], 0),
        (["--theorem", "prop-lambda", "--lambda", "0.6,0.6,0.6", "--grid", "16"], 0),
        (["--theorem", "w", "--grid", "6"], 0),
        (["--theorem", "balanced", "--delta", "0.5", "--grid", "6"], 0),
    ],
)
def test_verify_theorem_negative_results(capsys, args, count):
    code, out, _ = run(capsys, "verify-theorem", *args)
    report = json.loads(out)
    assert code == 0 and report["violation_count"] == count and report["claim_holds"]


def test_verify_theorem_ghz(capsys):
    code, out, _ = run(capsys, "verify-theorem", "--theorem", "ghz-n", "--n", "3", "--grid", "8")
    report = json.loads(out)
    assert code == 0
    assert report["violation_count"] > 0 and report["violations_only_all_equatorial"]
    for v in report["violations"]:
        assert all(abs(theta - math.pi / 2) < 1e-9 for theta, _ in v["context"])


def test_verify_theorem_usage(capsys):
    assert run(capsys, "verify-theorem", "--theorem", "prop-lambda", "--lambda", "0.1,0.1,0.1")[0] == 2
    assert run(capsys, "verify-theorem", "--theorem", "w", "--grid", "5")[0] == 2
    assert run(capsys, "verify-theorem", "--theorem", "ghz-n", "--n", "6", "--grid", "8")[0] == 2


def test_entropy_curve(capsys, tmp_path):
    out = tmp_path / "curve.csv"
    assert run(capsys, "entropy-curve", "--samples", "100", "--out", str(out))[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["lambda", "entropy_bits"]
    assert len(rows) == 101
    assert rows[1] == ["0", "1"]
    assert float(rows[-1][0]) == pytest.approx(math.pi / 2) and float(rows[-1][1]) < 1e-12
    vals = [float(r[1]) for r in rows[1:]]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert run(capsys, "entropy-curve", "--samples", "1")[0] == 2


def test_deterministic_output(capsys):
    first = run(capsys, "verify-theorem", "--theorem", "ghz-n", "--grid", "4")[1]
    second = run(capsys, "verify-theorem", "--theorem", "ghz-n", "--grid", "4", "--seed", "0")[1]
    assert first == second


@pytest.mark.skipif(shutil.which("contexture") is None, reason="console script not installed")
def test_console_script_exit_code():
    proc = subprocess.run(["contexture", "family", "--N", "3"], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "contexture.cli", "family", "--N", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["strongly_contextual"]
