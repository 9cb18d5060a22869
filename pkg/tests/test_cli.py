import json
import os
import subprocess
import sys

import pytest

from braidtrace.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_jones_json(capsys):
    code, out, _ = run(["eval-jones", "--braid", "1 1 1", "--strands", "2", "--k", "5", "--beta", "6",
                        "--samples", "2000", "--seed", "42", "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["seed"] == 42 and data["samples"] == 2000 and data["mode"] == "monte_carlo"


def test_exact_unknot(capsys):
    code, out, _ = run(["exact-jones", "--braid", "", "--strands", "1", "--k", "7"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == {"re": 1.0, "im": 0.0}


def test_exact_homfly_table(capsys):
    code, out, _ = run(["exact-homfly", "--braid", "1 1 1", "--strands", "2", "--k", "6", "--r", "3",
                        "--format", "table"], capsys)
    assert code == 0 and out.startswith("value")


def test_braid_file(tmp_path, capsys):
    path = tmp_path / "fig8.txt"
    path.write_text("strands=3\n1 -2 1 -2\n")
    code, out, _ = run(["exact-jones", "--braid-file", str(path), "--k", "5"], capsys)
    assert code == 0
    assert abs(json.loads(out)["value"]["re"] + 1.2360679775) < 1e-9


@pytest.mark.parametrize("args", [
    ["eval-jones", "--braid", "1", "--strands", "2", "--k", "2"],
    ["eval-jones", "--braid", "1", "--strands", "2", "--k", "5", "--samples", "0"],
    ["eval-jones", "--braid", "1", "--strands", "2", "--k", "5", "--beta", "0"],
    ["eval-jones", "--braid", "1", "--strands", "2", "--k", "5", "--seed", "-1"],
    ["eval-jones", "--braid", "1", "--strands", "2", "--k", "5", "--threads", "0"],
    ["eval-jones", "--braid", "3", "--strands", "2", "--k", "5"],
    ["eval-jones", "--braid", "1", "--k", "5"],
    ["eval-homfly", "--braid", "1", "--strands", "2", "--k", "6", "--r", "5"],
    ["eval-jones", "--braid", "1 2 3 4 5", "--strands", "6", "--k", "5", "--mode", "exact", "--beta", "5"],
    ["eval-jones", "--k", "five"],
    ["tables", "--what", "cutoffs", "--strands", "4", "--k", "5"],
])
def test_validation_exit_code(args, capsys):
    code, out, err = run(args, capsys)
    assert code == 2
    assert out == ""


def test_precision_warning_on_stderr(capsys):
    code, _, err = run(["eval-jones", "--braid", "1", "--strands", "2", "--k", "5", "--beta", "2",
                        "--samples", "10"], capsys)
    assert code == 0 and "warning" in err


def test_tables(capsys):
    code, out, _ = run(["tables", "--what", "cutoffs", "--strands", "4", "--k", "5", "--h", "3", "--beta", "4"],
                       capsys)
    data = json.loads(out)
    assert code == 0 and list(data) == ["n", "k", "h", "beta", "cutoffs"]
    assert set(data["cutoffs"][0]) == {"a", "t", "c"}
    code, out, _ = run(["tables", "--what", "weights", "--strands", "4", "--k", "6", "--r", "3"], capsys)
    assert abs(sum(s["probability"] for s in json.loads(out)["sectors"]) - 1) < 1e-12
    code, out, _ = run(["tables", "--what", "matchings", "--lam", "2,1,1", "--k", "6", "--r", "3",
                        "--beta", "3"], capsys)
    assert code == 0 and json.loads(out)["matchings"]


@pytest.mark.parametrize("suite", ["relations", "markov", "oracle", "r2"])
def test_verify_suites(suite, capsys):
    code, out, _ = run(["verify", "--suite", suite, "--max-strands", "3", "--k", "5", "--sequences", "20"],
                       capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_verify_failure_exit_code(monkeypatch, capsys):
    from braidtrace import oracle

    def broken(*args, **kwargs):
        rep = oracle.Report("relations")
        rep.record(1.0, 1e-9, "forced")
        return rep

    monkeypatch.setattr(oracle, "relations_check", broken)
    code, out, _ = run(["verify", "--suite", "relations"], capsys)
    assert code == 1 and not json.loads(out)["ok"]


def _cli(args, threads):
    env = dict(os.environ, BRAIDTRACE_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "braidtrace", *args], capture_output=True, env=env, check=True).stdout


def test_module_entry_point_deterministic():
    args = ["eval-homfly", "--braid", "1 -2 1 -2", "--strands", "3", "--k", "6", "--r", "3",
            "--samples", "9000", "--seed", "7", "--mode", "shots"]
    assert _cli(args, 1) == _cli(args, 3)
