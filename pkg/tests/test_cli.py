import json
import math
import subprocess
import sys

import pytest

from quasimean.cli import RunConfig, main, run_audit, run_chisini, run_means
from quasimean.dataset import parse_dataset
from quasimean.errors import DomainError, UnknownAggregator


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def csv_file(tmp_path):
    def make(text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return make


def test_run_means_examples():
    doc = run_means(parse_dataset("1\n2\n3\n"), RunConfig(means=("arithmetic", "quadratic")))
    (a, q) = doc["results"]
    assert a == {"name": "arithmetic", "value": 2.0, "internal": True}
    assert q["value"] == pytest.approx(math.sqrt(14 / 3), rel=1e-15)
    doc = run_means(parse_dataset("2\n8\n"), RunConfig(means=("geometric",)))
    assert doc["results"] == [{"name": "geometric", "value": 4.0, "internal": True}]
    doc = run_means(parse_dataset("4\n4\n"), RunConfig(means=("harmonic",)))
    assert doc["results"][0]["value"] == 4.0


def test_run_means_weighted_and_renormalized():
    d = parse_dataset("1,1\n3,3\n")
    with pytest.raises(ValueError):
        run_means(d, RunConfig(means=("arithmetic",)))
    doc = run_means(d, RunConfig(means=("arithmetic",), renormalize_weights=True))
    assert doc["results"][0]["value"] == 2.5


def test_run_means_domain_error_names_mean():
    with pytest.raises(DomainError, match="harmonic"):
        run_means(parse_dataset("1\n0\n"), RunConfig(means=("harmonic",)))


@pytest.mark.parametrize("agg, text, root", [("sum", "1\n2\n3\n", 2.0), ("product", "2\n8\n", 4.0), ("sum-inverses", "1\n3\n", 1.5)])
def test_run_chisini_examples(agg, text, root):
    doc = run_chisini(parse_dataset(text), RunConfig(aggregate=agg))
    r = doc["results"][0]
    assert r["status"] == "unique" and r["internal"] == [True]
    assert r["roots"] == pytest.approx([root], rel=1e-15)


def test_run_audit():
    doc = run_audit("arithmetic", RunConfig(trials=100))
    assert all(r["verdict"] == "pass" for r in doc["results"])
    doc = run_audit("median", RunConfig(trials=100))
    assert [r["axiom"] for r in doc["results"] if r["verdict"] == "fail"] == ["associativity"]
    assert doc["counterexample"]["sample"] == [1, 2, 3, 4, 100]
    assert doc["counterexample"]["k"] == 3
    with pytest.raises(UnknownAggregator):
        run_audit("mode", RunConfig())


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(tolerances={"symmetry": -1})
    with pytest.raises(ValueError):
        RunConfig(tolerances={"nonsense": 1})


def test_mean_subcommand(csv_file, capsys):
    code, out, _ = run(["mean", "--means", "arithmetic,quadratic", csv_file("1\n2\n3\n")], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["value"] == 2.0
    assert doc["config"]["means"] == ["arithmetic", "quadratic"]
    assert doc["dataset"].endswith("data.csv")


def test_mean_requires_weights_flag(csv_file, capsys):
    code, _, err = run(["mean", "--weights", csv_file("1\n2\n")], capsys)
    assert code == 2 and "weight" in err
    code, out, _ = run(["mean", "--weights", csv_file("1,0.25\n5,0.75\n")], capsys)
    assert code == 0 and json.loads(out)["results"][0]["value"] == 4.0


def test_mean_jsonl_by_extension(csv_file, capsys):
    path = csv_file('{"value": 2}\n{"value": 8}\n', name="d.jsonl")
    code, out, _ = run(["mean", "--means", "geometric", "--label", "pair", path], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["dataset"] == "pair" and doc["results"][0]["value"] == 4.0


def test_exit_code_domain_and_parse_errors(csv_file, capsys):
    code, out, err = run(["mean", "--means", "geometric", csv_file("-1\n2\n")], capsys)
    assert code == 2 and out == "" and "geometric" in err and "-1.0" in err
    code, _, err = run(["mean", csv_file("1\nx\n")], capsys)
    assert code == 2 and "line 2" in err
    code, _, _ = run(["mean", "--means", "mode", csv_file("1\n")], capsys)
    assert code == 2
    code, _, _ = run(["mean", "/nonexistent/file.csv"], capsys)
    assert code == 2


def test_chisini_subcommand(csv_file, capsys):
    code, out, _ = run(["chisini", "--aggregate", "product", csv_file("2\n8\n")], capsys)
    assert code == 0
    r = json.loads(out)["results"][0]
    assert r["roots"] == [4.0] and r["status"] == "unique" and r["residuals"][0] <= 1e-9


def test_chisini_overflowing_target_is_null(csv_file, capsys):
    code, out, _ = run(["chisini", "--aggregate", "sum-exp", csv_file("1000\n1000\n")], capsys)
    assert code == 0
    r = json.loads(out)["results"][0]
    assert r["target"] is None and r["roots"] == [1000.0]


def test_chisini_domain_error(csv_file, capsys):
    code, _, _ = run(["chisini", "--aggregate", "sum-inverses", csv_file("0\n1\n")], capsys)
    assert code == 2


def test_audit_strict_exit_codes(capsys):
    code, out, _ = run(["audit", "--target", "median", "--trials", "50", "--strict"], capsys)
    assert code == 4
    assert json.loads(out)["counterexample"]["other"] == [2, 2, 2, 4, 100]
    code, _, _ = run(["audit", "--target", "arithmetic", "--trials", "50", "--strict"], capsys)
    assert code == 0
    code, _, _ = run(["audit", "--target", "median", "--trials", "50"], capsys)
    assert code == 0
    code, _, _ = run(["audit", "--target", "nope"], capsys)
    assert code == 2


def test_audit_tolerance_override(capsys):
    code, out, _ = run(["audit", "--target", "median", "--trials", "50", "--tol", "associativity=1e9", "--strict"], capsys)
    assert code == 0
    assert json.loads(out)["config"]["tolerances"] == {"associativity": 1e9}
    with pytest.raises(SystemExit):
        main(["audit", "--target", "median", "--tol", "oops"])


def test_seed_env_var(monkeypatch, capsys):
    monkeypatch.setenv("QUASIMEAN_SEED", "11")
    _, out, _ = run(["audit", "--target", "geometric", "--trials", "20"], capsys)
    assert json.loads(out)["config"]["seed"] == 11
    _, out, _ = run(["audit", "--target", "geometric", "--trials", "20", "--seed", "3"], capsys)
    assert json.loads(out)["config"]["seed"] == 3


def test_table_format(csv_file, capsys):
    code, out, _ = run(["--format", "table", "mean", "--means", "arithmetic,median", csv_file("1\n2\n6\n")], capsys)
    assert code == 0 and "arithmetic" in out and "median" in out
    code, out, _ = run(["--format", "table", "audit", "--target", "median", "--trials", "20"], capsys)
    assert "associativity" in out and "counterexample" in out


def test_stdin_and_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quasimean", "mean", "--means", "harmonic", "-"],
        input=b"1\n3\n",
        capture_output=True,
        check=True,
    )
    assert json.loads(proc.stdout)["results"][0]["value"] == 1.5
