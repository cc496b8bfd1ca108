import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from bipolar_agg import scenarios
from bipolar_agg.cli import cli_main
from bipolar_agg.formats import parse_profile

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_aggregate_majority():
    code, out, err = run("aggregate", DATA / "fig2.profile", "--rule", "majority")
    assert code == 0 and err == ""
    assert out == "support A B\nsupport B C\nsupport C D\n"


@pytest.mark.parametrize("rule, want", [
    ("unanimity", ""),
    ("nomination", "support A B\nsupport B C\nsupport C D\n"),
    ("dictator:2", "support B C\nsupport C D\n"),
    ("quota:2", "support A B\nsupport B C\nsupport C D\n"),
])
def test_aggregate_rules(rule, want):
    assert run("aggregate", DATA / "fig2.profile", "--rule", rule)[:2] == (0, want)


def test_semantics_fig3_chain():
    code, out, _ = run("semantics", DATA / "fig3_all.baf", "--kind", "d-preferred")
    assert code == 0
    assert out == "extension E\nextension A D\n"
    assert "extension A E\n" not in out


def test_semantics_empty_extension_printed(tmp_path):
    f = tmp_path / "loop.baf"
    f.write_text("args A\nattack A A\n")
    assert run("semantics", f, "--kind", "d-preferred")[1] == "extension\n"
    assert run("semantics", f, "--kind", "stable")[1] == ""


def test_preserve_violation_and_success():
    code, out, _ = run("preserve", DATA / "fig2.domain", "--rule", "majority", "--property", "conflict-free:A,E")
    assert code == 1
    lines = out.splitlines()
    assert lines[:2] == ["rule quota:2", "property conflict-free:A,E"]
    assert "verdict violated" in lines and "counterexample" in lines and "outcome" in lines
    body = out.split("counterexample\n", 1)[1].split("outcome\n")[0]
    assert parse_profile(body).n == 3
    code, out, _ = run("preserve", DATA / "fig2.domain", "--rule", "unanimity", "--property", "conflict-free:A,E")
    assert code == 0 and out.endswith("verdict preserved\n")


def test_preserve_n_override():
    code, out, _ = run("preserve", DATA / "small.domain", "--rule", "quota:1", "--n", "1",
                       "--property", "essential-constraint")
    assert code == 0 and "n=1" in out


def test_preserve_missing_n(tmp_path):
    f = tmp_path / "d.domain"
    f.write_text("args A B\nuniverse A B\n")
    code, _, err = run("preserve", f, "--rule", "majority", "--property", "safe:A")
    assert code == 2 and err.startswith("error: usage:")


def test_meta_verify():
    code, out, _ = run("meta", DATA / "fig3_top.domain", "--property", "d-preferred:A,E",
                       "--kind", "non-simple", "--verify", DATA / "fig3_top.witness")
    assert code == 0 and out.count("subset ") == 8 and out.endswith("witness valid\n")
    code, out, _ = run("meta", DATA / "fig3_top.domain", "--property", "s-preferred:A,E",
                       "--kind", "non-simple", "--verify", DATA / "fig3_top.witness")
    assert code == 1 and out.endswith("witness invalid\n")
    code, out, _ = run("meta", DATA / "fig4_bottom.domain", "--property", "d-preferred:B",
                       "--kind", "disjunctive", "--verify", DATA / "fig4_bottom.witness")
    assert code == 0 and out.count("subset ") == 4


def test_meta_verify_wrong_arity():
    code, _, err = run("meta", DATA / "fig4_bottom.domain", "--property", "d-preferred:B",
                       "--kind", "non-simple", "--verify", DATA / "fig4_bottom.witness")
    assert code == 2 and "needs 3 extras" in err


def test_meta_search():
    code, out, _ = run("meta", DATA / "fig3_top.domain", "--property", "d-preferred:A,E",
                       "--kind", "non-simple", "--search", "--max-base", "0")
    assert code == 0 and out.startswith("witness found\n") and out.count("extra ") == 3
    code, out, _ = run("meta", DATA / "small.domain", "--property", "essential-constraint",
                       "--kind", "disjunctive", "--search", "--max-base", "1")
    assert code == 1 and out == "witness none\n"


def test_coalitions():
    code, out, _ = run("coalitions", "--rule", "dictator:1", "--n", "3", "--universe", DATA / "fig2.domain")
    assert code == 0
    assert out.splitlines() == [
        "winning {1}", "winning {1,2}", "winning {1,3}", "winning {1,2,3}",
        "consistent true", "ultrafilter true", "dictator 1",
    ]
    code, out, _ = run("coalitions", "--rule", "majority", "--n", "3", "--universe", DATA / "fig2.domain")
    assert "ultrafilter false (" in out and out.endswith("dictator none\n")


@pytest.mark.parametrize("argv, prefix", [
    (["aggregate", "nope.profile", "--rule", "majority"], "error: usage: cannot read"),
    (["aggregate", DATA / "fig2.profile", "--rule", "borda"], "error: usage:"),
    (["aggregate", DATA / "fig2.profile", "--rule", "dictator:4"], "error: usage:"),
    (["semantics", DATA / "fig2.profile", "--kind", "stable"], "error: parse:"),
    (["preserve", DATA / "fig2.domain", "--rule", "majority", "--property", "safe:Q"], "error: usage:"),
    (["--jobs", "0", "aggregate", DATA / "fig2.profile", "--rule", "majority"], "error: usage:"),
])
def test_usage_errors(argv, prefix):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert err.startswith(prefix) and err.count("\n") == 1


def test_parse_error_names_file_and_position(tmp_path):
    f = tmp_path / "bad.baf"
    f.write_text("args A B\nsupport A C\n")
    code, _, err = run("semantics", f, "--kind", "stable")
    assert code == 2 and "bad.baf: line 2, col 11: unknown argument 'C'" in err


@pytest.mark.parametrize("argv", [["aggregate"], ["frobnicate"], ["semantics", "x.baf", "--kind", "grounded"], []])
def test_argparse_errors_are_one_line(argv):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert err.startswith("error: usage:") and err.count("\n") == 1


def test_resource_cap(monkeypatch):
    monkeypatch.setenv("BIPOLAR_AGG_MAX_PROFILES", "8")
    code, out, err = run("preserve", DATA / "fig2.domain", "--rule", "majority", "--property", "conflict-free:A,E")
    assert code == 3 and out == "" and err.startswith("error: resource:")
    monkeypatch.setenv("BIPOLAR_AGG_MAX_ARGS", "3")
    assert run("semantics", DATA / "fig3_all.baf", "--kind", "stable")[0] == 3


def _subprocess(*argv, env=None):
    return subprocess.run(
        [sys.executable, "-m", "bipolar_agg", *map(str, argv)],
        capture_output=True, env={**os.environ, **(env or {})},
    )


def test_jobs_do_not_change_bytes():
    argv = ["preserve", DATA / "small.domain", "--rule", "nomination", "--property", "safe:A,C"]
    one = _subprocess("--jobs", "1", *argv)
    four = _subprocess("--jobs", "4", *argv)
    assert one.returncode == four.returncode
    assert one.stdout == four.stdout and one.stdout


def test_runs_are_byte_identical():
    argv = ["semantics", DATA / "fig3_all.baf", "--kind", "c-preferred"]
    assert _subprocess(*argv).stdout == _subprocess(*argv).stdout


def test_paper_verify_json(tmp_path, monkeypatch):
    monkeypatch.setattr(scenarios, "CLAIMS", tuple(c for c in scenarios.CLAIMS if c[0] in {"fixtures", "C01", "C10"}))
    target = tmp_path / "report.json"
    code, out, _ = run("paper", "verify", "--json", target, "--quiet")
    assert code == 0 and out.splitlines()[-1] == "summary 3/3 passed"
    assert json.loads(target.read_text())["passed"] is True


def test_paper_verify_mutation_exits_1(monkeypatch):
    monkeypatch.setattr(scenarios, "CLAIMS", tuple(c for c in scenarios.CLAIMS if c[0] in {"fixtures", "C01"}))
    original = scenarios._BUILDERS["fig1_secondary"]

    def corrupt():
        s = original()
        b = s.payload
        return scenarios.NamedScenario(s.id, b.with_supports(b.supports - {("D2", "E2")}), s.expected, s.caption)

    monkeypatch.setitem(scenarios._BUILDERS, "fig1_secondary", corrupt)
    code, out, _ = run("paper", "verify", "--quiet")
    assert code == 1
    assert "fixtures FAIL" in out and "C01 FAIL" in out
