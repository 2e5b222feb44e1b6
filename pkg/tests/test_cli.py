import io
import re
import subprocess
import sys

import pytest

from frpkit.cli import run_command
from frpkit.fileio import save_algebra
from frpkit.zoo import point_algebra


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def point_file(tmp_path):
    p = tmp_path / "point.alg"
    save_algebra(point_algebra(), p)
    return str(p)


@pytest.fixture
def theta_file(tmp_path, point_file):
    p = tmp_path / "p.rep"
    code, _, _ = run("build-rep", point_file, "--out", str(p))
    assert code == 0
    return str(p)


def test_check_axioms_pass(point_file):
    code, out, _ = run("check-axioms", point_file)
    assert code == 0
    assert out.splitlines()[0] == "group 1 (boolean algebra): pass"
    assert len(out.splitlines()) == 5


def test_check_axioms_fail(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text(
        "atoms e l g\nidentity e\nconverse l g\n"
        "comp e e : e\ncomp e l : l\ncomp e g : g\ncomp l e : l\ncomp g e : g\n"
        "comp l l : l\ncomp g g : l\ncomp l g : e l g\ncomp g l : e l g\n"
    )
    code, out, _ = run("check-axioms", str(bad))
    assert code == 1
    assert "FAIL" in out
    code, out, _ = run("--porcelain", "check-axioms", str(bad))
    assert "status=fail" in out and "witness=" in out


def test_build_then_verify(point_file, theta_file):
    code, out, _ = run("verify-rep", point_file, theta_file, "--sig", "0,1,+,1',~,;")
    assert code == 0
    assert out.strip() == "pass {0,1,1',+,~,;}"


def test_verify_reports_violations(point_file, theta_file):
    code, out, _ = run("verify-rep", point_file, theta_file, "--sig", "-,;")
    assert code == 1
    lines = out.splitlines()
    assert len(lines) == 6
    assert lines[0] == "violation operation -: (l,l) in img(-e = l+g) but not in complement of img(e)"
    code, out, _ = run("verify-rep", point_file, theta_file, "--sig", "-", "--max-violations", "1")
    assert len(out.splitlines()) == 1


def test_search_unsat(point_file):
    code, out, _ = run("search-rep", point_file, "--sig", "-,;", "--base", "2")
    assert code == 1
    assert "base 2: UNSAT nodes=26" in out
    assert out.splitlines()[-1].startswith("# elapsed")


def test_search_sat_with_out(point_file, tmp_path):
    target = tmp_path / "found.rep"
    code, out, _ = run(
        "search-rep", point_file, "--sig", "0 1 + 1' ~ ;", "--base", "1",
        "--max-base", "3", "--out", str(target),
    )
    assert code == 0
    assert [line for line in out.splitlines() if line.startswith("base")] == [
        "base 1: UNSAT nodes=0",
        "base 2: UNSAT nodes=26",
        "base 3: SAT nodes=888",
    ]
    code, _, _ = run("verify-rep", point_file, str(target), "--sig", "0,1,+,1',~,;")
    assert code == 0


def test_search_budget(point_file):
    code, out, _ = run("search-rep", point_file, "--sig", "-,;", "--base", "3", "--node-budget", "10")
    assert code == 3
    assert "BUDGET_EXCEEDED" in out


def test_search_guardrail(point_file):
    code, _, err = run("search-rep", point_file, "--sig", ";", "--base", "9")
    assert code == 2 and "allow_large" in err


def test_refute_facts_reverify_through_eval(point_file, theta_file):
    code, out, _ = run("refute", point_file, theta_file)
    assert code == 1
    lines = out.splitlines()
    assert lines[-1].startswith(f"{len(lines)}. violation")
    for line in lines[:-1]:
        m = re.match(r"\d+\. \((\w+),(\w+)\) in img\((.+)\)$", line)
        assert m, line
        x, y, elem = m.groups()
        code, ev, _ = run("eval", point_file, "--term", "s", "--env", f"s={elem}", "--rep", theta_file)
        assert code == 0
        image = next(l for l in ev.splitlines() if l.startswith("image = "))
        assert f"({x},{y})" in image.split(" = ", 1)[1].split()


def test_eval_default_names(point_file, theta_file):
    code, out, _ = run("eval", point_file, "--term", "-(le;ge)~")
    assert code == 0
    assert out.splitlines() == ["term = -(le ; ge)~", "value = 0"]
    code, out, _ = run("eval", point_file, "--term", "lt;gt", "--rep", theta_file)
    assert "preserved = yes" in out
    code, out, _ = run("eval", point_file, "--term", "-eq", "--rep", theta_file)
    assert "preserved = no" in out


def test_zoo_algebras(tmp_path):
    code, out, _ = run("check-axioms", "zoo:z3")
    assert code == 0
    code, _, err = run("check-axioms", "zoo:nope")
    assert code == 2 and "no built-in algebra" in err


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["check-axioms", "/nonexistent.alg"], "no such file"),
        (["eval", "zoo:point", "--term", "le;;"], "position 3"),
        (["eval", "zoo:point", "--term", "zz"], "zz"),
        (["verify-rep", "zoo:point", "/nonexistent.rep", "--sig", ";"], "no such file"),
        (["search-rep", "zoo:point", "--sig", "D", "--base", "1"], "unknown signature symbol"),
        (["eval", "zoo:point", "--term", "le", "--env", "x"], "name=element"),
    ],
)
def test_input_errors_exit_2(argv, fragment):
    code, _, err = run(*argv)
    assert code == 2
    assert fragment in err


def test_usage_error_exit_2():
    assert run("no-such-command")[0] == 2
    assert run()[0] == 2


def test_parse_error_reports_line(tmp_path):
    p = tmp_path / "x.alg"
    p.write_text("atoms a\nidentity b\n")
    code, _, err = run("check-axioms", str(p))
    assert code == 2
    assert f"{p}:2:" in err


def test_porcelain_refute(point_file, theta_file):
    code, out, _ = run("--porcelain", "refute", point_file, theta_file)
    last = out.splitlines()[-1]
    assert "fact=violation" in last and "symbol=-" in last and "pair=(l,l)" in last


def test_module_entry_point(point_file):
    proc = subprocess.run(
        [sys.executable, "-m", "frpkit", "check-axioms", point_file],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.count("pass") == 5
