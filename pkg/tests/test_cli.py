import io
import subprocess
import sys

import pytest

from lmcalc.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_reduce_pair_projection():
    code, out = run("reduce", "--rules", "full", "(<x,y> p1)")
    assert code == 0
    assert out.splitlines()[-2].endswith("-> x")


def test_good_rejects_mendler():
    code, out = run("good", "--eqs", "X = A /\\ (X -> B)")
    assert code == 1
    assert out.startswith("not good") and "X(negative)" in out


def test_good_accepts():
    assert run("good", "--eqs", "X = A /\\ (B -> X)") == (0, "good\n")


def test_verify_sim_circle():
    code, out = run("verify", "sim-circle", "--sort", "full", "--max-size", "6")
    assert code == 0
    assert out.startswith("sim-circle: tried=") and "failed=0" in out


def test_verify_failure_exit_code():
    code, out = run("verify", "diag", "--sort", "lambdamu", "--max-size", "7", "--show", "1")
    assert code == 1 and "clause=2" in out


def test_check_and_infer():
    assert run("check", "x", "A", "--ctx", "x : A")[0] == 0
    code, out = run("check", "(x x)", "A", "--ctx", "x : A")
    assert code == 1 and out.startswith("ill-typed")
    code, out = run("infer", r"\x:(A -> B) -> A. mu a:~A. [a] (x \y:A. mu d:~B. [a] y)")
    assert (code, out) == (0, "((A -> B) -> A) -> A\n")


def test_check_with_equations():
    code, _ = run("check", r"(\x:X. ((x p2) x) <y, \x:X. ((x p2) x)>)", "B",
                  "--ctx", "y : A", "--eqs", "X = A /\\ (X -> B)")
    assert code == 0


def test_sn_and_eta():
    assert run("eta", "--rules", "beta", r"(\x. (x x) \y. y)") == (0, "2\n")
    code, out = run("sn", r"(\x. ((x p2) x) <y, \x. ((x p2) x)>)", "--fuel", "20")
    assert code == 1 and out.startswith("loop")
    code, out = run("sn", r"(\x. (x x x) \x. (x x x))", "--fuel", "3")
    assert code == 3 and out.startswith("unknown")


def test_graph_lines():
    code, out = run("graph", "--rules", "beta", "--format", "lines", r"(\x. (x x) \y. y)")
    lines = out.splitlines()
    assert code == 0
    assert sum(1 for l in lines if l.startswith("node\t")) == 3
    assert lines[-1] == "nodes=3\tcomplete=yes\tcycle=no"


def test_translate():
    code, out = run("translate", "--map", "diamond", "mu a:~X. [a] x", "--mode", "church")
    assert (code, out) == (0, "(c[X] \\x_a:~X. (x_a x))\n")
    code, out = run("translate", "--map", "circle", "(x p1)", "--ctx", "x : A /\\ B",
                    "--type", "A")
    assert code == 0 and "context:" in out and "mu phi : ~bot" in out


def test_congruent():
    args = ("congruent", "X", "A /\\ ((A /\\ (X -> B)) -> B)", "--eqs", "X = A /\\ (X -> B)")
    assert run(*args) == (0, "congruent\n")
    assert run("congruent", "A", "B")[0] == 1


def test_files_are_read(tmp_path):
    eqs = tmp_path / "eqs.txt"
    eqs.write_text("# mendler\nX = A \\/ (X -> B)\n")
    code, _ = run("good", "--eqs", str(eqs))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ("reduce", "(x"),
    ("good", "--eqs", "X = X"),
    ("check", "x", "A ->"),
    ("bogus",),
    ("reduce", "--rules", "nope", "x"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_corpus_listing():
    code, out = run("corpus", "--sort", "lambda", "--max-size", "3")
    assert code == 0 and out.splitlines()[-1] == "3 terms"


def test_seed_determinism():
    a = run("corpus", "--sort", "full", "--random", "15", "--seed", "4", "--format", "lines")
    b = run("corpus", "--sort", "full", "--random", "15", "--seed", "4", "--format", "lines")
    c = run("corpus", "--sort", "full", "--random", "15", "--seed", "5", "--format", "lines")
    assert a == b and a != c
    v1 = run("verify", "postpone", "--sort", "lambdamu", "--max-size", "3", "--count", "20",
             "--seed", "9")
    v2 = run("verify", "postpone", "--sort", "lambdamu", "--max-size", "3", "--count", "20",
             "--seed", "9")
    assert v1 == v2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lmcalc.cli", "good", "--eqs", "X = A"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "good\n"
