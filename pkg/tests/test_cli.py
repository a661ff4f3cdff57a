import io
import json
import subprocess
import sys

import pytest

from cmsotw import structures as S
from cmsotw.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def graphs(tmp_path):
    paths = {}
    for name, (family, params) in {
        "grid3": ("grid", (3,)),
        "k4": ("clique", (4,)),
        "c4": ("cycle", (4,)),
        "p12": ("path", (12,)),
        "p20": ("path", (20,)),
    }.items():
        path = tmp_path / f"{name}.json"
        path.write_text(S.dumps(S.generate(family, *params)))
        paths[name] = str(path)
    colored = S.generate("path", 4).with_colors({"C1": {"0", "3"}})
    paths["colored"] = str(tmp_path / "colored.json")
    (tmp_path / "colored.json").write_text(S.dumps(colored))
    code, text, _ = run("gen", "annulus-fixture", "12", "6")
    assert code == 0
    paths["annulus"] = str(tmp_path / "annulus.json")
    (tmp_path / "annulus.json").write_text(text)
    return paths


def test_spec_examples(graphs):
    assert run("anntw", "--graph", graphs["grid3"], "--set", "perimeter")[:2] == (0, "2\n")
    code, text, _ = run("tw", "--graph", graphs["k4"])
    assert code == 0 and text.splitlines()[0] == "3"
    assert run("check", "--graph", graphs["c4"], "--formula", "(exists x (exists y (edge x y)))")[:2] == (0, "true\n")


def test_check_strict_and_errors(graphs):
    phi = "(forall x (forall y (edge x y)))"
    assert run("check", "--graph", graphs["c4"], "--formula", phi)[:2] == (0, "false\n")
    assert run("check", "--graph", graphs["c4"], "--formula", phi, "--strict")[0] == 1
    code, out, err = run("check", "--graph", graphs["c4"], "--formula", "(exists x")
    assert code == 2 and out == "" and "unclosed" in err
    assert run("check", "--graph", "/nonexistent.json", "--formula", "true")[0] == 2
    assert run("frobnicate")[0] == 2
    code, _, err = run("check", "--graph", graphs["p20"], "--formula", "(existsSetU X (card 2 X))")
    assert code == 3 and "cap" in err


def test_eval(graphs):
    code, text, _ = run("eval", "--graph", graphs["c4"], "--formula", "(and (edge x y) (in x X))",
                        "--free", "x,y,X:V", "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and doc["witness"]["x"] in doc["witness"]["X"]
    code, text, _ = run("eval", "--graph", graphs["c4"], "--formula", "(edge x x)", "--free", "x", "--strict")
    assert (code, text) == (1, "none\n")


def test_anntw_sets(graphs):
    assert run("anntw", "--graph", graphs["grid3"], "--set", "")[1] == "0\n"
    assert run("anntw", "--graph", graphs["colored"], "--set", "C1")[1] == "1\n"
    assert run("anntw", "--graph", graphs["k4"], "--set", "0,1,2,3")[1] == "3\n"
    assert run("anntw", "--graph", graphs["k4"], "--set", "perimeter")[0] == 2
    assert run("anntw", "--graph", graphs["k4"], "--set", "9")[0] == 2
    assert run("anntw", "--graph", graphs["p20"], "--set", "0")[0] == 3
    assert run("anntw", "--graph", graphs["p20"], "--set", "0,19", "--max-n", "24")[:2] == (0, "1\n")


def test_tw_machine_decomposition_is_valid(graphs):
    code, text, _ = run("tw", "--graph", graphs["grid3"], "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and doc["tw"] == 3
    g = S.generate("grid", 3)
    from cmsotw.width import TreeDecomposition

    td = TreeDecomposition(tuple(frozenset(b) for b in doc["bags"]), tuple(tuple(e) for e in doc["tree_edges"]))
    assert td.is_valid(g) and td.width == 3


def test_type(graphs):
    assert run("type", "--graph", graphs["k4"], "--m", "0", "--r", "1")[1] == "{<1>}\n"
    code, text, _ = run("type", "--graph", graphs["c4"], "--m", "0", "--r", "2", "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and doc["level"] == 2 and doc["type"].startswith("{{")
    assert run("type", "--graph", graphs["c4"], "--m", "0", "--r", "1", "--ranges", "")[1] == "{<1>}\n"
    assert run("type", "--graph", graphs["c4"], "--m", "0", "--r", "2", "--ranges", "0")[0] == 2
    code, text, _ = run("type", "--graph", graphs["c4"], "--m", "1", "--r", "0", "--kinds", "E", "--t", "1")
    assert code == 0 and text.startswith("{<")
    assert run("type", "--graph", graphs["c4"], "--m", "1", "--kinds", "Q")[0] == 2


def test_dp(graphs):
    code, text, _ = run("dp", "--graph", graphs["c4"], "--pairs", "0-2", "--avoid", "1")
    assert code == 0 and text.splitlines() == ["true", "0 3 2"]
    code, text, _ = run("dp", "--graph", graphs["c4"], "--pairs", "0-2,1-3", "--strict")
    assert (code, text) == (1, "false\n")
    assert run("dp", "--graph", graphs["c4"], "--pairs", "0-2", "--avoid", "0")[0] == 2
    assert run("dp", "--graph", graphs["c4"], "--pairs", "0")[0] == 2
    doc = json.loads(run("dp", "--graph", graphs["grid3"], "--pairs", "0-2,6-8", "--format", "machine")[1])
    assert doc["verdict"] and len(doc["paths"]) == 2


def test_reduce(graphs):
    code, text, _ = run("reduce", "--graph", graphs["grid3"], "--formula", "(forall x (exists y (edge x y)))",
                        "--threshold", "1")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "verdict true" and lines[1].startswith("removed ")
    assert lines[2].startswith("1 S0=")
    code, text, _ = run("reduce", "--graph", graphs["p12"], "--formula", "(exists x (= x x))", "--threshold", "0",
                        "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and doc["verdict"] is True and len(doc["trace"]) == 11
    code, _, err = run("reduce", "--graph", graphs["p12"], "--formula",
                       "(exists x (exists y (and (edge x y) (not (= x y)))))", "--threshold", "0", "--no-widen")
    assert code == 2 and "irrelevant" in err


def test_gen_and_buffer(graphs, tmp_path):
    code, text, _ = run("gen", "grid", "3")
    assert code == 0 and S.loads(text) == S.generate("grid", 3)
    assert run("gen", "cycle", "2")[0] == 2
    assert run("gen", "annulus-fixture", "3")[0] == 2
    assert run("buffer", "--fixture", graphs["annulus"], "--set", "C1", "--width", "3")[:2] == (0, "2..4\n")
    assert run("buffer", "--fixture", graphs["annulus"], "--set", "", "--width", "3")[1] == "1..3\n"
    doc = json.loads(run("buffer", "--fixture", graphs["annulus"], "--set", "0", "--width", "12",
                         "--format", "machine")[1])
    assert doc == {"range": None}
    assert run("buffer", "--fixture", graphs["annulus"], "--set", "C1", "--width", "13")[0] == 2
    assert run("buffer", "--fixture", graphs["k4"], "--set", "C1", "--width", "1")[0] == 2
    code, text, _ = run("gen", "annulus-fixture", "6", "3", "--subdivide")
    path = tmp_path / "sub.json"
    path.write_text(text)
    assert run("buffer", "--fixture", str(path), "--set", "s1_0", "--width", "2")[1] == "2..3\n"


@pytest.mark.parametrize("argv", [
    ("tw", "--graph", "{grid3}", "--format", "machine"),
    ("type", "--graph", "{c4}", "--m", "1", "--r", "1"),
    ("reduce", "--graph", "{grid3}", "--formula", "(forall x (exists y (edge x y)))"),
    ("eval", "--graph", "{c4}", "--formula", "(in x X)", "--free", "x,X:V"),
])
def test_deterministic_output(graphs, argv):
    argv = [a.format(**graphs) for a in argv]
    first = run(*argv)
    assert first[0] == 0 and run(*argv) == first


def test_module_entry_point(graphs):
    proc = subprocess.run([sys.executable, "-m", "cmsotw", "tw", "--graph", graphs["k4"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "3" and proc.stderr == ""
