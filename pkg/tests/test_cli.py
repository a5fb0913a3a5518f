import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from metric_completion import selftest
from metric_completion.cli import SCHEMA, main

GOLDEN = Path(__file__).parent / "golden"
VALIDATOR = jsonschema.Draft202012Validator(json.loads((Path(__file__).parents[1] / "docs" / "schema.json").read_text()))


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    d = json.loads(text)
    VALIDATOR.validate(d)
    return code, d


@pytest.fixture
def spec(tmp_path):
    def write(text, name="in.spec"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def _without_schema(text):
    return "\n".join(line for line in text.splitlines() if not line.lstrip().startswith('"schema"'))


@pytest.mark.parametrize("name", ["z_torsion_2", "z_prime_tail", "kronecker_tube"])
def test_golden_classify(name):
    code, text = run("classify", str(GOLDEN / f"{name}.spec"), "--json")
    assert code == 0
    assert _without_schema(text) == _without_schema((GOLDEN / f"{name}.json").read_text())
    assert json.loads(text)["schema"] == SCHEMA
    VALIDATOR.validate(json.loads(text))


def test_classify_text_and_support(spec):
    f = spec("ring Z\nmetric M = constant torsion {2}\nobject X = Z/3\nobject Y = Z/2\n"
             "query support X M\nquery support Y M\n")
    code, text = run("classify", f)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "M: case I; kernel Torsion({2}); completion D^b(mod Z[1/2])"
    assert lines[-2:] == ["compact support of Z/3 for M: 1",
                          "compact support of Z/2 for M: absent up to level 2"]
    code, d = run_json("classify", f)
    assert d["compactSupport"][0] == {"object": "Z/3", "metric": "M", "index": 1, "horizon": 2, "certified": True}


def test_classify_several_metrics(spec):
    f = spec("ring Z\nmetric A = constant torsion all\nmetric B = t_structure\n")
    code, d = run_json("classify", f)
    assert code == 0
    assert [(r["metric"], r["case"], r["category"]) for r in d["results"]] == [
        ("A", "I", "D^b(mod Q)"), ("B", "I", "D^b(mod Z)")]


def test_classify_uncountable_field_override(spec):
    f = spec("ring kronecker\nmetric M = constant regular all\n")
    code, d = run_json("classify", f, "--field", "symbolic")
    assert (code, d["case"], d["category"], d["countablyGenerated"]) == (0, "II", "0", False)


def test_lattice_commands(spec):
    f = spec("ring Z\nmetric A = aisle\nmetric B = coaisle\nmetric C = constant torsion {2, 3}\n"
             "metric D = constant torsion {3, 5}\n")
    code, d = run_json("lattice", "join", f, "A", "B")
    assert code == 0
    assert d["result"] == {"normalForm": "window (-n, n]; chain 0", "kernel": "0",
                           "convergesUniformly": True, "recognized": "t_structure"}
    assert run("lattice", "meet", f, "C", "D") == (0, "window (-inf, +inf]; chain Torsion({3})\n")
    assert run("lattice", "leq", f, "A", "A") == (0, "true\n")
    assert run("lattice", "leq", f, "C", "A") == (0, "false\n")
    assert run("lattice", "equivalent", f, "A", "A") == (0, "true\n")
    code, d = run_json("lattice", "frob", f)
    assert code == 2 and d["error"]["name"] == "UsageError"
    code, d = run_json("lattice", "meet", f, "A", "Q")
    assert code == 2 and "unknown metric Q" in d["error"]["message"]


def test_cauchy_build_inline():
    code, text = run("cauchy", "build", "Z", "torsion", "{2}", "steps=4")
    assert code == 0
    assert text.splitlines() == ["Z -*2-> Z -*2-> Z -*2-> Z -*2-> Z", "cones: Z/2, Z/2, Z/2, Z/2",
                                 "Cauchy for constant Torsion({2}) up to level 4: yes",
                                 "homotopy colimit: Z[1/2]"]
    code, d = run_json("cauchy", "build", "kronecker regular {(1:0)} steps=3")
    assert code == 0
    assert d["cones"] == ["R(1:0)"] * 3 and d["hocolim"]["object"] == "E{(1:0)}"
    assert d["certificate"]["ok"] is True


def test_cauchy_build_from_file(spec):
    f = spec("ring Z\nquery build torsion {2, 3} start Z^2 steps 4\n")
    code, d = run_json("cauchy", "build", f)
    assert code == 0
    assert d["sequence"].count("*3") == 2 and d["hocolim"]["object"] == "Z[1/2,1/3]^2"


def test_cauchy_check(spec):
    f = spec("ring Z\nmetric M = constant torsion {2}\nsequence S = Z -*3-> Z -*3-> Z -*3-> Z\nquery check S M\n")
    code, text = run("cauchy", "check", f)
    assert code == 0
    assert text.strip() == "not Cauchy: cone Z/3 at map 3 is not in ball 1 (Out)"
    g = spec("ring Z\nmetric M = constant torsion {2}\nsequence S = Z -*2-> Z -*2-> Z\nquery check S M 2\n", "g.spec")
    code, d = run_json("cauchy", "check", g)
    assert d["certificate"]["ok"] and d["certificate"]["horizon"] == 2


def test_hom(spec):
    f = spec("ring Z\nobject X = Z/4 + Z\nobject Y = Z/2@1\n")
    code, d = run_json("hom", f)
    assert code == 0
    assert d == {"schema": SCHEMA, "command": "hom", "source": "Z + Z/4", "target": "Z/2@1",
                 "graded": {"1": "Z/2 + Z/2", "2": "Z/2"}}


def test_cone_expressions(spec):
    assert run("cone", "Z --2--> Z") == (0, "Z/2 in degree 0\n")
    assert run("cone", "Z/4 --2--> Z/4") == (0, "Z/2 in degree -1; Z/2 in degree 0\n")
    assert run("cone", "Z + Z/4 --[[2, 2]]--> Z/8") == (0, "Z in degree -1; Z/2 in degree 0\n")
    f = spec("ring kronecker rational\nmap f = P0 --([[]]; [[1], [0]])--> P1\n")
    code, d = run_json("cone", f)
    assert (code, d["cone"], d["cohomology"]) == (0, "R(0:1)", {"0": "R(0:1)"})
    k = spec("ring kronecker 5\nmap f = canonical 3 (1:2)\nquery cone f\n", "k.spec")
    assert run("cone", k) == (0, "R(1:2) in degree 0\n")


def test_errors(spec):
    bad = spec("ring Z\nmetric M = constant torsoin {2}\n")
    code, d = run_json("classify", bad)
    assert code == 2
    assert d == {"schema": SCHEMA, "error": {"name": "SpecParseError", "message": "unknown descriptor 'torsoin'",
                                             "line": 2, "column": 21, "rule": "descriptor"}}
    code, text = run("classify", bad)
    assert code == 2 and text.startswith("parse error: line 2, column 21")
    dyn = spec("ring dynkin 3\nmetric M = constant all\n", "d.spec")
    code, d = run_json("classify", dyn)
    assert code == 3 and d["error"]["name"] == "UnsupportedRing"
    code, d = run_json("classify", "/nonexistent/file.spec")
    assert code == 2 and d["error"]["name"] == "FileError"
    code, d = run_json("cauchy", "build", "Z", "everything")
    assert code == 2 and d["error"]["name"] == "UsageError"


def test_selftest_small_passes():
    code, text = run("selftest")
    assert code == 0
    rows = text.splitlines()[1:]
    assert len(rows) == len(selftest.SUITES) and all(r.endswith("PASS") for r in rows)


def test_selftest_failure_exit_code(monkeypatch):
    def broken(bounds):
        r = selftest.SuiteResult("broken")
        r.cases, r.failures = 1, ["x"]
        return r
    monkeypatch.setattr(selftest, "SUITES", (broken,))
    code, d = run_json("selftest")
    assert code == 1 and d["ok"] is False and d["suites"][0]["failures"] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "metric_completion", "cone", "Z --2--> Z"],
                       capture_output=True, text=True, check=False)
    assert (r.returncode, r.stdout) == (0, "Z/2 in degree 0\n")
    r = subprocess.run([sys.executable, "-m", "metric_completion"], capture_output=True, text=True, check=False)
    assert r.returncode == 2


def test_classify_query_lists_several_metrics(spec):
    f = spec("ring Z\nmetric A = constant torsion {2}\nmetric B = t_structure\nmetric C = aisle\n"
             "query classify B A\n")
    code, d = run_json("classify", f)
    assert code == 0 and [r["metric"] for r in d["results"]] == ["B", "A"]


def test_schema_rejects_drift():
    code, d = run_json("cone", "Z --2--> Z")
    with pytest.raises(jsonschema.ValidationError):
        VALIDATOR.validate({**d, "extra": 1})
    with pytest.raises(jsonschema.ValidationError):
        VALIDATOR.validate({**d, "schema": "metric-completion/0"})
