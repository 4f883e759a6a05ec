import json
import subprocess
import sys

import pytest

from cychom import constructions as cons
from cychom.cli import main
from cychom.fields import QQ
from cychom.io import algebra_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def as_json(out):
    return json.loads(out)


@pytest.fixture
def m2_file(tmp_path):
    p = tmp_path / "m2.json"
    p.write_text(json.dumps({"construct": "matrix", "n": 2, "field": "Q"}))
    return str(p)


def test_validate_exit_codes(capsys, tmp_path, m2_file):
    code, out = run(capsys, "validate", m2_file)
    assert code == 0 and as_json(out)["dim"] == 4

    raw = algebra_to_json(cons.matrix_algebra(QQ, 2))
    raw["structure"].append({"i": "E:1,2", "j": "E:1,2", "k": "E:1,1", "c": "1"})
    bad = tmp_path / "corrupt.json"
    bad.write_text(json.dumps(raw))
    code, out = run(capsys, "validate", str(bad))
    assert code == 1
    report = as_json(out)
    assert report["error"] == "NotAssociative" and len(report["counterexample"]) == 3

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(capsys, "validate", str(broken))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "nowhere.json"))[0] == 2
    odd = tmp_path / "list.json"
    for text in ("[1, 2]", '{"construct": "matrix", "n": 2, "field": 7}', '{"labels": "ab"}',
                 '{"construct": "direct_sum", "summands": []}'):
        odd.write_text(text)
        assert run(capsys, "validate", str(odd))[0] == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["homology"]) == 2
    assert main(["homology", "matrix2", "--theory", "de_rham"]) == 2
    capsys.readouterr()
    assert run(capsys, "homology", "polynomial_torus")[0] == 2
    assert run(capsys, "gallery", "no_such_entry")[0] == 2


@pytest.mark.parametrize("entry, theory, n, dims", [
    ("matrix2", "hc", 4, [1, 0, 1, 0, 1]),
    ("dual_numbers", "hh", 4, [2, 1, 1, 1, 1]),
    ("groupZ2", "hc", 4, [2, 0, 2, 0, 2]),
])
def test_homology(capsys, entry, theory, n, dims):
    code, out = run(capsys, "homology", entry, "--theory", theory, "--max-degree", str(n))
    rep = as_json(out)
    assert code == 0
    assert [rep["dims"][str(k)] for k in range(n + 1)] == dims
    if theory == "hc":
        assert rep["cross_check"]["agree"] is True


def test_homology_default_degree_and_size_cap(capsys, m2_file):
    code, out = run(capsys, "homology", m2_file)
    assert code == 0 and sorted(as_json(out)["dims"]) == ["0", "1", "2", "3"]
    code, out = run(capsys, "--size-cap", "50", "homology", m2_file)
    assert code == 2 and as_json(out)["error"] == "DegreeTooLarge"


def test_cross_check_skipped_when_bb_exceeds_cap(capsys, monkeypatch):
    from cychom import complexes
    from cychom.errors import DegreeTooLarge
    real = complexes.cyclic_homology

    def fake(A, n, method="all", size_cap=None):
        if method == "bB_bicomplex":
            raise DegreeTooLarge(10 ** 6, 10)
        return real(A, n, method, size_cap)

    monkeypatch.setattr(complexes, "cyclic_homology", fake)
    code, out = run(capsys, "homology", "rationals", "--theory", "hc", "--max-degree", "2")
    assert code == 0 and "skipped" in as_json(out)["cross_check"]


def test_deterministic_output(capsys):
    strip = lambda s: [l for l in s.splitlines() if "elapsed_ms" not in l]
    _, a = run(capsys, "homology", "dual_numbers", "--theory", "hc")
    _, b = run(capsys, "homology", "dual_numbers", "--theory", "hc")
    assert strip(a) == strip(b)


@pytest.mark.parametrize("suite, extra", [("identities", []), ("sbi", []), ("morita", ["--max-degree", "2"]),
                                          ("inner", ["--max-degree", "2"])])
def test_audit(capsys, suite, extra):
    entry = "dual_numbers" if suite == "sbi" else "matrix2"
    code, out = run(capsys, "audit", entry, "--suite", suite, *extra)
    assert code == 0 and as_json(out)["passed"] is True


def test_pair(capsys, tmp_path):
    cocycle = tmp_path / "tau.json"
    cocycle.write_text(json.dumps({"kind": "trace", "algebra": {"construct": "weyl_torus", "p": 1, "q": 3}}))
    elem = tmp_path / "e.json"
    elem.write_text(json.dumps({"builtin": "weyl_idempotent"}))
    code, out = run(capsys, "pair", "--cocycle", str(cocycle), "--element", str(elem))
    assert code == 0 and as_json(out)["value"] == "1/3"

    wind = tmp_path / "wind.json"
    wind.write_text(json.dumps({"kind": "group_cocycle", "algebra": {"construct": "group", "lattice": 1},
                                "degree": 1, "linear": ["1"]}))
    unit = tmp_path / "u.json"
    unit.write_text(json.dumps({"entries": [[{"g:(1)": "1"}]], "witness": [[{"g:(-1)": "1"}]]}))
    code, out = run(capsys, "pair", "--cocycle", str(wind), "--element", str(unit))
    assert code == 0 and as_json(out)["value"] == "1"

    # the Weyl idempotent does not live on Q[Z]
    code, out = run(capsys, "pair", "--cocycle", str(wind), "--element", str(elem))
    assert code == 2 and as_json(out)["error"] == "ParseError"
    # an odd cocycle against an idempotent is a degree mismatch
    e = tmp_path / "one.json"
    e.write_text(json.dumps({"entries": [[{"g:(0)": "1"}]]}))
    code, out = run(capsys, "pair", "--cocycle", str(wind), "--element", str(e))
    assert code == 1 and as_json(out)["error"] in ("DegreeMismatch", "NoCertificate")


def test_pair_family(capsys, tmp_path):
    field = {"rational_function": "Q", "var": "t"}
    cocycle = tmp_path / "tr.json"
    cocycle.write_text(json.dumps({"kind": "trace", "trace": "tr",
                                   "algebra": {"construct": "matrix", "n": 2, "field": field}}))
    e = tmp_path / "e.json"
    e.write_text(json.dumps({"entries": [[{"E:1,1": "1"}]]}))
    u = tmp_path / "u.json"
    u.write_text(json.dumps({"entries": [[{"E:1,1": "1", "E:2,2": "1", "E:1,2": "t"}]]}))
    code, out = run(capsys, "pair", "--cocycle", str(cocycle), "--element", str(e), "--family", str(u))
    rep = as_json(out)
    assert code == 0 and rep["constant"] is True and rep["value"] == "1"


def test_gallery_list_and_run(capsys):
    code, out = run(capsys, "gallery")
    names = {e["name"] for e in as_json(out)["entries"]}
    assert {"matrix2", "dual_numbers", "groupZ2", "groupS3", "pairs_groupoid_3", "weyl_torus_1_3",
            "polynomial_torus", "hopf_sphere", "podles_sphere", "extension_x3"} <= names
    code, out = run(capsys, "gallery", "hopf_sphere")
    assert code == 0 and as_json(out)["passed"] is True
    code, out = run(capsys, "--format", "text", "gallery", "podles_sphere")
    assert code == 0 and "passed: yes" in out


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "cychom.cli", "gallery", "integers"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"][0]["got"] == "1"
