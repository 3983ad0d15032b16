import json
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import FIXTURES, GF3, ROOT, class_i
from permlab import __version__
from permlab.cli import main
from permlab.extensions import SLOTS, ExtendingDatum, unified_product, validate_extending_structure
from permlab.io import algebra_to_obj, dumps, fmt_tensor, loads
from permlab.perm_core import check_perm


def invoke(*args):
    result = CliRunner().invoke(main, [str(a) for a in args])
    return result.exit_code, result.output


def fx(name):
    return FIXTURES / name


MATRIX = [
    (("check", fx("class_i.json")), 0),
    (("check", fx("class_ii.json")), 1),
    (("check", fx("nonperm.json")), 1),
    (("check", fx("A1.json")), 0),
    (("check", fx("A3.json")), 1),
    (("check", fx("empty.json")), 0),
    (("check", fx("flag_A2.json"), "--what", "flag"), 0),
    (("check", fx("flag_bad.json"), "--what", "flag"), 1),
    (("check", fx("flag_A2.json"), "--what", "flag", "--mode", "literal"), 0),
    (("check", fx("rep_regular.json"), "--what", "rep"), 0),
    (("check", fx("rep_bad.json"), "--what", "rep"), 1),
    (("check", fx("cocycle_gf2.json"), "--what", "cocycle"), 0),
    (("check", fx("cocycle_bad.json"), "--what", "cocycle"), 1),
    (("check", fx("matched_dual.json"), "--what", "datum"), 0),
    (("check", fx("datum_bad.json"), "--what", "datum"), 1),
    (("check", fx("bialg_1_1.json"), "--what", "bialgebra"), 0),
    (("check", fx("bialg_bad.json"), "--what", "bialgebra"), 1),
    (("check", fx("bialg_-1_2.json"), "--what", "manin"), 0),
    (("check", fx("form_zero.json"), "--what", "invariant-form"), 0),
    (("check", fx("form_identity.json"), "--what", "invariant-form"), 1),
    (("check", fx("iso_A2_A1.json"), "--what", "morphism"), 0),
    (("check", fx("class_i.json"), "--what", "flag"), 2),
    (("check", fx("missing.json")), 2),
    (("check", fx("class_i.json"), "--what", "nonsense"), 2),
    (("product", fx("flag_A2.json")), 0),
    (("product", fx("flag_bad.json")), 1),
    (("product", fx("matched_dual.json"), "--kind", "bicrossed"), 0),
    (("product", fx("cocycle_gf2.json"), "--kind", "crossed"), 0),
    (("product", fx("cocycle_bad.json"), "--kind", "crossed"), 1),
    (("product", fx("rep_regular.json"), "--kind", "semidirect"), 0),
    (("product", fx("rep_bad.json"), "--kind", "semidirect"), 1),
    (("product", fx("bialg_0_3.json"), "--kind", "manin"), 0),
    (("product", fx("bialg_bad.json"), "--kind", "manin"), 1),
    (("wells", fx("auto_E.json")), 0),
    (("wells", fx("wells_obstructed_gf2.json")), 1),
    (("wells", fx("wells_nonabelian.json")), 2),
    (("sequation", fx("sequ_solution.json")), 0),
    (("sequation", fx("sequ_nonsolution.json")), 1),
    (("enumerate", "--dim", 2, "--field", "gf2"), 0),
    (("enumerate", "--dim", 2, "--field", "q"), 2),
    (("enumerate", fx("class_i_gf2.json"), "--what", "flag", "--up-to", "equiv"), 0),
    (("enumerate", fx("class_i_gf3.json"), "--what", "flag"), 2),
    (("enumerate", fx("auto_E.json"), "--what", "aut"), 0),
    (("enumerate", fx("sequ_gf3.json"), "--what", "s-solutions"), 0),
    (("enumerate", fx("nonperm.json"), "--what", "aut", "--field", "gf2"), 2),
]


@pytest.mark.parametrize("args,code", MATRIX, ids=[" ".join(str(a).split("/")[-1] for a in m[0]) for m in MATRIX])
def test_exit_code_matrix(args, code):
    got, out = invoke(*args)
    assert got == code, out


def report(*args):
    code, out = invoke(*args, "--json")
    return code, json.loads(out)


def test_report_shape():
    code, rep = report("check", fx("nonperm.json"))
    assert code == 1
    assert rep["command"] == "check" and rep["verdict"] == "fail" and rep["version"] == __version__
    # 1-based indices: (e1 e2) e2 versus e1 (e2 e2)
    assert {"id": "assoc", "indices": [1, 2, 2]} in rep["violations"]


def test_text_mirrors_json():
    _, text = invoke("check", fx("nonperm.json"))
    _, rep = report("check", fx("nonperm.json"))
    assert f"verdict: {rep['verdict']}" in text
    assert f"violations: {len(rep['violations'])} item(s)" in text


def test_wells_report():
    _, rep = report("wells", fx("auto_E.json"))
    assert rep["compatible"] and rep["wells_vanishes"] and rep["inducible"] == "yes"
    assert rep["alpha"] == [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    _, rep = report("wells", fx("wells_obstructed_gf2.json"))
    assert rep["compatible"] and not rep["wells_vanishes"] and rep["inducible"] == "no"


def test_sequation_report():
    _, rep = report("sequation", fx("sequ_nonsolution.json"))
    assert not rep["solution"]
    assert {(tuple(e["indices"]), e["value"]) for e in rep["residual"]} == {((2, 2, 1), "1"), ((1, 2, 2), "-1")}
    assert rep["bialgebra"] == "ok"


def test_enumerate_counts():
    assert report("enumerate", "--dim", 2, "--field", "gf2")[1]["count"] == 25
    assert report("enumerate", "--dim", 2, "--field", "gf2", "--up-to", "iso")[1]["count"] == 7
    assert report("enumerate", "--dim", 0, "--field", "gf3")[1]["count"] == 1
    flag = fx("class_i_gf2.json")
    assert report("enumerate", flag, "--what", "flag")[1]["count"] == 18
    assert report("enumerate", flag, "--what", "flag", "--up-to", "equiv")[1]["count"] == 5
    assert report("enumerate", flag, "--what", "flag", "--up-to", "iso")[1]["count"] == 4
    groups = report("enumerate", fx("auto_E.json"), "--what", "aut")[1]["groups"]
    assert (groups["aut"], groups["aut_kernel"], groups["aut_kernel_id"], groups["kappa_image"]) == (80, 80, 1, 80)


def test_search_bound_env(monkeypatch):
    monkeypatch.setenv("PERMLAB_MAX_SEARCH", "10")
    code, _ = invoke("enumerate", "--dim", 2, "--field", "gf2")
    assert code == 2


def test_product_output_reparses(tmp_path):
    out = tmp_path / "E.json"
    code, _ = invoke("product", fx("flag_A2.json"), "--out", out)
    assert code == 0
    E = loads(out.read_text()).algebra
    assert check_perm(E).ok and E.dim == 3
    assert invoke("check", out)[0] == 0


def test_random_datums_roundtrip(tmp_path, rng):
    A = class_i(GF3)
    base = algebra_to_obj(A)
    shapes = {"br": (2, 1, 1), "bl": (1, 2, 1), "tr": (1, 2, 2), "tl": (2, 1, 2),
              "chi": (1, 1, 2), "dot": (1, 1, 1)}
    valid = 0
    for t in range(100):
        parts = {s: GF3.array(rng.integers(0, 3, sh) * (rng.random(sh) < 0.25)) for s, sh in shapes.items()}
        d = ExtendingDatum(A, 1, **parts)
        path = tmp_path / f"d{t}.json"
        path.write_text(dumps({**base, "datum": {"m": 1, **{s: fmt_tensor(GF3, parts[s]) for s in SLOTS}}}))
        ok = validate_extending_structure(d).ok
        valid += ok
        assert invoke("check", path, "--what", "datum")[0] == (0 if ok else 1)
        out = tmp_path / f"E{t}.json"
        code, _ = invoke("product", path, "--out", out)
        assert code == (0 if ok else 1)
        if ok:
            E = loads(out.read_text()).algebra
            assert np.array_equal(E.sc, unified_product(d).sc)
    assert valid > 0


def test_version():
    code, out = invoke("--version")
    assert code == 0 and __version__ in out


# -- byte-identical reruns, as separate processes ------------------------------------

RERUNS = [
    ["enumerate", "--dim", "2", "--field", "gf3", "--jobs", "3", "--json"],
    ["enumerate", "--dim", "2", "--field", "gf3", "--up-to", "iso", "--jobs", "2"],
    ["enumerate", str(fx("sequ_gf3.json")), "--what", "s-solutions", "--jobs", "2", "--json"],
    ["enumerate", str(fx("class_i_gf2.json")), "--what", "flag", "--up-to", "equiv", "--json"],
    ["check", str(fx("A3.json")), "--json"],
    ["wells", str(fx("auto_E.json")), "--json"],
]


def _run(args):
    proc = subprocess.run([sys.executable, "-m", "permlab", *args], capture_output=True, cwd=ROOT)
    return proc.returncode, proc.stdout


@pytest.mark.parametrize("args", RERUNS, ids=lambda a: " ".join(x.split("/")[-1] for x in a[:4]))
def test_byte_identical_reruns(args):
    runs = [_run(args) for _ in range(3)]
    assert runs[0][1]
    assert all(r == runs[0] for r in runs)


def test_parallel_matches_serial():
    serial = _run(["enumerate", "--dim", "2", "--field", "gf3", "--json"])
    parallel = _run(["enumerate", "--dim", "2", "--field", "gf3", "--jobs", "4", "--json"])
    assert serial == parallel
    assert json.loads(serial[1])["count"] == 113


def test_fixtures_are_current():
    proc = subprocess.run([sys.executable, "scripts/make_fixtures.py", "--check"], capture_output=True, cwd=ROOT)
    assert proc.returncode == 0, proc.stderr.decode()
