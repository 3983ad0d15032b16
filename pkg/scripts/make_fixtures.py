"""Regenerate the JSON fixture corpus under fixtures/paper/.

    python scripts/make_fixtures.py [--check]

With --check nothing is written; the exit status is 1 if any file on disk
differs from what this script would produce.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from permlab.bialgebra import Comultiplication, dual_matched_pair, dual_product
from permlab.io import algebra_to_obj, dumps, fmt_map, fmt_tensor
from permlab.kernel import Field
from permlab.perm_core import PermAlgebra, regular_representation

ROOT = Path(__file__).resolve().parents[1] / "fixtures" / "paper"
Q, GF2, GF3, GF5 = Field(0), Field(2), Field(3), Field(5)


def table(F: Field, n: int, products: dict, basis=None) -> PermAlgebra:
    return PermAlgebra.from_table(F, n, products, basis)


def with_note(obj: dict, note: str) -> dict:
    obj["note"] = note
    return obj


def algebra_file(A: PermAlgebra, note: str, **blocks) -> dict:
    obj = algebra_to_obj(A)
    obj.update(blocks)
    return with_note(obj, note)


def class_i(F: Field) -> PermAlgebra:
    return table(F, 2, {(0, 0): {0: 1}, (1, 0): {1: 1}})


def three_dim(products: dict) -> PermAlgebra:
    return table(Q, 3, products, ("e1", "e2", "x"))


def a_s1(s1, s2=0) -> PermAlgebra:
    prod = {(0, 0): {0: s1, 1: s2}, (1, 0): {1: s1}}
    return table(Q, 2, prod)


def corpus() -> dict:
    out = {}
    A = class_i(Q)
    out["class_i.json"] = algebra_file(A, "noncommutative 2-dim class (i): e1e1=e1, e2e1=e2")
    out["class_ii.json"] = algebra_file(
        table(Q, 2, {(0, 0): {0: 1, 1: 1}, (1, 0): {1: 1}}),
        "noncommutative 2-dim class (ii): e1e1=e1+e2, e2e1=e2")
    out["class_i_gf2.json"] = algebra_file(class_i(GF2), "class (i) reduced mod 2")
    out["class_i_gf3.json"] = algebra_file(class_i(GF3), "class (i) reduced mod 3")
    out["empty.json"] = algebra_file(PermAlgebra.zero(Q, 0), "zero-dimensional algebra")
    out["nonperm.json"] = algebra_file(table(Q, 2, {(0, 1): {0: 1}}),
                                       "e1e2=e1 only; violates (xy)z = x(zy)")

    base = {(0, 0): {0: 1}, (1, 0): {1: 1}}
    tables = {
        "A1": {(0, 2): {2: 1}, (2, 0): {2: 1}},
        "A2": {(0, 2): {2: 1}, (2, 0): {2: 1}, (2, 2): {2: 1}},
        "A3": {(0, 2): {1: 1}, (2, 0): {2: 1}},
        "A4": {(2, 0): {2: 1}},
        "A5": {(2, 0): {2: 1}, (2, 2): {1: 1}},
        "A6": {(2, 0): {2: 1}},
    }
    for name, extra in tables.items():
        out[f"{name}.json"] = algebra_file(three_dim({**base, **extra}),
                                           f"{name}: 3-dim algebra containing class (i) as e1, e2, as printed")
    for q in (-1, 0, 1, 2):
        A_q = three_dim({**base, (2, 2): {1: q, 2: q}})
        out[f"A_q{q}_k{q}.json"] = algebra_file(A_q, f"A_(q,k) at q = k = {q}: xx = q e2 + k x, as printed")

    # flag datum producing A2 from class (i)
    out["flag_A2.json"] = algebra_file(A, "flag datum h = g = e1*, D = T = 0, a~ = 0, k~ = 1; unified product is A2",
                                       flag={"h": ["1", "0"], "g": ["1", "0"], "k_tilde": "1"})
    out["flag_zero.json"] = algebra_file(A, "zero flag datum; unified product is the direct sum with a null line",
                                         flag={})
    out["flag_bad.json"] = algebra_file(A, "h = e1*, g = 0 violates the flag conditions",
                                        flag={"h": ["1", "0"]})

    # isomorphism certificates f(e1) = (s1/s1')(e1 + e2)
    for (s, t) in ((2, 1), (3, 5)):
        c = Fraction(s, t)
        f = [[str(c), str(c)], ["0", "1"]]
        out[f"iso_A{s}_A{t}.json"] = algebra_file(
            a_s1(s), f"certificate A_{s} -> A_{t}", map={"target": _core(a_s1(t)), "images": f})
    for (s1, s2, t1, t2) in ((1, 1, 2, 3), (2, -1, -3, 4)):
        c = Fraction(s1, t1)
        d = Fraction(s1 * s1 * t2, t1 * t1 * s2)
        f = [[str(c), str(c)], ["0", str(d)]]
        out[f"iso_A{s1}_{s2}_A{t1}_{t2}.json"] = algebra_file(
            a_s1(s1, s2), f"certificate A_({s1},{s2}) -> A_({t1},{t2})",
            map={"target": _core(a_s1(t1, t2)), "images": f})

    # semidirect product with the regular bimodule
    reg = regular_representation(A)
    out["rep_regular.json"] = algebra_file(A, "regular bimodule of class (i)", rep={
        "dim": 2, "L": [fmt_map(Q, M) for M in reg.L], "R": [fmt_map(Q, M) for M in reg.R]})
    out["rep_bad.json"] = algebra_file(A, "L(e1) = id, R = 0 is not a bimodule", rep={
        "dim": 1, "L": [[["1"]], [["0"]]], "R": [[["0"]], [["0"]]]})

    # automorphism example over GF(5)
    E = table(GF5, 3, {(0, 0): {0: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}})
    out["auto_E.json"] = algebra_file(E, "split abelian extension of class (i) by the line e3 over GF(5)",
                                      extension={"kernel": ["e3"]},
                                      pair={"beta": [["2"]], "gamma": [["1", "0"], ["0", "1"]]})
    out["auto_E_identity.json"] = algebra_file(E, "same extension with the identity pair",
                                               extension={"kernel": ["e3"]},
                                               pair={"beta": [["1"]], "gamma": [["1", "0"], ["0", "1"]]})
    out["wells_obstructed_gf2.json"] = algebra_file(
        table(GF2, 3, {(1, 1): {2: 1}}),
        "nonsplit extension e2e2 = e3 over GF(2); swapping e1, e2 is compatible but not inducible",
        extension={"kernel": ["e3"]}, pair={"beta": [["1"]], "gamma": [["0", "1"], ["1", "0"]]})
    out["wells_nonabelian.json"] = algebra_file(
        table(GF2, 2, {(0, 0): {0: 1}}), "ideal e1 with e1e1 = e1 has a nonzero product",
        extension={"kernel": ["e1"]}, pair={"beta": [["1"]], "gamma": [["1"]]})

    # the same obstruction as a cocycle block
    zero_b = {"dim": 2, "products": []}
    out["cocycle_gf2.json"] = algebra_file(
        PermAlgebra.zero(GF2, 1), "line kernel, zero quotient, chi(e2, e2) = e1",
        cocycle={"B": zero_b, "chi": [[["0"], ["0"]], [["0"], ["1"]]]})
    out["cocycle_bad.json"] = algebra_file(
        PermAlgebra.zero(Q, 1), "left action by the unit of a zero quotient is not a cocycle",
        cocycle={"B": {"dim": 1, "products": []}, "tr": [[["1"]]]})

    # bialgebra family on class (i): delta(e1) = k1 e2 x e2, delta(e2) = k2 e2 x e2
    for k1, k2 in ((1, 1), (-1, 2), (0, 3)):
        delta = _delta(k1, k2)
        out[f"bialg_{k1}_{k2}.json"] = algebra_file(A, f"delta(e1) = {k1} e2e2, delta(e2) = {k2} e2e2",
                                                    delta=delta)
    out["bialg_bad.json"] = algebra_file(A, "delta(e1) = e1 x e1 is not compatible",
                                         delta=[[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]])
    D = Comultiplication(A, _arr(_delta(1, 1)))
    mp = dual_matched_pair(A, dual_product(D).algebra)
    d = mp.datum()
    out["matched_dual.json"] = algebra_file(A, "matched pair of class (i) with its dual for k1 = k2 = 1", datum={
        "m": 2, "basis": list(mp.V.basis),
        **{s: fmt_tensor(Q, getattr(d, s)) for s in ("br", "bl", "tr", "tl", "dot")}})
    out["datum_bad.json"] = algebra_file(A, "a |> v = v for every a breaks the extending axioms", datum={
        "m": 1, "br": [[["1"]], [["1"]]]})

    # S-equation
    out["sequ_solution.json"] = algebra_file(A, "r = e2 x e2", r=[["0", "0"], ["0", "1"]])
    out["sequ_nonsolution.json"] = algebra_file(A, "r = e1 x e2 + e2 x e1 + e2 x e2",
                                                r=[["0", "1"], ["1", "1"]])
    out["sequ_gf3.json"] = algebra_file(class_i(GF3), "class (i) over GF(3) for the symmetric r sweep",
                                        r=[["0", "0"], ["0", "1"]])

    # invariant form: the zero form is invariant; the identity is not
    out["form_zero.json"] = algebra_file(A, "zero form", form=[["0", "0"], ["0", "0"]])
    out["form_identity.json"] = algebra_file(A, "identity Gram matrix", form=[["1", "0"], ["0", "1"]])
    return out


def _core(A: PermAlgebra) -> dict:
    return algebra_to_obj(A, with_field=False)


def _delta(k1, k2) -> list:
    z = ["0", "0"]
    return [[z, ["0", str(k1)]], [z, ["0", str(k2)]]]


def _arr(nested) -> np.ndarray:
    return np.vectorize(Q.parse, otypes=[object])(np.array(nested, dtype=object))


def divergent() -> dict:
    """Printed values that disagree with direct evaluation, kept side by side."""
    return {
        "divergent/sequ_residual.json": {
            "note": "residual of r = e1e2 + e2e1 + e2e2 on class (i); printed value differs from the expansion",
            "r": [["0", "1"], ["1", "1"]],
            "printed": {"e2 e2 e1": "1", "e2 e1 e2": "-1"},
            "derived": {"e2 e2 e1": "1", "e1 e2 e2": "-1"},
        },
        "divergent/sequ_delta.json": {
            "note": "coboundary delta of r = e2 x e2 on class (i); printed sign differs",
            "r": [["0", "0"], ["0", "1"]],
            "printed": {"e1": {"e2 e2": "1"}, "e2": {}},
            "derived": {"e1": {"e2 e2": "-1"}, "e2": {}},
        },
        "divergent/A_nonperm.json": {
            "note": "tables printed as perm that fail (xy)z = x(zy) or (xy)z = x(yz)",
            "failing": ["A3", "A5", "A_q-1_k-1", "A_q1_k1", "A_q2_k2"],
        },
    }


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    files = {**corpus(), **divergent()}
    stale = []
    for name, obj in sorted(files.items()):
        path = ROOT / name
        text = dumps(obj)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(name)
            continue
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    if stale:
        print("stale:", *stale, file=sys.stderr)
        return 1
    print(f"{len(files)} fixtures {'up to date' if args.check else 'written'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
