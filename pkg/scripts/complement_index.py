"""Complement index of every matched pair (A, V) with dim A = dim V = 1 over GF(2),
and of the pair A = span(e1, e2), V = span(e3) inside e_i e1 = e_i over GF(p).

The index counts deformation maps up to equivalence; it is compared with an
independent count of isomorphism classes of the deformed complements.
"""
import argparse
import itertools

from permlab.extensions import (MatchedPair, classify_complements, complement_iso_classes,
                                validate_matched_pair)
from permlab.kernel import Field
from permlab.perm_core import PermAlgebra, check_perm


def small_pairs(F: Field):
    algs = [A for A in (PermAlgebra(F, t.reshape(1, 1, 1)) for t in F.tensors((1,))) if check_perm(A).ok]
    for A, V in itertools.product(algs, repeat=2):
        for flat in F.tensors((4,)):
            mp = MatchedPair(A, V, *(flat[i].reshape(1, 1, 1) for i in range(4)))
            if validate_matched_pair(mp).ok:
                yield mp


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    args = ap.parse_args()
    rows = [("dim-1 pairs over GF(2)", mp) for mp in small_pairs(Field(2))]
    F = Field(args.p)
    E = PermAlgebra.from_table(F, 3, {(0, 0): {0: 1}, (1, 0): {1: 1}, (2, 0): {2: 1}})
    rows.append((f"e_i e1 = e_i over GF({args.p})", MatchedPair.from_extension(E, [0, 1])))
    bad = 0
    for label, mp in rows:
        cls = classify_complements(mp)
        iso = complement_iso_classes(mp)
        bad += cls.index != iso
        print(f"{label}: {len(cls.deformation_maps)} deformation maps, index {cls.index}, iso classes {iso}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
