"""Classify the flag extensions of the 2-dim algebra e1e1 = e1, e2e1 = e2 over GF(p).

    python scripts/flag_classification.py [--p 2]

Prints the valid datums grouped into equivalence classes, then which classes
give isomorphic 3-dim algebras.
"""
import argparse
import itertools

from permlab.flag import enumerate_flag_extensions
from permlab.io import fmt_tensor
from permlab.kernel import Field
from permlab.perm_core import PermAlgebra, find_isomorphism


def describe(fd) -> str:
    F = fd.field
    parts = {"h": fd.h, "g": fd.g, "D": fd.D, "T": fd.T, "a~": fd.a_tilde, "k~": fd.k_tilde}
    return "  ".join(f"{k}={fmt_tensor(F, v)}" for k, v in parts.items())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    args = ap.parse_args()
    F = Field(args.p)
    A = PermAlgebra.from_table(F, 2, {(0, 0): {0: 1}, (1, 0): {1: 1}})
    res = enumerate_flag_extensions(A)
    print(f"{len(res.datums)} valid flag datums, {len(res.classes)} equivalence classes")
    for i, cls in enumerate(res.classes):
        print(f"class {i + 1} ({len(cls)} datums), representative: {describe(cls[0])}")
    iso = [(i + 1, j + 1) for i, j in itertools.combinations(range(len(res.algebras)), 2)
           if find_isomorphism(res.algebras[i], res.algebras[j]) is not None]
    print(f"isomorphic class pairs: {iso or 'none'}")
    print(f"isomorphism classes of the products: {len(res.classes) - len(iso)}")


if __name__ == "__main__":
    main()
