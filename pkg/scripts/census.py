"""Count perm algebras of a given dimension over GF(p), with and without isomorphism.

    python scripts/census.py --p 2 --dim 2 [--jobs 2]
"""
import argparse

from permlab.cli import enumerate_perm
from permlab.io import emit_algebra
from permlab.kernel import Field


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--show", action="store_true", help="print each isomorphism class representative")
    args = ap.parse_args()
    F = Field(args.p)
    every = enumerate_perm(F, args.dim, "none", args.jobs)
    classes = enumerate_perm(F, args.dim, "iso", args.jobs)
    print(f"GF({args.p}), dim {args.dim}: {len(every)} perm algebras, {len(classes)} up to isomorphism")
    if args.show:
        for A in classes:
            print(emit_algebra(A))


if __name__ == "__main__":
    main()
