"""Check exactness of the Wells sequence over every abelian extension context
with dim A = 1 and dim B = 2 over GF(2).
"""
import itertools

import numpy as np

from permlab.errors import InvalidCocycle
from permlab.kernel import Field
from permlab.nonabelian import WellsContext, check_wells_sequence, compatible_pairs, wells_map
from permlab.perm_core import PermAlgebra, Representation, check_perm

GF2 = Field(2)


def contexts():
    algs = [PermAlgebra(GF2, sc.reshape(2, 2, 2)) for sc in GF2.tensors((8,))]
    for B in (A for A in algs if check_perm(A).ok):
        for L, R in itertools.product(GF2.tensors((2, 1, 1)), repeat=2):
            rep = Representation(B, L, R)
            for chi in GF2.tensors((2, 2, 1)):
                try:
                    yield WellsContext(B, rep, chi)
                except InvalidCocycle:
                    continue


def main() -> None:
    total = exact = obstructed = 0
    for ctx in contexts():
        total += 1
        exact += check_wells_sequence(ctx).ok
        obstructed += any(not wells_map(ctx, p).vanishes for p in compatible_pairs(ctx))
    print(f"contexts: {total}, exact: {exact}, with an obstructed compatible pair: {obstructed}")
    raise SystemExit(0 if exact == total else 1)


if __name__ == "__main__":
    main()
