"""Perm algebras, morphisms, representations and invariant forms.

A perm algebra satisfies (ab)c = a(bc) = a(cb).  ``PermAlgebra`` only
stores structure constants; whether they are perm is decided by
:func:`check_perm`, so the same container doubles as a candidate for
oracle tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (DimensionMismatch, NotCommutativeAssociative,
                     NotDifferential, PreconditionFailed, SearchBoundExceeded,
                     UnsupportedField)
from .kernel import (Field, Verdict, flat_key, freeze, mat_inverse,
                     mismatches, rank, same)


def default_basis(n: int, prefix: str = "e") -> tuple:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


class PermAlgebra:
    """Structure constants ``sc[i, j, k]``: e_i e_j = sum_k sc[i, j, k] e_k."""

    __slots__ = ("field", "sc", "basis")

    def __init__(self, field: Field, sc, basis: Sequence[str] | None = None):
        sc = field.array(sc) if np.asarray(sc).dtype != field.dtype else np.asarray(sc)
        if sc.ndim != 3 or not (sc.shape[0] == sc.shape[1] == sc.shape[2]):
            raise DimensionMismatch(f"structure constants of shape {sc.shape}")
        n = sc.shape[0]
        basis = default_basis(n) if basis is None else tuple(basis)
        if len(basis) != n:
            raise DimensionMismatch(f"{len(basis)} labels for dimension {n}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "sc", freeze(field.reduce(sc)))
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("PermAlgebra is immutable")

    @classmethod
    def from_table(cls, field: Field, n: int, products: dict,
                   basis: Sequence[str] | None = None) -> "PermAlgebra":
        """``products`` maps (i, j) to {k: coefficient}; zero-based indices."""
        sc = field.zeros((n, n, n))
        for (i, j), res in products.items():
            for k, c in res.items():
                sc[i, j, k] = field(c)
        return cls(field, sc, basis)

    @classmethod
    def zero(cls, field: Field, n: int) -> "PermAlgebra":
        return cls(field, field.zeros((n, n, n)))

    @property
    def dim(self) -> int:
        return self.sc.shape[0]

    def __repr__(self):
        return f"PermAlgebra({self.field}, {self.describe()})"

    def __eq__(self, other):
        return (isinstance(other, PermAlgebra) and self.field == other.field
                and self.basis == other.basis and same(self.sc, other.sc))

    def __hash__(self):
        return hash((self.field, self.basis, flat_key(self.sc)))

    def key(self) -> tuple:
        return flat_key(self.sc)

    def describe(self) -> str:
        terms = []
        for i, j in np.ndindex(self.dim, self.dim):
            res = [(k, c) for k, c in enumerate(self.sc[i, j]) if c != 0]
            if res:
                rhs = " + ".join(self._term(c, self.basis[k]) for k, c in res)
                terms.append(f"{self.basis[i]}{self.basis[j]}={rhs}")
        return ", ".join(terms) if terms else "zero product"

    def _term(self, c, label) -> str:
        s = self.field.format(c)
        return label if s == "1" else f"{s}{label}"

    def mul(self, x, y) -> np.ndarray:
        return self.field.einsum("i,j,ijk->k", np.asarray(x), np.asarray(y), self.sc)

    def unit(self, i: int) -> np.ndarray:
        return self.field.unit(self.dim, i)

    def left(self, x) -> np.ndarray:
        """Matrix of L(x): y -> xy."""
        return self.field.einsum("i,ijk->kj", np.asarray(x), self.sc)

    def right(self, x) -> np.ndarray:
        """Matrix of R(x): y -> yx."""
        return self.field.einsum("j,ijk->ki", np.asarray(x), self.sc)

    def left_mats(self) -> np.ndarray:
        """Stack with ``[i]`` = L(e_i)."""
        return np.transpose(self.sc, (0, 2, 1)).copy()

    def right_mats(self) -> np.ndarray:
        """Stack with ``[i]`` = R(e_i)."""
        return np.transpose(self.sc, (1, 2, 0)).copy()

    def relabel(self, basis: Sequence[str]) -> "PermAlgebra":
        return PermAlgebra(self.field, self.sc, basis)

    def transport(self, g) -> "PermAlgebra":
        """Structure constants after the change of basis e'_j = g e_j."""
        F = self.field
        ginv = mat_inverse(F, g)
        if ginv is None:
            raise PreconditionFailed("change of basis must be invertible")
        return PermAlgebra(F, F.einsum("ai,bj,abc,kc->ijk", g, g, self.sc, ginv), self.basis)


Algebra = PermAlgebra


def check_perm(A: PermAlgebra) -> Verdict:
    """Associativity and right commutativity on all basis triples."""
    F, sc = A.field, A.sc
    lhs = F.einsum("ija,akl->ijkl", sc, sc)   # (e_i e_j) e_k
    mid = F.einsum("jka,ial->ijkl", sc, sc)   # e_i (e_j e_k)
    rhs = F.einsum("kja,ial->ijkl", sc, sc)   # e_i (e_k e_j)
    return Verdict.of(mismatches("assoc", [lhs, mid]) + mismatches("rcomm", [mid, rhs]))


def is_subalgebra(A: PermAlgebra, vectors) -> bool:
    """Whether the span of the given columns is closed under the product."""
    F = A.field
    vs = [np.asarray(v) for v in vectors]
    if not vs:
        return True
    span = np.stack(vs, axis=1)
    r = rank(F, span)
    for x in vs:
        for y in vs:
            if rank(F, np.concatenate([span, A.mul(x, y)[:, None]], axis=1)) != r:
                return False
    return True


# -- morphisms ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: PermAlgebra
    target: PermAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch(f"matrix {m.shape} for {self.source.dim} -> {self.target.dim}")
        object.__setattr__(self, "matrix", freeze(self.source.field.array(m)))


def morphism_violations(A: PermAlgebra, B: PermAlgebra, m) -> list:
    F = A.field
    m = np.asarray(m)
    lhs = F.einsum("ijk,lk->ijl", A.sc, m)
    rhs = F.einsum("ai,bj,abl->ijl", m, m, B.sc)
    return mismatches("mult", [lhs, rhs])


def check_morphism(f: AlgebraMorphism) -> Verdict:
    if f.source.field != f.target.field:
        raise DimensionMismatch("morphism between algebras over different fields")
    return Verdict.of(morphism_violations(f.source, f.target, f.matrix))


def is_isomorphism(f: AlgebraMorphism) -> bool:
    return (f.source.dim == f.target.dim and check_morphism(f).ok
            and mat_inverse(f.source.field, f.matrix) is not None)


def iter_morphisms(A: PermAlgebra, B: PermAlgebra, injective: bool = True) -> Iterator[np.ndarray]:
    """Every multiplicative linear map A -> B over GF(p), by backtracking.

    Images of basis vectors are fixed one at a time; a basis pair (i, j) is
    checked as soon as every image it involves is known.
    """
    F = A.field
    if not F.is_finite:
        raise UnsupportedField("morphism search needs a finite field")
    n, m = A.dim, B.dim
    ready: dict[int, list] = {t: [] for t in range(n)}
    for i, j in np.ndindex(n, n):
        support = [k for k in range(n) if A.sc[i, j, k] != 0]
        ready[max([i, j] + support)].append((i, j))
    candidates = list(F.vectors(m))

    def extend(cols: list):
        t = len(cols)
        if t == n:
            yield np.stack(cols, axis=1) if n else F.zeros((m, 0))
            return
        for v in candidates:
            trial = cols + [v]
            if injective and rank(F, np.stack(trial, axis=1)) != t + 1:
                continue
            good = True
            for i, j in ready[t]:
                lhs = F.reduce(sum(A.sc[i, j, k] * trial[k] for k in range(t + 1)))
                if not same(lhs, B.mul(trial[i], trial[j])):
                    good = False
                    break
            if good:
                yield from extend(trial)

    yield from extend([])


def _check_search(A: PermAlgebra, max_dim_sq: int) -> None:
    if not A.field.is_finite:
        raise UnsupportedField("isomorphism search is only available over GF(p)")
    if A.dim * A.dim > max_dim_sq:
        raise SearchBoundExceeded(f"dim {A.dim} exceeds the isomorphism search bound")


def find_isomorphism(A: PermAlgebra, B: PermAlgebra, max_dim_sq: int = 9) -> AlgebraMorphism | None:
    if A.field != B.field:
        raise DimensionMismatch("algebras over different fields")
    _check_search(A, max_dim_sq)
    if A.dim != B.dim:
        return None
    for m in iter_morphisms(A, B, injective=True):
        return AlgebraMorphism(A, B, m)
    return None


def automorphisms(A: PermAlgebra, max_dim_sq: int = 9) -> list:
    _check_search(A, max_dim_sq)
    return list(iter_morphisms(A, A, injective=True))


def canonical_form(A: PermAlgebra, gl: Sequence | None = None) -> tuple:
    """Lexicographically smallest structure-constant vector in the GL-orbit."""
    from .kernel import general_linear
    F = A.field
    mats = gl if gl is not None else general_linear(F, A.dim)
    return min(A.transport(g).key() for g in mats)


# -- representations -------------------------------------------------------------

class Representation:
    """Bimodule (V, l, r) as matrices: ``L[i]`` = l(e_i), ``R[i]`` = r(e_i)."""

    __slots__ = ("algebra", "L", "R")

    def __init__(self, algebra: PermAlgebra, L, R):
        F = algebra.field
        L, R = F.array(L) if np.asarray(L).dtype != F.dtype else np.asarray(L), \
            F.array(R) if np.asarray(R).dtype != F.dtype else np.asarray(R)
        n = algebra.dim
        if L.ndim != 3 or L.shape[0] != n or L.shape[1] != L.shape[2] or L.shape != R.shape:
            raise DimensionMismatch(f"action stacks {L.shape}, {R.shape} for dim {n}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "L", freeze(F.reduce(L)))
        object.__setattr__(self, "R", freeze(F.reduce(R)))

    def __setattr__(self, name, value):
        raise AttributeError("Representation is immutable")

    @property
    def dim(self) -> int:
        return self.L.shape[1]

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.algebra == other.algebra
                and same(self.L, other.L) and same(self.R, other.R))

    __hash__ = None


def check_representation(rep: Representation) -> Verdict:
    """R(a1a2) = R(a2)R(a1) = R(a1)R(a2); L(a1a2) = L(a1)L(a2) = L(a1)R(a2) = R(a2)L(a1)."""
    F, sc, L, R = rep.field, rep.algebra.sc, rep.L, rep.R
    Lp = F.einsum("ijk,kab->ijab", sc, L)
    Rp = F.einsum("ijk,kab->ijab", sc, R)
    r21 = F.einsum("jab,ibc->ijac", R, R)
    r12 = F.einsum("iab,jbc->ijac", R, R)
    l11 = F.einsum("iab,jbc->ijac", L, L)
    l1r2 = F.einsum("iab,jbc->ijac", L, R)
    r2l1 = F.einsum("jab,ibc->ijac", R, L)
    return Verdict.of(mismatches("rep_r", [Rp, r21, r12], 2)
                      + mismatches("rep_l", [Lp, l11, l1r2, r2l1], 2))


def semidirect_product(A: PermAlgebra, rep: Representation) -> PermAlgebra:
    """(a1, v1)(a2, v2) = (a1a2, a1v2 + v1a2) on A + V."""
    if rep.algebra != A:
        raise DimensionMismatch("representation of a different algebra")
    F, n, m = A.field, A.dim, rep.dim
    sc = F.zeros((n + m,) * 3)
    sc[:n, :n, :n] = A.sc
    sc[:n, n:, n:] = np.transpose(rep.L, (0, 2, 1))   # e_i v_j = L[i] v_j
    sc[n:, :n, n:] = np.transpose(rep.R, (2, 0, 1))   # v_j e_i = R[i] v_j
    return PermAlgebra(F, sc, A.basis + default_basis(m, "v"))


def regular_representation(A: PermAlgebra) -> Representation:
    return Representation(A, A.left_mats(), A.right_mats())


def dual_representation(rep: Representation) -> Representation:
    """(V*, r* - l*, r*) realised as (R^T - L^T, R^T)."""
    F = rep.field
    Lt = np.transpose(rep.L, (0, 2, 1))
    Rt = np.transpose(rep.R, (0, 2, 1))
    return Representation(rep.algebra, F.sub(Rt, Lt), Rt)


@dataclass(frozen=True, eq=False)
class RepMorphism:
    source: Representation
    target: Representation
    matrix: np.ndarray


def check_rep_morphism(f: RepMorphism) -> Verdict:
    F = f.source.field
    m = np.asarray(f.matrix)
    left = mismatches("intertwine_l", [F.einsum("ab,ibc->iac", m, f.source.L),
                                       F.einsum("iab,bc->iac", f.target.L, m)], 2)
    right = mismatches("intertwine_r", [F.einsum("ab,ibc->iac", m, f.source.R),
                                        F.einsum("iab,bc->iac", f.target.R, m)], 2)
    return Verdict.of(left + right)


# -- algebras from a differential -------------------------------------------

def from_differential(A_comm: PermAlgebra, d) -> PermAlgebra:
    """Perm product a1 . a2 = a1 d(a2) on a commutative associative algebra."""
    F, sc = A_comm.field, A_comm.sc
    d = F.array(d)
    n = A_comm.dim
    if d.shape != (n, n):
        raise DimensionMismatch(f"differential of shape {d.shape}")
    if not same(sc, np.transpose(sc, (1, 0, 2))):
        raise NotCommutativeAssociative("algebra is not commutative")
    if check_perm(A_comm).only("assoc").violations:
        raise NotCommutativeAssociative("algebra is not associative")
    if not same(F.matmul(d, d), F.zeros((n, n))):
        raise NotDifferential("d o d != 0")
    lhs = F.einsum("ijk,lk->ijl", sc, d)
    rhs = F.add(F.einsum("kj,ikl->ijl", d, sc), F.einsum("ki,kjl->ijl", d, sc))
    if not same(lhs, rhs):
        raise NotDifferential("Leibniz rule fails")
    return PermAlgebra(F, F.einsum("lj,ilk->ijk", d, sc), A_comm.basis)


# -- bilinear forms ----------------------------------------------------------------

def check_invariant_form(A: PermAlgebra, gram, symmetric: bool = False, skew: bool = False,
                         nondegenerate: bool = False) -> Verdict:
    """w(a1a2, a3) = w(a2, a3a1) - w(a2, a1a3) on basis triples, plus requested flags."""
    F = A.field
    G = F.array(gram)
    n = A.dim
    if G.shape != (n, n):
        raise DimensionMismatch(f"gram matrix {G.shape} for dim {n}")
    sc = A.sc
    lhs = F.einsum("ija,ak->ijk", sc, G)
    rhs = F.sub(F.einsum("ja,kia->ijk", G, sc), F.einsum("ja,ika->ijk", G, sc))
    found = mismatches("invariant", [lhs, rhs], 0)
    if symmetric:
        found += mismatches("symmetric", [G, G.T], 0)
    if skew:
        found += mismatches("skew", [G, F.neg(G.T)], 0)
    if nondegenerate and rank(F, G) != n:
        found.append(("nondegenerate", ()))
    return Verdict.of(found)


def form_to_rep_morphism(A: PermAlgebra, gram) -> tuple[RepMorphism, Verdict]:
    """phi: A -> A*, <phi(a1), a2> = w(a1, a2); returns phi and its intertwining verdict."""
    pre = check_invariant_form(A, gram, skew=True, nondegenerate=True)
    if not pre.ok:
        raise PreconditionFailed(f"form is not skew, nondegenerate and invariant: {sorted(pre.ids())}")
    reg = regular_representation(A)
    phi = RepMorphism(reg, dual_representation(reg), freeze(A.field.array(gram).T))
    return phi, check_rep_morphism(phi)
