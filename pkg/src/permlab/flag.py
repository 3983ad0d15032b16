"""Flag datums: extending structures of codimension one.

A flag datum (h, g, D, T, a~, k~) of A encodes the extending datum with

    a -> x = h(a) x,   x <- a = g(a) x,   x |> a = D(a),
    a <| x = T(a),     x . x = k~ x,      chi(x, x) = a~.

``h`` and ``g`` are length-n vectors (linear forms), ``D`` and ``T`` act on
columns.  Enumeration works over GF(p) and prunes in stages: (h, g) first,
then D against g, then T, then (a~, k~).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DimensionMismatch, UnsupportedField, ZeroScalingWitness
from .extensions import (EquivalencePair, ExtendingDatum, check_datum_equivalence,
                         equivalence_morphism, unified_product)
from .kernel import (Field, Verdict, batch_agreement, flat_key, freeze, mismatches,
                     require_bound, same)
from .perm_core import PermAlgebra, check_morphism

ES7_MODES = ("corrected", "literal")


class FlagDatum:
    __slots__ = ("A", "h", "g", "D", "T", "a_tilde", "k_tilde")

    def __init__(self, A: PermAlgebra, h, g, D, T, a_tilde, k_tilde):
        F, n = A.field, A.dim
        parts = {"h": (h, (n,)), "g": (g, (n,)), "D": (D, (n, n)), "T": (T, (n, n)),
                 "a_tilde": (a_tilde, (n,))}
        object.__setattr__(self, "A", A)
        for name, (val, shape) in parts.items():
            arr = np.asarray(val)
            arr = F.reduce(arr) if arr.dtype == F.dtype else F.array(arr)
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, freeze(arr))
        object.__setattr__(self, "k_tilde", F(k_tilde))

    def __setattr__(self, name, value):
        raise AttributeError("FlagDatum is immutable")

    @classmethod
    def zero(cls, A: PermAlgebra) -> "FlagDatum":
        F, n = A.field, A.dim
        return cls(A, F.zeros(n), F.zeros(n), F.zeros((n, n)), F.zeros((n, n)), F.zeros(n), 0)

    @property
    def field(self) -> Field:
        return self.A.field

    def key(self) -> tuple:
        return flat_key(self.h, self.g, self.D, self.T, self.a_tilde, [self.k_tilde])

    def __eq__(self, other):
        return (isinstance(other, FlagDatum) and self.A == other.A
                and self.key() == other.key())

    def __hash__(self):
        return hash((self.A, self.key()))

    def __repr__(self):
        F = self.field
        fmt = lambda a: [F.format(x) for x in np.ravel(a)]  # noqa: E731
        return (f"FlagDatum(h={fmt(self.h)}, g={fmt(self.g)}, D={fmt(self.D)}, "
                f"T={fmt(self.T)}, a~={fmt(self.a_tilde)}, k~={F.format(self.k_tilde)})")


def datum_from_flag(fd: FlagDatum) -> ExtendingDatum:
    F, n = fd.field, fd.A.dim
    br, bl = F.zeros((n, 1, 1)), F.zeros((1, n, 1))
    tr, tl = F.zeros((1, n, n)), F.zeros((n, 1, n))
    br[:, 0, 0] = fd.h
    bl[0, :, 0] = fd.g
    tr[0] = fd.D.T
    tl[:, 0, :] = fd.T.T
    chi = F.zeros((1, 1, n))
    chi[0, 0] = fd.a_tilde
    dot = F.zeros((1, 1, 1))
    dot[0, 0, 0] = fd.k_tilde
    return ExtendingDatum(fd.A, 1, ("x",), br=br, bl=bl, tr=tr, tl=tl, chi=chi, dot=dot)


def flag_from_datum(d: ExtendingDatum) -> FlagDatum:
    if d.m != 1:
        raise DimensionMismatch(f"flag datums need dim V = 1, got {d.m}")
    return FlagDatum(d.A, d.br[:, 0, 0], d.bl[0, :, 0], d.tr[0].T, d.tl[:, 0, :].T,
                     d.chi[0, 0], d.dot[0, 0, 0])


def _es_chains(F: Field, c, h, g, D, T, at, k, es7: str, batch: int | None = None) -> list:
    """(name, [expr, ...], value_axes) for es1..es8.

    With ``batch`` set, h, g, D, T, at and k carry one leading batch axis and
    every expression is broadcast to it.
    """
    pre = "" if batch is None else "..."

    def E(spec, *ops):
        ins, out = spec.split("->")
        val = F.einsum(",".join(pre + p if o is not c else p for p, o in zip(ins.split(","), ops))
                       + f"->{pre}{out}", *ops)
        if batch is not None and val.ndim == len(out):
            val = np.broadcast_to(val, (batch,) + val.shape)
        return val

    def kx(arr, extra):   # k~ times arr, k~ broadcast over the trailing axes
        kk = np.asarray(k, dtype=F.dtype)
        return F.reduce(kk.reshape(kk.shape + (1,) * extra) * arr)

    tp = lambda X: np.swapaxes(X, -1, -2)  # noqa: E731
    add = F.add
    zero_h = np.zeros_like(np.asarray(h))
    right_at = E("ixk,x->ik", c, at)     # a_i a~
    left_at = E("xik,x->ik", c, at)      # a~ a_i
    TT, DD = E("ij,jk->ik", T, T), E("ij,jk->ik", D, D)
    DT, TD = E("ij,jk->ik", D, T), E("ij,jk->ik", T, D)
    kg, kh = kx(g, 1), kx(h, 1)
    lead = left_at if es7 == "corrected" else right_at
    return [
        # es1: h(a1a2) = h(a1)h(a2) = h(a1)g(a2); h(T(a)) = 0
        ("es1", [E("ijk,k->ij", c, h), E("i,j->ij", h, h), E("i,j->ij", h, g)], 0),
        ("es1", [E("k,ki->i", h, T), zero_h], 0),
        # es2: g(a1a2) = g(a2a1) = g(a1)g(a2)
        ("es2", [E("ijk,k->ij", c, g), E("jik,k->ij", c, g), E("i,j->ij", g, g)], 0),
        # es3: D(a1a2) = D(a2a1) = D(a1)a2 + g(a1)D(a2)
        ("es3", [E("ijx,kx->ijk", c, D), E("jix,kx->ijk", c, D),
                 add(E("xi,xjk->ijk", D, c), E("i,kj->ijk", g, D))], 1),
        # es4: T(a1a2) = a1T(a2) + T(a1)h(a2) = a1D(a2) + T(a1)g(a2) = T(a1)a2 + h(a1)D(a2)
        ("es4", [E("ijx,kx->ijk", c, T),
                 add(E("xj,ixk->ijk", T, c), E("ki,j->ijk", T, h)),
                 add(E("xj,ixk->ijk", D, c), E("ki,j->ijk", T, g)),
                 add(E("xi,xjk->ijk", T, c), E("i,kj->ijk", h, D))], 1),
        # es5: k~g(a) = k~g(a) + g(D(a)) = k~h(a) + g(T(a)) = k~g(a) + h(D(a))
        ("es5", [kg, add(kg, E("x,xi->i", g, D)), add(kh, E("x,xi->i", g, T)),
                 add(kg, E("x,xi->i", h, D))], 0),
        # es6: a a~ + k~T(a) = T(T(a)) + h(a)a~
        ("es6", [add(right_at, kx(tp(T), 2)), add(tp(TT), E("i,k->ik", h, at))], 1),
        # es7: x-side product a~ a (the literal reading multiplies a a~)
        ("es7", [add(lead, kx(tp(D), 2)),
                 add(tp(DD), E("i,k->ik", g, at)),
                 add(tp(DT), E("i,k->ik", h, at)),
                 add(tp(TD), E("i,k->ik", g, at))], 1),
        # es8: g(a~) = h(a~), T(a~) = D(a~)
        ("es8", [E("x,x->", g, at), E("x,x->", h, at)], 0),
        ("es8", [E("ij,j->i", T, at), E("ij,j->i", D, at)], 1),
    ]


def es_violations(fd: FlagDatum, es7: str = "corrected") -> list:
    if es7 not in ES7_MODES:
        raise ValueError(f"unknown es7 mode {es7!r}")
    chains = _es_chains(fd.field, fd.A.sc, fd.h, fd.g, fd.D, fd.T, fd.a_tilde, fd.k_tilde, es7)
    return [v for name, exprs, axes in chains for v in mismatches(name, exprs, axes)]


def flag_ok_batch(A: PermAlgebra, h, g, D, T, a_tilde, k_tilde, es7: str = "corrected") -> np.ndarray:
    """Vectorized ``validate_flag_datum(...).ok`` over stacked datums (GF(p) only)."""
    if es7 not in ES7_MODES:
        raise ValueError(f"unknown es7 mode {es7!r}")
    F = A.field
    if not F.is_finite:
        raise UnsupportedField("batched flag validation needs GF(p)")
    arrs = [F.reduce(np.asarray(x, dtype=np.int64)) for x in (h, g, D, T, a_tilde, k_tilde)]
    N = arrs[0].shape[0]
    chains = _es_chains(F, A.sc, *arrs, es7=es7, batch=N)
    from .perm_core import check_perm
    return batch_agreement([(name, exprs) for name, exprs, _ in chains], N) & check_perm(A).ok


def flag_stack(fds) -> tuple:
    """Stack flag datums into (h, g, D, T, a_tilde, k_tilde) arrays."""
    fds = list(fds)
    return (np.stack([fd.h for fd in fds]), np.stack([fd.g for fd in fds]),
            np.stack([fd.D for fd in fds]), np.stack([fd.T for fd in fds]),
            np.stack([fd.a_tilde for fd in fds]), np.array([fd.k_tilde for fd in fds]))


def validate_flag_datum(fd: FlagDatum, es7: str = "corrected") -> Verdict:
    own = [("perm", idx) for _, idx in _perm_violations(fd.A)]
    return Verdict.of(es_violations(fd, es7) + own)


def _perm_violations(A: PermAlgebra):
    from .perm_core import check_perm
    return check_perm(A).violations


# -- equivalence --------------------------------------------------------------

def fq_violations(fd: FlagDatum, fd2: FlagDatum, a_vec, l) -> list:
    F, c = fd.field, fd.A.sc
    a_vec = F.array(a_vec) if np.asarray(a_vec).dtype != F.dtype else np.asarray(a_vec)
    l = F(l)
    E = F.einsum
    found = []
    if not same(fd.h, fd2.h):
        found.append(("h", ()))
    if not same(fd.g, fd2.g):
        found.append(("g", ()))
    av_a = E("x,xik->ik", a_vec, c)      # a_vec a_i
    a_av = E("ixk,x->ik", c, a_vec)      # a_i a_vec
    # fq1: D(a) = a_vec a + l D'(a) - g(a) a_vec
    found += mismatches("fq1", [fd.D.T, F.sub(F.add(av_a, F.scale(l, fd2.D.T)),
                                              E("i,k->ik", fd.g, a_vec))])
    # fq2: T(a) = a a_vec + l T'(a) - h(a) a_vec
    found += mismatches("fq2", [fd.T.T, F.sub(F.add(a_av, F.scale(l, fd2.T.T)),
                                              E("i,k->ik", fd.h, a_vec))])
    # fq3: a~ = a_vec^2 + l D'(a_vec) + l T'(a_vec) + l^2 a~' - k~ a_vec
    rhs3 = F.add(E("x,y,xyk->k", a_vec, a_vec, c),
                 F.scale(l, F.matmul(fd2.D, a_vec)), F.scale(l, F.matmul(fd2.T, a_vec)),
                 F.scale(l * l, fd2.a_tilde))
    found += mismatches("fq3", [fd.a_tilde[None], F.sub(rhs3, F.scale(fd.k_tilde, a_vec))[None]])
    # fq4: k~ = l k~' + h'(a_vec) + g'(a_vec)
    rhs4 = F.reduce(np.array([l * fd2.k_tilde + E("x,x->", fd2.h, a_vec)
                              + E("x,x->", fd2.g, a_vec)], dtype=object))
    found += mismatches("fq4", [np.array([fd.k_tilde], dtype=object), rhs4], 0)
    return found


def flag_equivalent(fd: FlagDatum, fd2: FlagDatum, a_vec, l) -> Verdict:
    F = fd.field
    if F(l) == 0:
        raise ZeroScalingWitness("the scaling witness l must be nonzero")
    if fd.A != fd2.A:
        raise DimensionMismatch("flag datums over different algebras")
    return Verdict.of(fq_violations(fd, fd2, a_vec, l))


def witness_pair(fd: FlagDatum, a_vec, l) -> EquivalencePair:
    """The (lambda, rho) pair with lambda(x) = a_vec, rho(x) = l x."""
    F = fd.field
    a_vec = F.array(a_vec) if np.asarray(a_vec).dtype != F.dtype else np.asarray(a_vec)
    rho = F.zeros((1, 1))
    rho[0, 0] = F(l)
    return EquivalencePair(a_vec.reshape(-1, 1), rho)


def transport_flag(fd2: FlagDatum, a_vec, l) -> FlagDatum:
    """The unique datum fd with fd ~ fd2 through the witness (a_vec, l)."""
    F, c = fd2.field, fd2.A.sc
    a_vec = F.array(a_vec) if np.asarray(a_vec).dtype != F.dtype else np.asarray(a_vec)
    l = F(l)
    E = F.einsum
    h, g = fd2.h, fd2.g
    D = F.sub(F.add(E("x,xik->ki", a_vec, c), F.scale(l, fd2.D)), E("i,k->ki", g, a_vec))
    T = F.sub(F.add(E("ixk,x->ki", c, a_vec), F.scale(l, fd2.T)), E("i,k->ki", h, a_vec))
    k = F(F.reduce(np.array([l * fd2.k_tilde + E("x,x->", h, a_vec) + E("x,x->", g, a_vec)],
                            dtype=object))[0])
    at = F.add(E("x,y,xyk->k", a_vec, a_vec, c), F.scale(l, F.matmul(fd2.D, a_vec)),
               F.scale(l, F.matmul(fd2.T, a_vec)), F.scale(l * l, fd2.a_tilde))
    at = F.sub(at, F.scale(k, a_vec))
    return FlagDatum(fd2.A, h, g, D, T, at, k)


def stabilizing_isomorphism_verdict(fd: FlagDatum, fd2: FlagDatum, a_vec, l) -> Verdict:
    """Equivalence through the extending-structure route plus the morphism check."""
    d, d2 = datum_from_flag(fd), datum_from_flag(fd2)
    pair = witness_pair(fd, a_vec, l)
    return check_datum_equivalence(d, d2, pair) + check_morphism(equivalence_morphism(d, d2, pair))


# -- enumeration ----------------------------------------------------------------

@dataclass(frozen=True)
class FlagEnumeration:
    datums: tuple        # all valid flag datums, sorted by key
    classes: tuple       # tuples of datums; the first entry is the representative
    algebras: tuple      # unified product of each representative

    @property
    def representatives(self) -> tuple:
        return tuple(cls[0] for cls in self.classes)


def _forms(F: Field, n: int) -> list:
    return list(F.tensors((n,)))


def iter_flag_datums(A: PermAlgebra, es7: str = "corrected", bound: int | None = None) -> Iterator[FlagDatum]:
    """Every valid flag datum of A over GF(p), staged by the cheap constraints first."""
    F = A.field
    if not F.is_finite:
        raise UnsupportedField("flag enumeration needs GF(p)")
    n = A.dim
    require_bound(F.p ** (2 * n * n + 3 * n + 1), "flag datum sweep", bound)
    c = A.sc
    E = F.einsum
    zero_n = F.zeros(n)
    forms = _forms(F, n)
    mats = [m for m in F.tensors((n, n))]
    stage = lambda fd, ids: not any(v[0] in ids for v in es_violations(fd, es7))  # noqa: E731
    for g in forms:
        if mismatches("es2", [E("ijk,k->ij", c, g), E("jik,k->ij", c, g), E("i,j->ij", g, g)], 0):
            continue
        for h in forms:
            if mismatches("es1", [E("ijk,k->ij", c, h), E("i,j->ij", h, h), E("i,j->ij", h, g)], 0):
                continue
            Ds = [D for D in mats
                  if not mismatches("es3", [E("ijx,kx->ijk", c, D), E("jix,kx->ijk", c, D),
                                            F.add(E("xi,xjk->ijk", D, c), E("i,kj->ijk", g, D))])]
            for D in Ds:
                for T in mats:
                    base = FlagDatum(A, h, g, D, T, zero_n, 0)
                    if not stage(base, {"es1", "es4"}):
                        continue
                    for k in F.elements():
                        for at in forms:
                            fd = FlagDatum(A, h, g, D, T, at, k)
                            if not es_violations(fd, es7):
                                yield fd


def enumerate_flag_extensions(A: PermAlgebra, es7: str = "corrected",
                              bound: int | None = None) -> FlagEnumeration:
    F = A.field
    datums = sorted(iter_flag_datums(A, es7, bound), key=FlagDatum.key)
    index = {fd.key(): fd for fd in datums}
    seen: set = set()
    classes = []
    witnesses = [(a, l) for a in _forms(F, A.dim) for l in F.units()]
    for fd in datums:
        if fd.key() in seen:
            continue
        orbit = {fd.key()}
        for a, l in witnesses:
            orbit.add(transport_flag(fd, a, l).key())
        members = tuple(index[k] for k in sorted(orbit) if k in index)
        seen.update(orbit)
        classes.append(members)
    algebras = tuple(unified_product(datum_from_flag(cls[0]), checked=False) for cls in classes)
    return FlagEnumeration(tuple(datums), tuple(classes), algebras)


def flag_datum_space(A: PermAlgebra) -> Iterator[FlagDatum]:
    """Every candidate (valid or not) of A over GF(p); used by agreement tests."""
    F, n = A.field, A.dim
    for h, g, at in itertools.product(_forms(F, n), repeat=3):
        for D in F.tensors((n, n)):
            for T in F.tensors((n, n)):
                for k in F.elements():
                    yield FlagDatum(A, h, g, D, T, at, k)
