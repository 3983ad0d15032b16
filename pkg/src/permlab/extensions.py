"""Extending data, unified and bicrossed products, deformation maps.

A unified product lives on A + V with basis ``A.basis`` followed by the m
basis vectors of V; index ``n + t`` is the t-th vector of V.

Tensor slots of an :class:`ExtendingDatum` (n = dim A, m = dim V):

=====  ========  ==============
name   shape     map
=====  ========  ==============
br     (n,m,m)   a -> v in V
bl     (m,n,m)   v <- a in V
tr     (m,n,n)   v |> a in A
tl     (n,m,n)   a <| v in A
chi    (m,m,n)   chi(v, w) in A
dot    (m,m,m)   v . w in V
=====  ========  ==============
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import (BadProjection, DimensionMismatch, InvalidDatum,
                     InvalidDeformationMap, NotSubalgebra, RhoNotInvertible,
                     SearchBoundExceeded, UnsupportedField)
from .kernel import (Field, Verdict, batch_agreement, flat_key, freeze, general_linear,
                     mat_inverse, mismatches, rank, require_bound, same)
from .perm_core import (AlgebraMorphism, PermAlgebra, check_morphism,
                        check_perm, default_basis, find_isomorphism,
                        morphism_violations)

SLOTS = ("br", "bl", "tr", "tl", "chi", "dot")


def _shapes(n: int, m: int) -> dict:
    return {"br": (n, m, m), "bl": (m, n, m), "tr": (m, n, n),
            "tl": (n, m, n), "chi": (m, m, n), "dot": (m, m, m)}


class ExtendingDatum:
    """The six bilinear maps of an extending datum of A by an m-dim space."""

    __slots__ = ("A", "m", "v_basis") + SLOTS

    def __init__(self, A: PermAlgebra, m: int, v_basis: Sequence[str] | None = None, **maps):
        F = A.field
        shapes = _shapes(A.dim, m)
        unknown = set(maps) - set(SLOTS)
        if unknown:
            raise TypeError(f"unknown datum maps {sorted(unknown)}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "v_basis", _v_labels(A.basis, m) if v_basis is None else tuple(v_basis))
        if len(self.v_basis) != m:
            raise DimensionMismatch(f"{len(self.v_basis)} labels for dim V = {m}")
        for name in SLOTS:
            t = maps.get(name)
            t = F.zeros(shapes[name]) if t is None else F.reduce(
                t if np.asarray(t).dtype == F.dtype else F.array(t))
            if t.shape != shapes[name]:
                raise DimensionMismatch(f"{name} has shape {t.shape}, expected {shapes[name]}")
            object.__setattr__(self, name, freeze(t))

    def __setattr__(self, name, value):
        raise AttributeError("ExtendingDatum is immutable")

    @classmethod
    def zero(cls, A: PermAlgebra, m: int) -> "ExtendingDatum":
        return cls(A, m)

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.dim

    def maps(self) -> dict:
        return {name: getattr(self, name) for name in SLOTS}

    def replace(self, **maps) -> "ExtendingDatum":
        return ExtendingDatum(self.A, self.m, self.v_basis, **{**self.maps(), **maps})

    def key(self) -> tuple:
        return flat_key(*(getattr(self, s) for s in SLOTS))

    def __eq__(self, other):
        return (isinstance(other, ExtendingDatum) and self.A == other.A and self.m == other.m
                and all(same(getattr(self, s), getattr(other, s)) for s in SLOTS))

    __hash__ = None

    def __repr__(self):
        return f"ExtendingDatum(n={self.n}, m={self.m})"


def _sum(F: Field, out: str, terms, batch: int | None = None) -> np.ndarray:
    """Sum of einsum terms (spec, *ops) sharing one output signature.

    With ``batch`` set, operands may carry one leading batch axis and the
    result always does.
    """
    pre = "" if batch is None else "..."
    total = None
    for spec, *ops in terms:
        ins = ",".join(pre + part for part in spec.split(","))
        val = F.einsum(f"{ins}->{pre}{out}", *ops, raw=True)
        total = val if total is None else total + val
    total = F.reduce(total)
    if batch is not None and total.ndim == len(out):
        total = np.broadcast_to(total, (batch,) + total.shape)
    return total


def _ext_chains(F: Field, c, br, bl, tr, tl, chi, dot, batch: int | None = None) -> list:
    """(name, [expr, ...]) for the ten mixed identity families.

    Index letters: i, j range over A; u, v, w over V; x, y are internal A and
    V indices; k is the output coordinate.
    """
    S = lambda out, *terms: _sum(F, out, terms, batch)  # noqa: E731
    return [
        # (v <- a1) <- a2 = v <- a1a2 = v <- a2a1
        ("ext1", [S("vijk", ("viy,yjk", bl, bl)),
                  S("vijk", ("ijx,vxk", c, bl)),
                  S("vijk", ("jix,vxk", c, bl))]),
        # a1a2 -> v = a1 -> (a2 -> v) = a1 -> (v <- a2) = (a1 -> v) <- a2
        ("ext2", [S("ijvk", ("ijx,xvk", c, br)),
                  S("ijvk", ("jvy,iyk", br, br)),
                  S("ijvk", ("vjy,iyk", bl, br)),
                  S("ijvk", ("ivy,yjk", br, bl))]),
        # v |> a1a2 = v |> a2a1 = (v |> a1)a2 + (v <- a1) |> a2
        ("ext3", [S("vijk", ("ijx,vxk", c, tr)),
                  S("vijk", ("jix,vxk", c, tr)),
                  S("vijk", ("vix,xjk", tr, c), ("viy,yjk", bl, tr))]),
        # a1a2 <| v = a1(a2 <| v) + a1 <| (a2 -> v), and the two right-commuted forms
        ("ext4", [S("ijvk", ("ijx,xvk", c, tl)),
                  S("ijvk", ("jvx,ixk", tl, c), ("jvy,iyk", br, tl)),
                  S("ijvk", ("vjx,ixk", tr, c), ("vjy,iyk", bl, tl)),
                  S("ijvk", ("ivx,xjk", tl, c), ("ivy,yjk", br, tr))]),
        ("ext5", [S("iuvk", ("uvy,iyk", dot, br)),
                  S("iuvk", ("vuy,iyk", dot, br)),
                  S("iuvk", ("iuy,yvk", br, dot), ("iux,xvk", tl, br))]),
        ("ext6", [S("uvik", ("uvy,yik", dot, bl)),
                  S("uvik", ("viy,uyk", bl, dot), ("vix,uxk", tr, bl)),
                  S("uvik", ("ivy,uyk", br, dot), ("ivx,uxk", tl, bl)),
                  S("uvik", ("uiy,yvk", bl, dot), ("uix,xvk", tr, br))]),
        ("ext7", [S("iuvk", ("uvx,ixk", chi, c), ("uvy,iyk", dot, tl)),
                  S("iuvk", ("vux,ixk", chi, c), ("vuy,iyk", dot, tl)),
                  S("iuvk", ("iux,xvk", tl, tl), ("iuy,yvk", br, chi))]),
        ("ext8", [S("uvik", ("uvx,xik", chi, c), ("uvy,yik", dot, tr)),
                  S("uvik", ("vix,uxk", tr, tr), ("viy,uyk", bl, chi)),
                  S("uvik", ("ivx,uxk", tl, tr), ("ivy,uyk", br, chi)),
                  S("uvik", ("uix,xvk", tr, tl), ("uiy,yvk", bl, chi))]),
        # V-components and A-components of the purely V triples
        ("ext9", [S("uvwk", ("uvy,ywk", dot, dot), ("uvx,xwk", chi, br)),
                  S("uvwk", ("vwy,uyk", dot, dot), ("vwx,uxk", chi, bl)),
                  S("uvwk", ("wvy,uyk", dot, dot), ("wvx,uxk", chi, bl))]),
        ("ext10", [S("uvwk", ("uvx,xwk", chi, tl), ("uvy,ywk", dot, chi)),
                   S("uvwk", ("vwx,uxk", chi, tr), ("vwy,uyk", dot, chi)),
                   S("uvwk", ("wvx,uxk", chi, tr), ("wvy,uyk", dot, chi))]),
    ]


def ext_violations(d: ExtendingDatum) -> list:
    """Violations of the ten mixed identity families, indexed by basis tuples."""
    chains = _ext_chains(d.field, d.A.sc, d.br, d.bl, d.tr, d.tl, d.chi, d.dot)
    return [v for name, exprs in chains for v in mismatches(name, exprs)]


def extending_ok_batch(A: PermAlgebra, m: int, **slots) -> np.ndarray:
    """Vectorized ``validate_extending_structure(...).ok`` over a stack of datums.

    Each slot array carries one leading batch axis; missing slots are zero.
    """
    F, n = A.field, A.dim
    sizes = {np.asarray(a).shape[0] for a in slots.values()}
    if len(sizes) != 1:
        raise DimensionMismatch("slot stacks of different lengths")
    N = sizes.pop()
    shapes = _shapes(n, m)
    full = {}
    for name in SLOTS:
        arr = _as(F, slots[name]) if name in slots else F.zeros((N,) + shapes[name])
        if arr.shape != (N,) + shapes[name]:
            raise DimensionMismatch(f"{name} stack of shape {arr.shape}")
        full[name] = arr
    ok = batch_agreement(_ext_chains(F, A.sc, *(full[s] for s in SLOTS), batch=N), N)
    return ok & check_perm(A).ok


def validate_extending_structure(d: ExtendingDatum) -> Verdict:
    """ext1..ext10, plus ``perm`` entries when A itself is not perm."""
    own = [("perm", idx) for _, idx in check_perm(d.A).violations]
    return Verdict.of(ext_violations(d) + own)


def unified_product(d: ExtendingDatum, checked: bool = True) -> PermAlgebra:
    """The product on A + V; ``checked=False`` skips validation (oracle use)."""
    if checked:
        verdict = validate_extending_structure(d)
        if not verdict.ok:
            raise InvalidDatum(f"not an extending structure: {verdict.violations[:5]}")
    F, n, m = d.field, d.n, d.m
    E = F.zeros((n + m,) * 3)
    E[:n, :n, :n] = d.A.sc
    E[:n, n:, :n] = d.tl
    E[:n, n:, n:] = d.br
    E[n:, :n, :n] = d.tr
    E[n:, :n, n:] = d.bl
    E[n:, n:, :n] = d.chi
    E[n:, n:, n:] = d.dot
    return PermAlgebra(F, E, d.A.basis + d.v_basis)


def _v_labels(taken: Sequence[str], m: int) -> tuple:
    if m == 1 and "x" not in taken:
        return ("x",)
    return default_basis(m, "v")


def _canonical_projection(F: Field, n: int, N: int) -> np.ndarray:
    pi = F.zeros((n, N))
    for i in range(n):
        pi[i, i] = F.one
    return pi


def complement_basis(E: PermAlgebra, A_idx: Sequence[int], projection) -> np.ndarray:
    """Columns: e_a for a in A_idx, then v_t = e_t - pi(e_t) for the other t.

    This is the matrix of (a, v) -> a + v from the unified product back to E.
    """
    F = E.field
    A_idx = list(A_idx)
    rest = [t for t in range(E.dim) if t not in A_idx]
    pi = np.asarray(projection)
    cols = [E.unit(a) for a in A_idx]
    for t in rest:
        v = E.unit(t)
        v[A_idx] = v[A_idx] - pi[:, t]
        cols.append(F.reduce(v))
    return np.stack(cols, axis=1) if cols else F.zeros((0, 0))


def subalgebra_on(E: PermAlgebra, idx: Sequence[int]) -> PermAlgebra:
    """Restriction of E to the span of the given basis vectors."""
    idx = list(idx)
    rest = [t for t in range(E.dim) if t not in idx]
    if rest and idx and any(E.sc[np.ix_(idx, idx, rest)].ravel() != 0):
        raise NotSubalgebra("span of the chosen basis vectors is not closed")
    return PermAlgebra(E.field, E.sc[np.ix_(idx, idx, idx)], [E.basis[i] for i in idx])


def decompose_extension(E: PermAlgebra, A_idx: Sequence[int], projection=None) -> ExtendingDatum:
    """Read off the datum of E relative to A = span(A_idx) and V = ker(pi)."""
    F = E.field
    A_idx = list(A_idx)
    n, N = len(A_idx), E.dim
    if len(set(A_idx)) != n or any(not 0 <= a < N for a in A_idx):
        raise DimensionMismatch(f"bad index subset {A_idx}")
    rest = [t for t in range(N) if t not in A_idx]
    m = len(rest)
    if projection is None:
        projection = F.zeros((n, N))
        for i, a in enumerate(A_idx):
            projection[i, a] = F.one
    pi = F.array(projection) if np.asarray(projection).dtype != F.dtype else np.asarray(projection)
    if pi.shape != (n, N):
        raise DimensionMismatch(f"projection of shape {pi.shape}, expected {(n, N)}")
    if not same(pi[:, A_idx], F.eye(n)):
        raise BadProjection("projection does not restrict to the identity on A")
    A = subalgebra_on(E, A_idx)
    basis = complement_basis(E, A_idx, pi)
    binv = mat_inverse(F, basis)
    # structure constants of E in the (A, V) basis
    sc = F.einsum("ai,bj,abc,kc->ijk", basis, basis, E.sc, binv)
    labels = [E.basis[t] for t in rest]
    return ExtendingDatum(A, m, labels, tl=sc[:n, n:, :n], br=sc[:n, n:, n:], tr=sc[n:, :n, :n],
                          bl=sc[n:, :n, n:], chi=sc[n:, n:, :n], dot=sc[n:, n:, n:])


# -- equivalence of extending structures -----------------------------------

@dataclass(frozen=True, eq=False)
class EquivalencePair:
    lam: np.ndarray   # (n, m): V -> A
    rho: np.ndarray   # (m, m): V -> V


def equivalence_map(d: ExtendingDatum, pair: EquivalencePair) -> np.ndarray:
    """Block matrix of (a, v) -> (a + lam(v), rho(v))."""
    F, n, m = d.field, d.n, d.m
    M = F.zeros((n + m, n + m))
    M[:n, :n] = F.eye(n)
    M[:n, n:] = pair.lam
    M[n:, n:] = pair.rho
    return M


def uc_violations(d: ExtendingDatum, d2: ExtendingDatum, lam, rho) -> list:
    F, c = d.field, d.A.sc
    S = lambda out, *terms: _sum(F, out, terms)  # noqa: E731
    found = []
    found += mismatches("uc1", [S("ivk", ("ivy,ky", d.br, rho)), S("ivk", ("yv,iyk", rho, d2.br))])
    found += mismatches("uc1", [S("ivk", ("ivk", d.tl), ("ivy,ky", d.br, lam)),
                                S("ivk", ("xv,ixk", lam, c), ("yv,iyk", rho, d2.tl))])
    found += mismatches("uc2", [S("vik", ("viy,ky", d.bl, rho)), S("vik", ("yv,yik", rho, d2.bl))])
    found += mismatches("uc2", [S("vik", ("vik", d.tr), ("viy,ky", d.bl, lam)),
                                S("vik", ("xv,xik", lam, c), ("yv,yik", rho, d2.tr))])
    found += mismatches("uc3", [S("uvk", ("uvy,ky", d.dot, rho)),
                                S("uvk", ("yu,zv,yzk", rho, rho, d2.dot),
                                  ("xu,yv,xyk", lam, rho, d2.br),
                                  ("yu,xv,yxk", rho, lam, d2.bl))])
    found += mismatches("uc4", [S("uvk", ("uvk", d.chi), ("uvy,ky", d.dot, lam)),
                                S("uvk", ("xu,yv,xyk", lam, lam, c),
                                  ("yu,xv,yxk", rho, lam, d2.tr),
                                  ("xu,yv,xyk", lam, rho, d2.tl),
                                  ("yu,zv,yzk", rho, rho, d2.chi))])
    return found


def check_datum_equivalence(d: ExtendingDatum, d2: ExtendingDatum, pair: EquivalencePair,
                            mode: str = "equivalent") -> Verdict:
    """(uc1)-(uc4) for the pair, with the map (a, v) -> (a + lam v, rho v) from d to d2."""
    if d.A != d2.A or d.m != d2.m:
        raise DimensionMismatch("datums over different algebras or spaces")
    F, n, m = d.field, d.n, d.m
    lam = F.reduce(F.array(pair.lam)) if np.asarray(pair.lam).dtype != F.dtype else np.asarray(pair.lam)
    rho = F.reduce(F.array(pair.rho)) if np.asarray(pair.rho).dtype != F.dtype else np.asarray(pair.rho)
    if lam.shape != (n, m) or rho.shape != (m, m):
        raise DimensionMismatch(f"lambda {lam.shape}, rho {rho.shape} for n={n}, m={m}")
    if mode == "cohomologous":
        if not same(rho, F.eye(m)):
            raise RhoNotInvertible("cohomologous mode needs rho = id")
    elif mode != "equivalent":
        raise ValueError(f"unknown mode {mode!r}")
    if mat_inverse(F, rho) is None:
        raise RhoNotInvertible("rho is singular")
    return Verdict.of(uc_violations(d, d2, lam, rho))


def equivalence_morphism(d: ExtendingDatum, d2: ExtendingDatum, pair: EquivalencePair) -> AlgebraMorphism:
    return AlgebraMorphism(unified_product(d, checked=False), unified_product(d2, checked=False),
                           equivalence_map(d, pair))


# -- matched pairs ------------------------------------------------------------

class MatchedPair:
    """Perm algebras A, V with the four actions; chi is zero."""

    __slots__ = ("A", "V", "br", "bl", "tr", "tl")

    def __init__(self, A: PermAlgebra, V: PermAlgebra, br=None, bl=None, tr=None, tl=None):
        if A.field != V.field:
            raise DimensionMismatch("matched pair over different fields")
        d = ExtendingDatum(A, V.dim, V.basis, br=br, bl=bl, tr=tr, tl=tl, dot=V.sc)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "V", V)
        for name in ("br", "bl", "tr", "tl"):
            object.__setattr__(self, name, getattr(d, name))

    def __setattr__(self, name, value):
        raise AttributeError("MatchedPair is immutable")

    @property
    def field(self) -> Field:
        return self.A.field

    def datum(self) -> ExtendingDatum:
        return ExtendingDatum(self.A, self.V.dim, self.V.basis, br=self.br, bl=self.bl,
                              tr=self.tr, tl=self.tl, dot=self.V.sc)

    @classmethod
    def from_extension(cls, E: PermAlgebra, A_idx: Sequence[int], projection=None) -> "MatchedPair":
        d = decompose_extension(E, A_idx, projection)
        if any(d.chi.ravel() != 0):
            raise NotSubalgebra("kernel of the projection is not a subalgebra")
        return cls(d.A, PermAlgebra(d.field, d.dot, d.v_basis), d.br, d.bl, d.tr, d.tl)


def validate_matched_pair(mp: MatchedPair) -> Verdict:
    own = [("perm_v", idx) for _, idx in check_perm(mp.V).violations]
    return validate_extending_structure(mp.datum()) + Verdict.of(own)


def bicrossed_product(mp: MatchedPair, checked: bool = True) -> PermAlgebra:
    if checked:
        verdict = validate_matched_pair(mp)
        if not verdict.ok:
            raise InvalidDatum(f"not a matched pair: {verdict.violations[:5]}")
    return unified_product(mp.datum(), checked=False)


def check_factorization(E: PermAlgebra, n: int) -> bool:
    """E = span(e_0..e_{n-1}) + span(rest), both subalgebras meeting in 0."""
    F = E.field
    first = [E.unit(i) for i in range(n)]
    second = [E.unit(i) for i in range(n, E.dim)]
    from .perm_core import is_subalgebra
    full = np.stack(first + second, axis=1) if E.dim else F.zeros((0, 0))
    return is_subalgebra(E, first) and is_subalgebra(E, second) and rank(F, full) == E.dim


# -- deformation maps --------------------------------------------------------

def _as(F: Field, arr) -> np.ndarray:
    arr = np.asarray(arr)
    return F.reduce(arr) if arr.dtype == F.dtype else F.array(arr)


def is_deformation_map(mp: MatchedPair, psi) -> Verdict:
    """psi(v1 v2) - psi(v1)psi(v2) = v1|>psi(v2) + psi(v1)<|v2 - psi(psi(v1)->v2) - psi(v1<-psi(v2))."""
    F = mp.field
    psi = _as(F, psi)
    n, m = mp.A.dim, mp.V.dim
    if psi.shape != (n, m):
        raise DimensionMismatch(f"psi of shape {psi.shape}, expected {(n, m)}")
    lhs = F.sub(F.einsum("uvy,ky->uvk", mp.V.sc, psi),
                F.einsum("xu,yv,xyk->uvk", psi, psi, mp.A.sc))
    rhs = _sum(F, "uvk", [("xv,uxk", psi, mp.tr), ("xu,xvk", psi, mp.tl)])
    rhs = F.sub(rhs, _sum(F, "uvk", [("xu,xvy,ky", psi, mp.br, psi),
                                     ("xv,uxy,ky", psi, mp.bl, psi)]))
    return Verdict.of(mismatches("deformation", [lhs, rhs]))


def deformed_product(mp: MatchedPair, psi) -> np.ndarray:
    F = mp.field
    psi = _as(F, psi)
    return _sum(F, "uvk", [("uvk", mp.V.sc), ("xu,xvk", psi, mp.br), ("xv,uxk", psi, mp.bl)])


def deform_complement(mp: MatchedPair, psi, checked: bool = True) -> PermAlgebra:
    """V with v1 ._psi v2 = v1 v2 + psi(v1) -> v2 + v1 <- psi(v2)."""
    if checked:
        verdict = is_deformation_map(mp, psi)
        if not verdict.ok:
            raise InvalidDeformationMap(f"not a deformation map: {verdict.violations}")
    return PermAlgebra(mp.field, deformed_product(mp, psi), mp.V.basis)


def graph_embedding(mp: MatchedPair, psi) -> np.ndarray:
    """Columns (psi(v_t), v_t): the image of V_psi inside the bicrossed product."""
    F = mp.field
    return np.concatenate([_as(F, psi), F.eye(mp.V.dim)], axis=0)


def deformation_equivalence_violations(mp: MatchedPair, psi, phi, rho, mode: str = "corrected") -> list:
    F = mp.field
    psi, phi, rho = _as(F, psi), _as(F, phi), _as(F, rho)
    last = {"corrected": psi, "literal": phi}.get(mode)
    if last is None:
        raise ValueError(f"unknown mode {mode!r}")
    dot = mp.V.sc
    lhs = F.sub(F.einsum("uvy,ky->uvk", dot, rho), F.einsum("yu,zv,yzk->uvk", rho, rho, dot))
    pr = F.matmul(phi, rho)   # phi o rho
    rhs = _sum(F, "uvk", [("xu,zv,xzk", pr, rho, mp.br), ("zu,xv,zxk", rho, pr, mp.bl)])
    rhs = F.sub(rhs, _sum(F, "uvk", [("xu,xvy,ky", psi, mp.br, rho),
                                     ("xv,uxy,ky", last, mp.bl, rho)]))
    return mismatches("equivalence", [lhs, rhs])


def deformation_equivalent(mp: MatchedPair, psi, phi, rho, mode: str = "corrected") -> Verdict:
    F = mp.field
    rho = _as(F, rho)
    if rho.shape != (mp.V.dim, mp.V.dim):
        raise DimensionMismatch(f"rho of shape {rho.shape}")
    if mat_inverse(F, rho) is None:
        raise RhoNotInvertible("rho is singular")
    return Verdict.of(deformation_equivalence_violations(mp, psi, phi, rho, mode))


def complement_isomorphism(mp: MatchedPair, psi, phi, rho) -> Verdict:
    """Whether rho is a morphism V_psi -> V_phi (cross-check for equivalence)."""
    F = mp.field
    Vpsi = deform_complement(mp, psi, checked=False)
    Vphi = deform_complement(mp, phi, checked=False)
    return Verdict.of(morphism_violations(Vpsi, Vphi, _as(F, rho)))


@dataclass(frozen=True)
class ComplementClasses:
    deformation_maps: tuple          # every valid psi, sorted
    classes: tuple                   # tuples of psi keys, each starting with its representative
    representatives: tuple = dc_field(default=())

    @property
    def index(self) -> int:
        return len(self.classes)


def deformation_maps(mp: MatchedPair, bound: int | None = None) -> list:
    F = mp.field
    if not F.is_finite:
        raise UnsupportedField("deformation-map sweep needs GF(p)")
    n, m = mp.A.dim, mp.V.dim
    require_bound(F.p ** (n * m), "deformation-map sweep", bound)
    return [psi for psi in F.tensors((n, m)) if is_deformation_map(mp, psi).ok]


def classify_complements(mp: MatchedPair, max_dim_v: int = 2, mode: str = "corrected") -> ComplementClasses:
    """Valid psi up to the equivalence relation; representatives are lex smallest."""
    F = mp.field
    if not F.is_finite:
        raise UnsupportedField("complement classification needs GF(p)")
    if mp.V.dim > max_dim_v:
        raise SearchBoundExceeded(f"dim V = {mp.V.dim} exceeds {max_dim_v}")
    maps = sorted(deformation_maps(mp), key=flat_key)
    gl = list(general_linear(F, mp.V.dim))
    classes: list[list] = []
    for psi in maps:
        for cls in classes:
            rep = cls[0]
            if any(not deformation_equivalence_violations(mp, rep, psi, g, mode) for g in gl):
                cls.append(psi)
                break
        else:
            classes.append([psi])
    return ComplementClasses(tuple(flat_key(p) for p in maps),
                             tuple(tuple(flat_key(p) for p in cls) for cls in classes),
                             tuple(cls[0] for cls in classes))


def complement_iso_classes(mp: MatchedPair) -> int:
    """Number of isomorphism classes among the V_psi (independent count)."""
    algs = [deform_complement(mp, psi, checked=False) for psi in deformation_maps(mp)]
    reps: list[PermAlgebra] = []
    for V in algs:
        if not any(find_isomorphism(V, R) is not None for R in reps):
            reps.append(V)
    return len(reps)
