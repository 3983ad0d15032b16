"""Non-abelian 2-cocycles, crossed products, inducibility and the Wells map.

Crossed products live on A + B with A's basis first.  Automorphism pairs
(beta, gamma) act on cocycles by

    tr'(b, a) = beta(gamma^-1(b) |> beta^-1(a)),  and likewise for tl, chi.

This is a left action: transforming by p2 and then by p1 equals
transforming by the composite (beta1 beta2, gamma1 gamma2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (DimensionMismatch, InvalidAutomorphism, InvalidCocycle,
                     NonAbelianKernel, NotCompatiblePair, NotSection,
                     NotSubalgebra, PreconditionFailed, UnsupportedField)
from .extensions import ExtendingDatum, unified_product
from .kernel import (Field, Verdict, flat_key, freeze, general_linear,
                     mat_inverse, mismatches, rank, require_bound, same, solve)
from .perm_core import (AlgebraMorphism, PermAlgebra, Representation,
                        automorphisms, check_morphism, check_perm,
                        morphism_violations)

NAB_MODES = ("derived", "literal")


def _as(F: Field, arr) -> np.ndarray:
    arr = np.asarray(arr)
    return F.reduce(arr) if arr.dtype == F.dtype else F.array(arr)


def _terms(F: Field, out: str, terms) -> np.ndarray:
    """Signed einsum sum; each term is (sign, spec, *ops)."""
    total = None
    for sign, spec, *ops in terms:
        val = F.einsum(f"{spec}->{out}", *ops, raw=True)
        val = val if sign > 0 else -val
        total = val if total is None else total + val
    return F.reduce(total)


class NonAbelianCocycle:
    __slots__ = ("A", "B", "tr", "tl", "chi")

    def __init__(self, A: PermAlgebra, B: PermAlgebra, tr=None, tl=None, chi=None):
        if A.field != B.field:
            raise DimensionMismatch("cocycle over algebras with different fields")
        F, n, m = A.field, A.dim, B.dim
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        for name, val, shape in (("tr", tr, (m, n, n)), ("tl", tl, (n, m, n)), ("chi", chi, (m, m, n))):
            arr = F.zeros(shape) if val is None else _as(F, val)
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, freeze(arr))

    def __setattr__(self, name, value):
        raise AttributeError("NonAbelianCocycle is immutable")

    @property
    def field(self) -> Field:
        return self.A.field

    def key(self) -> tuple:
        return flat_key(self.tr, self.tl, self.chi)

    def __eq__(self, other):
        return (isinstance(other, NonAbelianCocycle) and self.A == other.A
                and self.B == other.B and self.key() == other.key())

    __hash__ = None

    def replace(self, **parts) -> "NonAbelianCocycle":
        base = {"tr": self.tr, "tl": self.tl, "chi": self.chi}
        base.update(parts)
        return NonAbelianCocycle(self.A, self.B, **base)

    def datum(self) -> ExtendingDatum:
        return ExtendingDatum(self.A, self.B.dim, self.B.basis, tr=self.tr, tl=self.tl,
                              chi=self.chi, dot=self.B.sc)


def nab_violations(c: NonAbelianCocycle, mode: str = "derived") -> list:
    """The five cocycle families.

    ``derived`` spells out the perm identities of the crossed product on the
    mixed triples; ``literal`` is the commutator-style display, kept for
    comparison.  Index letters: i, j over A; u, v, w over B.
    """
    F, a, b = c.field, c.A.sc, c.B.sc
    tr, tl, chi = c.tr, c.tl, c.chi
    T = lambda out, *terms: _terms(F, out, terms)  # noqa: E731
    found = []
    if mode == "derived":
        # (a1a2)<|b = a1(a2<|b) = a1(b|>a2) = (a1<|b)a2
        found += mismatches("nab1", [T("ijuk", (1, "ijx,xuk", a, tl)),
                                     T("ijuk", (1, "jux,ixk", tl, a)),
                                     T("ijuk", (1, "ujx,ixk", tr, a)),
                                     T("ijuk", (1, "iux,xjk", tl, a))])
        # b|>(a1a2) = b|>(a2a1) = (b|>a1)a2
        found += mismatches("nab2", [T("uijk", (1, "ijx,uxk", a, tr)),
                                     T("uijk", (1, "jix,uxk", a, tr)),
                                     T("uijk", (1, "uix,xjk", tr, a))])
        # a chi(b1,b2) + a<|(b1b2) = a chi(b2,b1) + a<|(b2b1) = (a<|b1)<|b2
        found += mismatches("nab3", [T("iuvk", (1, "uvx,ixk", chi, a), (1, "uvy,iyk", b, tl)),
                                     T("iuvk", (1, "vux,ixk", chi, a), (1, "vuy,iyk", b, tl)),
                                     T("iuvk", (1, "iux,xvk", tl, tl))])
        # chi(b1,b2)a + (b1b2)|>a = b1|>(b2|>a) = b1|>(a<|b2) = (b1|>a)<|b2
        found += mismatches("nab4", [T("uvik", (1, "uvx,xik", chi, a), (1, "uvy,yik", b, tr)),
                                     T("uvik", (1, "vix,uxk", tr, tr)),
                                     T("uvik", (1, "ivx,uxk", tl, tr)),
                                     T("uvik", (1, "uix,xvk", tr, tl))])
        # chi(b1,b2)<|b3 + chi(b1b2,b3) = b1|>chi(b2,b3) + chi(b1,b2b3) = b1|>chi(b3,b2) + chi(b1,b3b2)
        found += mismatches("nab5", [T("uvwk", (1, "uvx,xwk", chi, tl), (1, "uvy,ywk", b, chi)),
                                     T("uvwk", (1, "vwx,uxk", chi, tr), (1, "vwy,uyk", b, chi)),
                                     T("uvwk", (1, "wvx,uxk", chi, tr), (1, "wvy,uyk", b, chi))])
        found += [("perm_a", idx) for _, idx in check_perm(c.A).violations]
        found += [("perm_b", idx) for _, idx in check_perm(c.B).violations]
    elif mode == "literal":
        found += mismatches("nab1", [T("ijuk", (1, "ijx,xuk", a, tl), (-1, "jix,xuk", a, tl)),
                                     T("ijuk", (1, "juy,iyk", tl, a), (-1, "iuy,jyk", tl, a))])
        found += mismatches("nab2", [T("uijk", (1, "ijx,uxk", a, tr), (-1, "ujx,ixk", tr, a)),
                                     T("uijk", (1, "uix,xjk", tr, a), (-1, "iux,xjk", tl, a))])
        found += mismatches("nab3", [T("iuvk", (1, "ivx,uxk", tl, tr), (-1, "uix,xvk", tr, tl)),
                                     T("iuvk", (1, "uvy,iyk", b, tl), (-1, "iux,xvk", tl, tl),
                                       (1, "uvx,ixk", chi, a))])
        found += mismatches("nab4", [T("uvik", (1, "uvy,yik", b, tr), (-1, "vuy,yik", b, tr)),
                                     T("uvik", (1, "vix,uxk", tr, tr), (-1, "uix,vxk", tr, tr),
                                       (-1, "uvx,xik", chi, a), (1, "vux,xik", chi, a))])
        found += mismatches("nab5", [T("uvwk", (1, "uvy,ywk", b, chi), (-1, "vwy,uyk", b, chi),
                                       (-1, "vuy,ywk", b, chi), (1, "uwy,vyk", b, chi)),
                                     T("uvwk", (1, "vwx,uxk", chi, tr), (-1, "uwx,vxk", chi, tr),
                                       (-1, "uvx,xwk", chi, tl), (1, "vux,xwk", chi, tl))])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return found


def validate_cocycle(c: NonAbelianCocycle, mode: str = "derived") -> Verdict:
    return Verdict.of(nab_violations(c, mode))


def crossed_product(c: NonAbelianCocycle, checked: bool = True) -> PermAlgebra:
    """(a1, b1)(a2, b2) = (a1a2 + b1|>a2 + a1<|b2 + chi(b1, b2), b1b2)."""
    if checked:
        verdict = validate_cocycle(c)
        if not verdict.ok:
            raise InvalidCocycle(f"not a cocycle: {verdict.violations[:5]}")
    return unified_product(c.datum(), checked=False)


# -- extensions and sections ----------------------------------------------------

def quotient_algebra(E: PermAlgebra, A_idx: Sequence[int]) -> PermAlgebra:
    """E / span(A_idx) on the remaining basis vectors; A must be an ideal."""
    A_idx = list(A_idx)
    rest = [t for t in range(E.dim) if t not in A_idx]
    sc = E.sc
    if A_idx and rest:
        leak = np.concatenate([sc[np.ix_(A_idx, range(E.dim), rest)].ravel(),
                               sc[np.ix_(range(E.dim), A_idx, rest)].ravel()])
        if np.count_nonzero(leak):
            raise NotSubalgebra("span of the kernel indices is not an ideal")
    return PermAlgebra(E.field, sc[np.ix_(rest, rest, rest)], [E.basis[t] for t in rest])


def canonical_section(E: PermAlgebra, A_idx: Sequence[int]) -> np.ndarray:
    F = E.field
    rest = [t for t in range(E.dim) if t not in A_idx]
    s = F.zeros((E.dim, len(rest)))
    for j, t in enumerate(rest):
        s[t, j] = F.one
    return s


def _split(E: PermAlgebra, A_idx: Sequence[int], section) -> tuple:
    """Inverse of the basis [iota | section]: returns (to_A, to_B) coordinate maps."""
    F = E.field
    A_idx = list(A_idx)
    iota = np.stack([E.unit(a) for a in A_idx], axis=1) if A_idx else F.zeros((E.dim, 0))
    basis = np.concatenate([iota, section], axis=1)
    if basis.shape[1] != E.dim:
        raise NotSection(f"section has {section.shape[1]} columns, expected {E.dim - len(A_idx)}")
    inv = mat_inverse(F, basis)
    if inv is None:
        raise NotSection("section image meets the kernel")
    return inv[: len(A_idx)], inv[len(A_idx):]


def cocycle_from_extension(E: PermAlgebra, A_idx: Sequence[int], B: PermAlgebra,
                           section=None) -> NonAbelianCocycle:
    """b|>a = s(b)a, a<|b = a s(b), chi(b1, b2) = s(b1)s(b2) - s(b1b2), in A-coordinates."""
    F = E.field
    A_idx = list(A_idx)
    if B.field != F:
        raise DimensionMismatch("B over a different field")
    if E.dim - len(A_idx) != B.dim:
        raise DimensionMismatch(f"dim E - dim A = {E.dim - len(A_idx)} but dim B = {B.dim}")
    A = _kernel_algebra(E, A_idx)
    s = canonical_section(E, A_idx) if section is None else _as(F, section)
    if s.shape != (E.dim, B.dim):
        raise DimensionMismatch(f"section of shape {s.shape}")
    to_A, to_B = _split(E, A_idx, s)
    iota = np.stack([E.unit(a) for a in A_idx], axis=1) if A_idx else F.zeros((E.dim, 0))
    # A must be an ideal: products with A have no B-component
    for mixed in (F.einsum("xu,yi,xyk->uik", s, iota, E.sc), F.einsum("xi,yu,xyk->iuk", iota, s, E.sc)):
        if np.count_nonzero(F.einsum("abk,tk->abt", mixed, to_B)):
            raise NotSubalgebra("kernel is not an ideal of E")
    ss = F.einsum("xu,yv,xyk->uvk", s, s, E.sc)
    # the projection of s(b1)s(b2) must be b1b2 for the section to split B
    if not same(F.einsum("uvk,tk->uvt", ss, to_B), B.sc):
        raise NotSection("projection is not a morphism onto B for this section")
    tr = F.einsum("xu,yi,xyk,tk->uit", s, iota, E.sc, to_A)
    tl = F.einsum("xi,yu,xyk,tk->iut", iota, s, E.sc, to_A)
    s_bb = F.einsum("uvy,ky->uvk", B.sc, s)
    chi = F.einsum("uvk,tk->uvt", F.sub(ss, s_bb), to_A)
    return NonAbelianCocycle(A, B, tr, tl, chi)


def _kernel_algebra(E: PermAlgebra, A_idx) -> PermAlgebra:
    from .extensions import subalgebra_on
    return subalgebra_on(E, A_idx)


def eq_violations(c: NonAbelianCocycle, c2: NonAbelianCocycle, lam) -> list:
    F, a, b = c.field, c.A.sc, c.B.sc
    T = lambda out, *terms: _terms(F, out, terms)  # noqa: E731
    found = []
    # a<|b - a<|'b = a lam(b); b|>a - b|>'a = lam(b) a
    found += mismatches("eq1", [F.sub(c.tl, c2.tl), T("iuk", (1, "xu,ixk", lam, a))])
    found += mismatches("eq1", [F.sub(c.tr, c2.tr), T("uik", (1, "xu,xik", lam, a))])
    # chi - chi' = lam(b1)lam(b2) + b1|>'lam(b2) + lam(b1)<|'b2 - lam(b1b2)
    found += mismatches("eq2", [F.sub(c.chi, c2.chi),
                                T("uvk", (1, "xu,yv,xyk", lam, lam, a), (1, "xv,uxk", lam, c2.tr),
                                  (1, "xu,xvk", lam, c2.tl), (-1, "uvy,ky", b, lam))])
    return found


def cocycles_equivalent(c: NonAbelianCocycle, c2: NonAbelianCocycle, lam) -> Verdict:
    if c.A != c2.A or c.B != c2.B:
        raise DimensionMismatch("cocycles over different algebras")
    lam = _as(c.field, lam)
    if lam.shape != (c.A.dim, c.B.dim):
        raise DimensionMismatch(f"lambda of shape {lam.shape}")
    return Verdict.of(eq_violations(c, c2, lam))


# -- automorphism pairs ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AutPair:
    beta: np.ndarray    # on A
    gamma: np.ndarray   # on B

    def key(self) -> tuple:
        return flat_key(self.beta, self.gamma)


def _check_pair(c: NonAbelianCocycle, pair: AutPair) -> tuple:
    F = c.field
    beta, gamma = _as(F, pair.beta), _as(F, pair.gamma)
    if beta.shape != (c.A.dim,) * 2 or gamma.shape != (c.B.dim,) * 2:
        raise DimensionMismatch("automorphism pair has the wrong shape")
    bi, gi = mat_inverse(F, beta), mat_inverse(F, gamma)
    if bi is None or gi is None:
        raise InvalidAutomorphism("pair is not invertible")
    if morphism_violations(c.A, c.A, beta) or morphism_violations(c.B, c.B, gamma):
        raise InvalidAutomorphism("pair is not multiplicative")
    return beta, gamma, bi, gi


def transform_cocycle(c: NonAbelianCocycle, pair: AutPair) -> NonAbelianCocycle:
    F = c.field
    beta, gamma, bi, gi = _check_pair(c, pair)
    tr = F.einsum("vu,xj,vxy,ky->ujk", gi, bi, c.tr, beta)
    tl = F.einsum("xj,vu,xvy,ky->juk", bi, gi, c.tl, beta)
    chi = F.einsum("xu,yv,xyz,kz->uvk", gi, gi, c.chi, beta)
    return NonAbelianCocycle(c.A, c.B, tr, tl, chi)


def cor_violations(c: NonAbelianCocycle, pair: AutPair, lam) -> list:
    """The lambda-conditions for inducibility, on basis tuples."""
    F, a, b = c.field, c.A.sc, c.B.sc
    beta, gamma = _as(F, pair.beta), _as(F, pair.gamma)
    lg = F.matmul(lam, gamma)                       # lam o gamma
    T = lambda out, *terms: _terms(F, out, terms)  # noqa: E731
    found = []
    # beta(b|>a) = gamma(b)|>beta(a) - lam(gamma(b))beta(a)
    found += mismatches("cor1", [T("uik", (1, "uiy,ky", c.tr, beta)),
                                 T("uik", (1, "vu,xi,vxk", gamma, beta, c.tr),
                                   (-1, "yu,xi,yxk", lg, beta, a))])
    # beta(a<|b) = beta(a)<|gamma(b) - beta(a)lam(gamma(b))
    found += mismatches("cor2", [T("iuk", (1, "iuy,ky", c.tl, beta)),
                                 T("iuk", (1, "xi,vu,xvk", beta, gamma, c.tl),
                                   (-1, "xi,yu,xyk", beta, lg, a))])
    # beta chi(b1,b2) = chi(gb1, gb2) - gb1|>lam(gb2) + lam(gb1 gb2) - lam(gb1)<|gb2 + lam(gb1)lam(gb2)
    found += mismatches("cor3", [T("uvk", (1, "uvy,ky", c.chi, beta)),
                                 T("uvk", (1, "xu,yv,xyk", gamma, gamma, c.chi),
                                   (-1, "xu,yv,xyk", gamma, lg, c.tr),
                                   (1, "xu,yv,xyz,kz", gamma, gamma, b, lam),
                                   (-1, "xu,yv,xyk", lg, gamma, c.tl),
                                   (1, "xu,yv,xyk", lg, lg, a))])
    return found


def inducing_automorphism(c: NonAbelianCocycle, pair: AutPair, lam) -> np.ndarray:
    """Matrix of a + s(b) -> beta(a) - lam(gamma(b)) + s(gamma(b)) on the crossed product."""
    F = c.field
    n, m = c.A.dim, c.B.dim
    beta, gamma = _as(F, pair.beta), _as(F, pair.gamma)
    M = F.zeros((n + m, n + m))
    M[:n, :n] = beta
    M[:n, n:] = F.neg(F.matmul(_as(F, lam), gamma))
    M[n:, n:] = gamma
    return M


@dataclass(frozen=True, eq=False)
class Inducibility:
    status: str                  # "yes", "no" or "unknown"
    witness: np.ndarray | None = None
    alpha: np.ndarray | None = None

    def __bool__(self):
        return self.status == "yes"


def _residual_system(c: NonAbelianCocycle, pair: AutPair) -> tuple:
    """Affine system for lambda when the kernel product vanishes: M vec(lam) = rhs."""
    F = c.field
    n, m = c.A.dim, c.B.dim

    def residual(lam):
        parts = []
        for name, lhs_rhs in _cor_sides(c, pair, lam):
            parts.append(F.sub(*lhs_rhs).ravel())
        return np.concatenate(parts) if parts else F.zeros(0)

    zero = residual(F.zeros((n, m)))
    cols = []
    for idx in np.ndindex(n, m):
        unit = F.zeros((n, m))
        unit[idx] = F.one
        cols.append(F.sub(residual(unit), zero))
    M = np.stack(cols, axis=1) if cols else F.zeros((zero.shape[0], 0))
    return M, F.neg(zero)


def _cor_sides(c: NonAbelianCocycle, pair: AutPair, lam) -> list:
    F, a, b = c.field, c.A.sc, c.B.sc
    beta, gamma = _as(F, pair.beta), _as(F, pair.gamma)
    lg = F.matmul(lam, gamma)
    T = lambda out, *terms: _terms(F, out, terms)  # noqa: E731
    return [
        ("cor1", (T("uik", (1, "uiy,ky", c.tr, beta)),
                  T("uik", (1, "vu,xi,vxk", gamma, beta, c.tr), (-1, "yu,xi,yxk", lg, beta, a)))),
        ("cor2", (T("iuk", (1, "iuy,ky", c.tl, beta)),
                  T("iuk", (1, "xi,vu,xvk", beta, gamma, c.tl), (-1, "xi,yu,xyk", beta, lg, a)))),
        ("cor3", (T("uvk", (1, "uvy,ky", c.chi, beta)),
                  T("uvk", (1, "xu,yv,xyk", gamma, gamma, c.chi), (-1, "xu,yv,xyk", gamma, lg, c.tr),
                    (1, "xu,yv,xyz,kz", gamma, gamma, b, lam), (-1, "xu,yv,xyk", lg, gamma, c.tl),
                    (1, "xu,yv,xyk", lg, lg, a)))),
    ]


def is_inducible(c: NonAbelianCocycle, pair: AutPair, candidate=None,
                 bound: int | None = None) -> Inducibility:
    F = c.field
    n, m = c.A.dim, c.B.dim
    _check_pair(c, pair)
    E = crossed_product(c, checked=False)

    def confirm(lam) -> Inducibility:
        alpha = inducing_automorphism(c, pair, lam)
        if morphism_violations(E, E, alpha):
            raise PreconditionFailed("lambda passes the conditions but alpha is not multiplicative")
        return Inducibility("yes", freeze(lam), freeze(alpha))

    if candidate is not None and not cor_violations(c, pair, _as(F, candidate)):
        return confirm(_as(F, candidate))
    if F.is_finite:
        require_bound(F.p ** (n * m), "lambda sweep", bound)
        for lam in F.tensors((n, m)):
            if not cor_violations(c, pair, lam):
                return confirm(lam)
        return Inducibility("no")
    if not np.count_nonzero(c.A.sc):
        M, rhs = _residual_system(c, pair)
        x = solve(F, M, rhs)
        if x is None:
            return Inducibility("no")
        return confirm(x.reshape(n, m))
    return Inducibility("unknown")


# -- automorphism groups ----------------------------------------------------------

@dataclass(frozen=True)
class AutomorphismGroups:
    aut_E: tuple          # every automorphism of E
    aut_A_E: tuple        # those preserving span(A_idx)
    aut_A_id: tuple       # kernel of kappa
    kappa_image: tuple    # distinct kappa values, as AutPair
    A_idx: tuple

    def exact(self) -> bool:
        return len(self.aut_A_E) == len(self.aut_A_id) * len(self.kappa_image)


def preserves(alpha, A_idx: Sequence[int]) -> bool:
    rest = [t for t in range(alpha.shape[0]) if t not in A_idx]
    return not np.count_nonzero(np.asarray(alpha)[np.ix_(rest, list(A_idx))])


def kappa(E: PermAlgebra, A_idx: Sequence[int], alpha, section=None) -> AutPair:
    """(alpha restricted to A, pi o alpha o s)."""
    F = E.field
    A_idx = list(A_idx)
    alpha = _as(F, alpha)
    if not preserves(alpha, A_idx) or mat_inverse(F, alpha) is None:
        raise InvalidAutomorphism("alpha does not preserve A")
    if morphism_violations(E, E, alpha):
        raise InvalidAutomorphism("alpha is not multiplicative")
    s = canonical_section(E, A_idx) if section is None else _as(F, section)
    to_A, to_B = _split(E, A_idx, s)
    beta = alpha[np.ix_(A_idx, A_idx)]
    gamma = F.matmul(to_B, F.matmul(alpha, s))
    return AutPair(freeze(beta), freeze(gamma))


def enumerate_automorphism_groups(E: PermAlgebra, A_idx: Sequence[int],
                                  max_dim: int = 3, max_p: int = 7) -> AutomorphismGroups:
    F = E.field
    if not F.is_finite:
        raise UnsupportedField("automorphism enumeration needs GF(p)")
    if E.dim > max_dim or F.p > max_p:
        from .errors import SearchBoundExceeded
        raise SearchBoundExceeded(f"dim {E.dim} over GF({F.p}) is beyond the enumeration bound")
    A_idx = tuple(A_idx)
    quotient_algebra(E, A_idx)
    aut = sorted(automorphisms(E, max_dim_sq=max_dim * max_dim), key=flat_key)
    aut_A = [g for g in aut if preserves(g, A_idx)]
    n, m = len(A_idx), E.dim - len(A_idx)
    ident = AutPair(F.eye(n), F.eye(m))
    images, kernel = {}, []
    for g in aut_A:
        p = kappa(E, A_idx, g)
        images.setdefault(p.key(), p)
        if p.key() == ident.key():
            kernel.append(g)
    return AutomorphismGroups(tuple(freeze(g) for g in aut), tuple(freeze(g) for g in aut_A),
                              tuple(freeze(g) for g in kernel),
                              tuple(images[k] for k in sorted(images)), A_idx)


def multiplication_table(elements: Sequence[np.ndarray], F: Field) -> list:
    """table[i][j] = index of elements[i] @ elements[j]."""
    index = {flat_key(g): i for i, g in enumerate(elements)}
    return [[index[flat_key(F.matmul(x, y))] for y in elements] for x in elements]


# -- abelian extensions and the Wells map -------------------------------------------

class WellsContext:
    """B acting on an abelian A (zero product) plus a 2-cocycle chi."""

    __slots__ = ("cocycle",)

    def __init__(self, B: PermAlgebra, rep: Representation, chi, check: bool = True):
        F = B.field
        if rep.algebra != B:
            raise DimensionMismatch("bimodule over a different algebra")
        A = PermAlgebra.zero(F, rep.dim)
        tr = np.transpose(rep.L, (0, 2, 1))   # b |> a = L(b) a
        tl = np.transpose(rep.R, (2, 0, 1))   # a <| b = R(b) a
        c = NonAbelianCocycle(A, B, tr, tl, chi)
        if check:
            verdict = validate_cocycle(c)
            if not verdict.ok:
                raise InvalidCocycle(f"not a cocycle: {verdict.violations[:5]}")
        object.__setattr__(self, "cocycle", c)

    def __setattr__(self, name, value):
        raise AttributeError("WellsContext is immutable")

    @classmethod
    def from_cocycle(cls, c: NonAbelianCocycle, check: bool = True) -> "WellsContext":
        if np.count_nonzero(c.A.sc):
            raise NonAbelianKernel("the kernel algebra has a nonzero product")
        L = np.transpose(c.tr, (0, 2, 1))
        R = np.transpose(c.tl, (1, 2, 0))
        return cls(c.B, Representation(c.B, L, R), c.chi, check)

    @classmethod
    def from_extension(cls, E: PermAlgebra, A_idx: Sequence[int], section=None) -> "WellsContext":
        B = quotient_algebra(E, A_idx)
        return cls.from_cocycle(cocycle_from_extension(E, A_idx, B, section))

    @property
    def B(self) -> PermAlgebra:
        return self.cocycle.B

    @property
    def field(self) -> Field:
        return self.cocycle.field

    def extension(self) -> PermAlgebra:
        return crossed_product(self.cocycle, checked=False)


def compatible(ctx: WellsContext, pair: AutPair) -> bool:
    c = ctx.cocycle
    F = c.field
    beta, gamma = _as(F, pair.beta), _as(F, pair.gamma)
    lhs_tr = F.einsum("uiy,ky->uik", c.tr, beta)
    rhs_tr = F.einsum("vu,xi,vxk->uik", gamma, beta, c.tr)
    lhs_tl = F.einsum("iuy,ky->iuk", c.tl, beta)
    rhs_tl = F.einsum("xi,vu,xvk->iuk", beta, gamma, c.tl)
    return same(lhs_tr, rhs_tr) and same(lhs_tl, rhs_tl)


def coboundary(ctx: WellsContext, lam) -> np.ndarray:
    """(b1, b2) -> b1|>lam(b2) + lam(b1)<|b2 - lam(b1b2)."""
    c = ctx.cocycle
    return _terms(c.field, "uvk", [(1, "xv,uxk", lam, c.tr), (1, "xu,xvk", lam, c.tl),
                                   (-1, "uvy,ky", c.B.sc, lam)])


@dataclass(frozen=True, eq=False)
class WellsImage:
    representative: np.ndarray    # chi^{beta,gamma} - chi
    vanishes: bool
    witness: np.ndarray | None    # lambda with representative = coboundary(lambda)


def wells_map(ctx: WellsContext, pair: AutPair) -> WellsImage:
    c = ctx.cocycle
    F = c.field
    if np.count_nonzero(c.A.sc):
        raise NonAbelianKernel("Wells map needs a zero product on the kernel")
    _check_pair(c, pair)
    if not compatible(ctx, pair):
        raise NotCompatiblePair("pair does not intertwine the bimodule structure")
    diff = F.sub(transform_cocycle(c, pair).chi, c.chi)
    n, m = c.A.dim, c.B.dim
    cols = []
    for idx in np.ndindex(n, m):
        unit = F.zeros((n, m))
        unit[idx] = F.one
        cols.append(coboundary(ctx, unit).ravel())
    M = np.stack(cols, axis=1) if cols else F.zeros((diff.size, 0))
    x = solve(F, M, diff.ravel()) if diff.size else F.zeros(n * m)
    if x is None:
        return WellsImage(freeze(diff), False, None)
    return WellsImage(freeze(diff), True, freeze(x.reshape(n, m)))


def compatible_pairs(ctx: WellsContext) -> list:
    """Aut_{|>,<|}(A, B) over GF(p); Aut(A) is all of GL(A) since A is abelian."""
    c = ctx.cocycle
    F = c.field
    if not F.is_finite:
        raise UnsupportedField("pair enumeration needs GF(p)")
    betas = list(general_linear(F, c.A.dim))
    gammas = automorphisms(c.B, max_dim_sq=max(9, c.B.dim ** 2))
    pairs = [AutPair(freeze(b), freeze(g)) for b in betas for g in gammas]
    return sorted((p for p in pairs if compatible(ctx, p)), key=AutPair.key)


def check_wells_sequence(ctx: WellsContext) -> Verdict:
    """Exactness at the pair group: inducible (image of kappa) iff the Wells class vanishes."""
    c = ctx.cocycle
    E = ctx.extension()
    n = c.A.dim
    groups = enumerate_automorphism_groups(E, range(n))
    image = {p.key() for p in groups.kappa_image}
    found = []
    pairs = compatible_pairs(ctx)
    for i, p in enumerate(pairs):
        if (p.key() in image) != wells_map(ctx, p).vanishes:
            found.append(("wells_exact", (i,)))
    if not image <= {p.key() for p in pairs}:
        found.append(("kappa_compatible", ()))
    if not groups.exact():
        found.append(("kappa_exact", ()))
    return Verdict.of(found)


@dataclass(frozen=True)
class SplitDecomposition:
    verdict: Verdict
    order_aut_A_E: int
    order_aut_A_id: int
    order_pairs: int


def split_semidirect_decomposition(ctx: WellsContext) -> SplitDecomposition:
    """Aut_A(E) = Aut_A^id(E) x| Aut_{|>,<|}(A, B) for chi = 0, element by element."""
    c = ctx.cocycle
    F = c.field
    if np.count_nonzero(c.chi):
        raise PreconditionFailed("the split decomposition needs chi = 0")
    n, m = c.A.dim, c.B.dim
    E = ctx.extension()
    groups = enumerate_automorphism_groups(E, range(n))
    pairs = compatible_pairs(ctx)
    kernel = {flat_key(g) for g in groups.aut_A_id}
    aut_A = {flat_key(g) for g in groups.aut_A_E}
    found = []

    def varrho(p: AutPair) -> np.ndarray:
        M = F.zeros((n + m, n + m))
        M[:n, :n] = p.beta
        M[n:, n:] = p.gamma
        return M

    for i, p in enumerate(pairs):
        s = varrho(p)
        if flat_key(s) not in aut_A:
            found.append(("section_in_aut", (i,)))
            continue
        if kappa(E, range(n), s).key() != p.key():
            found.append(("kappa_section", (i,)))
    for i, g in enumerate(groups.aut_A_E):
        s = varrho(kappa(E, range(n), g))
        nu = F.matmul(g, mat_inverse(F, s))
        if flat_key(nu) not in kernel:
            found.append(("factor", (i,)))
    if len(groups.aut_A_E) != len(groups.aut_A_id) * len(pairs):
        found.append(("order", ()))
    return SplitDecomposition(Verdict.of(found), len(groups.aut_A_E), len(groups.aut_A_id), len(pairs))
