"""Perm bialgebras, standard Manin triples and the S-equation.

Conventions: ``delta[i, p, q]`` is the coefficient of e_p (x) e_q in Delta(e_i),
``r[p, q]`` the coefficient of e_p (x) e_q in r.  A* carries the dual basis and
pairings are Kronecker, so L*(a) is the transpose of L(a).  In matrix form a
2-tensor T transforms as (X (x) Y) T = X T Y^T and tau T = T^T.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidBialgebra, NotSymmetric, Singular
from .extensions import MatchedPair, bicrossed_product, validate_matched_pair
from .kernel import Field, Verdict, freeze, mat_inverse, mismatches, same
from .perm_core import (PermAlgebra, check_invariant_form, check_perm,
                        is_subalgebra, morphism_violations)


COB_MODES = ("derived", "literal")


def _as(F: Field, arr) -> np.ndarray:
    arr = np.asarray(arr)
    return F.reduce(arr) if arr.dtype == F.dtype else F.array(arr)


def _terms(F: Field, out: str, terms) -> np.ndarray:
    total = None
    for sign, spec, *ops in terms:
        val = F.einsum(f"{spec}->{out}", *ops, raw=True)
        val = val if sign > 0 else -val
        total = val if total is None else total + val
    return F.reduce(total)


class Comultiplication:
    __slots__ = ("algebra", "delta")

    def __init__(self, algebra: PermAlgebra, delta=None):
        n = algebra.dim
        F = algebra.field
        arr = F.zeros((n, n, n)) if delta is None else _as(F, delta)
        if arr.shape != (n, n, n):
            raise DimensionMismatch(f"delta of shape {arr.shape} for dim {n}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "delta", freeze(arr))

    def __setattr__(self, name, value):
        raise AttributeError("Comultiplication is immutable")

    def __eq__(self, other):
        return (isinstance(other, Comultiplication) and self.algebra == other.algebra
                and same(self.delta, other.delta))

    __hash__ = None

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __neg__(self) -> "Comultiplication":
        return Comultiplication(self.algebra, self.field.neg(self.delta))


class RTensor:
    __slots__ = ("algebra", "r")

    def __init__(self, algebra: PermAlgebra, r=None):
        n = algebra.dim
        F = algebra.field
        arr = F.zeros((n, n)) if r is None else _as(F, r)
        if arr.shape != (n, n):
            raise DimensionMismatch(f"r of shape {arr.shape} for dim {n}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "r", freeze(arr))

    def __setattr__(self, name, value):
        raise AttributeError("RTensor is immutable")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def symmetric(self) -> bool:
        return same(self.r, self.r.T)

    def twisted(self) -> np.ndarray:
        """r - tau r."""
        return self.field.sub(self.r, self.r.T)


def dual_basis(A: PermAlgebra) -> tuple:
    return tuple(f"{b}*" for b in A.basis)


# -- coalgebras and bialgebras -----------------------------------------------------

def coalg_violations(delta: Comultiplication) -> list:
    F, t = delta.field, delta.delta
    # (Delta (x) id)Delta = (id (x) Delta)Delta = (id (x) tau Delta)Delta
    return mismatches("coalg", [F.einsum("apz,pxy->axyz", t, t),
                                F.einsum("axq,qyz->axyz", t, t),
                                F.einsum("axq,qzy->axyz", t, t)], 3)


@dataclass(frozen=True)
class DualProduct:
    algebra: PermAlgebra      # A* with the product dual to Delta
    verdict: Verdict          # coalgebra identity
    perm_verdict: Verdict     # check_perm on A*; agrees with verdict


def dual_product(delta: Comultiplication) -> DualProduct:
    """<b1 b2, a> = <b1 (x) b2, Delta(a)>."""
    A = delta.algebra
    sc = np.transpose(delta.delta, (1, 2, 0))
    dual = PermAlgebra(A.field, sc, dual_basis(A))
    return DualProduct(dual, Verdict.of(coalg_violations(delta)), check_perm(dual))


def _mm(F: Field, X, Y, xi: str, yi: str) -> np.ndarray:
    """Stacks of matrices X[.], Y[.]: out[i, j] = X[xi] @ Y[yi] with xi, yi in {i, j}."""
    return F.einsum(f"{xi}px,{yi}xq->ijpq", X, Y, raw=True)


def _stack_t(M) -> np.ndarray:
    return np.transpose(M, (0, 2, 1))


def bialg_violations(delta: Comultiplication) -> list:
    A = delta.algebra
    F, sc = A.field, A.sc
    D = delta.delta                                 # D[i] = Delta(e_i) as a matrix
    Dt = _stack_t(D)
    L, R = A.left_mats(), A.right_mats()
    Lt, Rt = _stack_t(L), _stack_t(R)
    d12 = F.einsum("ijx,xpq->ijpq", sc, D)          # Delta(a1 a2)
    d21 = F.einsum("jix,xpq->ijpq", sc, D)          # Delta(a2 a1)
    swap = lambda T: np.transpose(T, (0, 1, 3, 2))  # noqa: E731
    red = F.reduce
    found = []
    b1 = red(_mm(F, R, D, "j", "i") - _mm(F, R, Dt, "j", "i")
             + _mm(F, D, Rt, "j", "i") - _mm(F, Dt, Rt, "j", "i"))
    found += mismatches("bialg1", [F.sub(d12, swap(d12)), F.sub(d21, swap(d21)), b1], 2)
    b2a = red(_mm(F, L, D, "i", "j") + _mm(F, D, Rt, "i", "j") - _mm(F, D, Lt, "i", "j"))
    b2b = red(_mm(F, L, D, "i", "j") - _mm(F, L, Dt, "i", "j") + _mm(F, D, Rt, "i", "j"))
    b2c = red(_mm(F, R, D, "j", "i") + _mm(F, D, Rt, "j", "i") - _mm(F, D, Lt, "j", "i")
              - _mm(F, Dt, Rt, "j", "i") + _mm(F, Dt, Lt, "j", "i"))
    found += mismatches("bialg2", [d12, b2a, b2b, b2c], 2)
    return found


def check_perm_bialgebra(delta: Comultiplication) -> Verdict:
    return Verdict.of(coalg_violations(delta) + bialg_violations(delta))


# -- Manin triples -------------------------------------------------------------

def dual_matched_pair(A: PermAlgebra, dual: PermAlgebra) -> MatchedPair:
    """(A, A*, R*_A - L*_A, R*_A, R*_A* - L*_A*, R*_A*) in datum slots."""
    if A.field != dual.field or A.dim != dual.dim:
        raise DimensionMismatch("A* must have the dimension of A")
    sc, dsc = A.sc, dual.sc
    F = A.field
    br = F.sub(np.transpose(sc, (1, 2, 0)), np.transpose(sc, (0, 2, 1)))   # [i, v, k]
    bl = np.transpose(sc, (2, 1, 0))                                        # [v, i, k]
    tr = F.sub(np.transpose(dsc, (1, 2, 0)), np.transpose(dsc, (0, 2, 1)))  # [v, i, k]
    tl = np.transpose(dsc, (2, 1, 0))                                       # [i, v, k]
    return MatchedPair(A, dual, br=br, bl=bl, tr=tr, tl=tl)


def standard_form(F: Field, n: int) -> np.ndarray:
    """Gram matrix of <a1, b2> - <a2, b1> on A + A*."""
    G = F.zeros((2 * n, 2 * n))
    for i in range(n):
        G[i, n + i] = F.one
        G[n + i, i] = F(-1)
    return G


@dataclass(frozen=True)
class ManinTriple:
    E: PermAlgebra
    omega_hat: np.ndarray
    verdict: Verdict


def manin_check(A: PermAlgebra, dual: PermAlgebra) -> ManinTriple:
    """Unchecked construction on A + A* with every Manin condition evaluated."""
    F, n = A.field, A.dim
    E = bicrossed_product(dual_matched_pair(A, dual), checked=False)
    G = standard_form(F, n)
    found = [("perm", idx) for _, idx in check_perm(E).violations]
    eye = F.eye(2 * n)
    if not is_subalgebra(E, list(eye[:, :n].T)):
        found.append(("subalgebra_a", ()))
    if not is_subalgebra(E, list(eye[:, n:].T)):
        found.append(("subalgebra_dual", ()))
    found += [(f"form_{name}", idx) for name, idx in
              check_invariant_form(E, G, skew=True, nondegenerate=True).violations]
    found += mismatches("isotropic", [G[:n, :n], F.zeros((n, n))], 0)
    found += mismatches("isotropic", [G[n:, n:], F.zeros((n, n))], 0)
    return ManinTriple(E, freeze(G), Verdict.of(found))


def manin_triple_from_bialgebra(delta: Comultiplication) -> ManinTriple:
    verdict = check_perm_bialgebra(delta)
    if not verdict.ok:
        raise InvalidBialgebra(f"not a perm bialgebra: {verdict.violations[:5]}")
    return manin_check(delta.algebra, dual_product(delta).algebra)


def matc_violations(A: PermAlgebra, dual: PermAlgebra) -> list:
    """The two dual matched-pair families on (a_i, a_j, b_p); values lie in A."""
    F, sc, dsc = A.field, A.sc, dual.sc
    RS = np.transpose(dsc, (1, 2, 0))     # R*_{A*}(b_p)(a_i) = sum_k RS[p, i, k] e_k
    LS = np.transpose(dsc, (0, 2, 1))     # L*_{A*}(b_p)(a_i)
    DS = F.sub(RS, LS)
    rA = np.transpose(sc, (1, 2, 0))      # R*_A(a_i)(b_p) = sum_q rA[i, p, q] e_q*
    lA = np.transpose(sc, (0, 2, 1))      # L*_A(a_i)(b_p)
    T = lambda *terms: _terms(F, "ijpk", terms)  # noqa: E731
    found = []
    found += mismatches("matc1", [T((1, "ijx,pxk", sc, DS)), T((1, "jix,pxk", sc, DS)),
                                  T((1, "pix,xjk", DS, sc), (1, "ipq,qjk", rA, DS))])
    found += mismatches("matc2", [
        T((1, "ijx,pxk", sc, RS)),
        T((1, "pjx,ixk", RS, sc), (1, "jpq,qik", rA, RS), (-1, "jpq,qik", lA, RS)),
        T((1, "pjx,ixk", DS, sc), (1, "jpq,qik", rA, RS)),
        T((1, "pix,xjk", RS, sc), (1, "ipq,qjk", rA, RS), (-1, "ipq,qjk", lA, RS),
          (-1, "ipq,qjk", rA, LS), (1, "ipq,qjk", lA, LS))])
    return found


@dataclass(frozen=True)
class DualPairCheck:
    verdict: Verdict        # the two listed families
    authority: Verdict      # validate_matched_pair on the six dual actions

    @property
    def agree(self) -> bool:
        return self.verdict.ok == self.authority.ok


def check_matched_pair_dual(A: PermAlgebra, dual: PermAlgebra) -> DualPairCheck:
    return DualPairCheck(Verdict.of(matc_violations(A, dual)),
                         validate_matched_pair(dual_matched_pair(A, dual)))


# -- coboundary bialgebras -----------------------------------------------------------

def coboundary_delta(rt: RTensor) -> Comultiplication:
    """Delta(a) = (L(a) (x) id + id (x) L(a) - id (x) R(a)) r."""
    A, r = rt.algebra, rt.r
    sc = A.sc
    delta = _terms(A.field, "apq", [(1, "aip,iq", sc, r), (1, "pj,ajq", r, sc),
                                    (-1, "pj,jaq", r, sc)])
    return Comultiplication(A, delta)


def cob_violations(rt: RTensor, mode: str = "derived") -> list:
    """cob1-cob4 on basis pairs (a1, a2) = (e_i, e_j), with W = r - tau r.

    ``literal`` keeps an extra id (x) R(a2a1) term on the right of cob2; that
    version disagrees with bialg1 on the coboundary, ``derived`` does not.
    """
    if mode not in COB_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    A = rt.algebra
    F, sc = A.field, A.sc
    W = rt.twisted()
    L, R = A.left_mats(), A.right_mats()
    L12 = F.einsum("ijx,xpq->ijpq", sc, L)      # L(a_i a_j)
    L21 = F.einsum("jix,xpq->ijpq", sc, L)
    R21 = F.einsum("jix,xpq->ijpq", sc, R)
    T = lambda *terms: _terms(F, "ijpq", terms)  # noqa: E731
    # X W Y^T has entries X[p, x] W[x, y] Y[q, y]
    extra = [(1, "px,ijqx", W, R21)] if mode == "literal" else []
    found = []
    found += mismatches("cob1", [T((1, "ijpx,xq", L12, W), (1, "px,ijqx", W, L12)),
                                 T((1, "ijpx,xq", L21, W), (1, "px,ijqx", W, L21))], 2)
    found += mismatches("cob2", [
        T((1, "jpx,xy,iqy", R, W, L), (1, "jpx,xy,iqy", L, W, R), (1, "px,ijqx", W, L21)),
        T((1, "jpx,xy,iqy", R, W, R), (1, "px,ijqx", W, L12), *extra)], 2)
    found += mismatches("cob3", [T((1, "ipx,xy,jqy", L, W, L)), F.zeros((A.dim,) * 4)], 2)
    found += mismatches("cob4", [
        T((1, "jpx,xy,iqy", R, W, L), (1, "jpx,xy,iqy", L, W, R), (1, "px,ijqx", W, L21)),
        T((1, "jpx,xy,iqy", R, W, R), (1, "jpx,xy,iqy", L, W, L), (1, "px,ijqx", W, L12))], 2)
    return found


def check_cob_conditions(rt: RTensor, mode: str = "derived") -> Verdict:
    return Verdict.of(cob_violations(rt, mode))


# -- leg products and the S-equation ----------------------------------------------

_LEGS = {"12": (0, 1), "13": (0, 2), "23": (1, 2), "32": (2, 1), "21": (1, 0), "31": (2, 0)}


def leg_product(rt: RTensor, first: str, second: str) -> np.ndarray:
    """r_{first} r_{second} in A (x) A (x) A; shared slots multiply, first factor on the left.

    An empty slot holds the formal unit, which acts as the identity.
    """
    A = rt.algebra
    F = A.field
    letters_first = dict(zip(_LEGS[first], "pq"))
    letters_second = dict(zip(_LEGS[second], "uv"))
    ops, specs, out = [rt.r, rt.r], ["pq", "uv"], ""
    for slot, fresh in zip(range(3), "xyz"):
        a, b = letters_first.get(slot), letters_second.get(slot)
        if a and b:
            ops.append(A.sc)
            specs.append(a + b + fresh)
            out += fresh
        else:
            out += a or b
    return F.einsum(",".join(specs) + "->" + out, *ops)


def _combo(rt: RTensor, terms) -> np.ndarray:
    F = rt.field
    total = F.zeros((rt.algebra.dim,) * 3)
    for sign, first, second in terms:
        val = leg_product(rt, first, second)
        total = F.add(total, val) if sign > 0 else F.sub(total, val)
    return total


def p_tensor(rt: RTensor) -> np.ndarray:
    return _combo(rt, [(1, "13", "12"), (-1, "13", "23"), (1, "23", "12"), (-1, "12", "23")])


def q_tensor(rt: RTensor) -> np.ndarray:
    return _combo(rt, [(1, "13", "12"), (-1, "13", "32"), (1, "23", "12"), (-1, "12", "23")])


def s_tensor(rt: RTensor) -> np.ndarray:
    return _combo(rt, [(1, "12", "23"), (1, "13", "23"), (-1, "12", "13"), (-1, "23", "13")])


def t_tensor(rt: RTensor) -> np.ndarray:
    return _combo(rt, [(1, "12", "23"), (1, "13", "32"), (-1, "13", "12"), (-1, "32", "12")])


def m_tensor(rt: RTensor, a: int) -> np.ndarray:
    """(id (x) L(e_a) (x) id)(r32 r12 - r23 r12) + (id (x) R(e_a) (x) id)(r12 r23 - r12 r32)."""
    F, sc = rt.field, rt.algebra.sc
    X = _combo(rt, [(1, "32", "12"), (-1, "23", "12")])
    Y = _combo(rt, [(1, "12", "23"), (-1, "12", "32")])
    return F.add(F.einsum("yk,xyz->xkz", sc[a], X), F.einsum("yk,xyz->xkz", sc[:, a], Y))


@dataclass(frozen=True)
class PQSTM:
    P: np.ndarray
    Q: np.ndarray
    S: np.ndarray
    T: np.ndarray
    M: np.ndarray      # stacked over the basis element a


def pqstm_tensors(rt: RTensor) -> PQSTM:
    n = rt.algebra.dim
    M = np.stack([m_tensor(rt, a) for a in range(n)]) if n else rt.field.zeros((0, 0, 0, 0))
    return PQSTM(p_tensor(rt), q_tensor(rt), s_tensor(rt), t_tensor(rt), M)


def _on_slot(F: Field, M, slot: int, X) -> np.ndarray:
    """Apply the stack M[a] (as M[a, y, k]: e_y -> e_k) to one slot of a 3-tensor."""
    spec = ("ayk,yvw->akvw", "ayk,uyw->aukw", "ayk,uvy->auvk")[slot]
    return F.einsum(spec, M, X)


def coalg2_residual(rt: RTensor) -> np.ndarray:
    """(id (x) Delta)Delta(e_a) - (id (x) tau Delta)Delta(e_a) written through leg products."""
    A = rt.algebra
    F, sc = A.field, A.sc
    LmR = F.sub(sc, np.transpose(sc, (1, 0, 2)))
    mid = _combo(rt, [(1, "12", "23"), (-1, "12", "32")])
    last = _combo(rt, [(1, "13", "23"), (-1, "13", "32")])
    first = _combo(rt, [(1, "12", "23"), (-1, "12", "32"), (1, "13", "23"), (-1, "13", "32"),
                        (-1, "23", "13"), (1, "32", "12")])
    return F.add(_on_slot(F, LmR, 1, mid), _on_slot(F, LmR, 2, last), _on_slot(F, sc, 0, first))


def check_dual_coalgebra_conditions(rt: RTensor, mode: str = "derived") -> Verdict:
    """coalg1 and coalg2 for every basis element a.

    coalg1 is (id (x) id (x) (L - R)(a)) P = (L(a) (x) id (x) id) S.  For coalg2
    ``literal`` uses Q, T and M; ``derived`` is the expansion of
    (id (x) Delta)Delta - (id (x) tau Delta)Delta, which must vanish:

        (id (x) (L - R)(a) (x) id)(r12 r23 - r12 r32)
      + (id (x) id (x) (L - R)(a))(r13 r23 - r13 r32)
      + (L(a) (x) id (x) id)(r12 r23 - r12 r32 + r13 r23 - r13 r32 - r23 r13 + r32 r12).
    """
    if mode not in COB_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    A = rt.algebra
    F, sc = A.field, A.sc
    t = pqstm_tensors(rt)
    LmR = F.sub(sc, np.transpose(sc, (1, 0, 2)))     # (L - R)(e_a) e_z = LmR[a, z, .]
    found = []
    found += mismatches("coalg1", [F.einsum("azk,xyz->axyk", LmR, t.P),
                                   F.einsum("axk,xyz->akyz", sc, t.S)], 3)
    if mode == "literal":
        found += mismatches("coalg2", [F.einsum("azk,xyz->axyk", LmR, t.Q),
                                       F.add(F.einsum("axk,xyz->akyz", sc, t.T), t.M)], 3)
    else:
        found += mismatches("coalg2", [coalg2_residual(rt), F.zeros((A.dim,) * 4)], 3)
    return Verdict.of(found)


def s_equation_residual(rt: RTensor) -> np.ndarray:
    return p_tensor(rt)


def is_s_solution(rt: RTensor) -> bool:
    return not np.count_nonzero(s_equation_residual(rt))


# -- r as a map ------------------------------------------------------------------

def r_sharp(rt: RTensor) -> np.ndarray:
    """<r#(u1), u2> = <r, u1 (x) u2>; columns are images of the dual basis."""
    return freeze(np.array(rt.r.T))


def check_biline_condition(rt: RTensor) -> Verdict:
    """w(a1a2, a3) + w(a1a3, a2) = w(a3a2, a1) + w(a3a1, a2) for w the inverse of r#."""
    if not rt.symmetric:
        raise NotSymmetric("r is not symmetric")
    A = rt.algebra
    F, sc = A.field, A.sc
    inv = mat_inverse(F, r_sharp(rt))
    if inv is None:
        raise Singular("r is degenerate")
    W = inv       # w(e_p, e_q) = <e_p, inv(r#) e_q> = inv[p, q]
    T = lambda *terms: _terms(F, "ijk", terms)  # noqa: E731
    return Verdict.of(mismatches("biline", [T((1, "ijx,xk", sc, W), (1, "ikx,xj", sc, W)),
                                            T((1, "kjx,xi", sc, W), (1, "kix,xj", sc, W))], 0))


def induced_dual_product(rt: RTensor) -> np.ndarray:
    """b1 b2 = R*(r# b2) b1 + R*(r# b1) b2 - L*(r# b1) b2, as structure constants on A*."""
    A = rt.algebra
    F, sc = A.field, A.sc
    s = r_sharp(rt)
    return _terms(F, "ijq", [(1, "xj,qxi", s, sc), (1, "xi,qxj", s, sc), (-1, "xi,xqj", s, sc)])


def check_solut_condition(rt: RTensor) -> Verdict:
    """r#(b1) r#(b2) = r#(R*(r# b1) b2 - L*(r# b1) b2 + R*(r# b2) b1) on dual basis pairs."""
    if not rt.symmetric:
        raise NotSymmetric("r is not symmetric")
    A = rt.algebra
    F, sc = A.field, A.sc
    s = r_sharp(rt)
    lhs = F.einsum("xi,yj,xym->ijm", s, s, sc)
    rhs = F.einsum("ijq,mq->ijm", induced_dual_product(rt), s)
    return Verdict.of(mismatches("solut", [lhs, rhs]))


@dataclass(frozen=True)
class InducedDual:
    algebra: PermAlgebra          # A* with the induced product
    morphism: Verdict             # r# multiplicative A* -> A
    matches_coboundary: bool      # equals the dual of coboundary_delta(r)
    isomorphism: bool             # r# bijective and multiplicative


def induced_dual_from_r(rt: RTensor) -> InducedDual:
    A = rt.algebra
    F = A.field
    dual = PermAlgebra(F, induced_dual_product(rt), dual_basis(A))
    s = r_sharp(rt)
    morph = Verdict.of(morphism_violations(dual, A, s))
    match = same(dual.sc, dual_product(coboundary_delta(rt)).algebra.sc)
    iso = morph.ok and mat_inverse(F, s) is not None
    return InducedDual(dual, morph, match, iso)
