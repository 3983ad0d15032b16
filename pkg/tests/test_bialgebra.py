import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES, GF2, GF3, Q, class_i, fixture
from oracles import perm_tables, s_residual
from permlab.bialgebra import (Comultiplication, RTensor, bialg_violations, check_biline_condition,
                               check_cob_conditions, check_dual_coalgebra_conditions,
                               check_matched_pair_dual, check_perm_bialgebra,
                               check_solut_condition, coboundary_delta, dual_product,
                               induced_dual_from_r, is_s_solution, manin_check,
                               manin_triple_from_bialgebra, pqstm_tensors, r_sharp,
                               s_equation_residual, standard_form)
from permlab.errors import InvalidBialgebra, NotSymmetric, Singular
from permlab.kernel import Field, mat_inverse, twist
from permlab.perm_core import PermAlgebra, check_invariant_form, check_perm, is_subalgebra

LABELS = ("e1", "e2")


def tensor_from_words(F: Field, words: dict) -> np.ndarray:
    out = F.zeros((2, 2, 2))
    for word, coef in words.items():
        out[tuple(LABELS.index(w) for w in word.split())] = F.parse(coef)
    return out


def divergent(name: str) -> dict:
    return json.loads((FIXTURES / "divergent" / name).read_text())


def family(k1, k2) -> Comultiplication:
    A = class_i(Q)
    d = Q.zeros((2, 2, 2))
    d[0, 1, 1], d[1, 1, 1] = Q(k1), Q(k2)
    return Comultiplication(A, d)


# -- the bialgebra family and its Manin triples ---------------------------------------

@pytest.mark.parametrize("k1,k2", [(1, 1), (-1, 2), (0, 3)])
def test_family_is_bialgebra(k1, k2):
    delta = family(k1, k2)
    assert check_perm_bialgebra(delta).ok
    assert fixture(f"bialg_{k1}_{k2}.json").delta() == delta


@pytest.mark.parametrize("k1,k2", [(1, 1), (-1, 2), (0, 3)])
def test_manin_triple(k1, k2):
    mt = manin_triple_from_bialgebra(family(k1, k2))
    assert mt.verdict.ok
    E, G = mt.E, mt.omega_hat
    assert E.dim == 4 and check_perm(E).ok
    assert check_invariant_form(E, G, skew=True, nondegenerate=True).ok
    eye = Q.eye(4)
    assert is_subalgebra(E, list(eye[:, :2].T)) and is_subalgebra(E, list(eye[:, 2:].T))
    assert not np.any(G[:2, :2]) and not np.any(G[2:, 2:])


def test_bad_delta():
    delta = fixture("bialg_bad.json").delta()
    assert not check_perm_bialgebra(delta).ok
    with pytest.raises(InvalidBialgebra):
        manin_triple_from_bialgebra(delta)
    assert not manin_check(delta.algebra, dual_product(delta).algebra).verdict.ok


@pytest.fixture(scope="module")
def gf2_bialgebras():
    algs = [PermAlgebra(GF2, np.array(t, dtype=np.int64).reshape(2, 2, 2)) for t in perm_tables(2, 2)]
    return [(A, Comultiplication(A, d)) for A in algs for d in GF2.tensors((2, 2, 2))]


def test_bialgebra_iff_manin_exhaustive_gf2(gf2_bialgebras):
    valid = 0
    for A, delta in gf2_bialgebras:
        ok = check_perm_bialgebra(delta).ok
        assert ok == manin_check(A, dual_product(delta).algebra).verdict.ok
        valid += ok
    assert valid == 154


def test_listed_dual_pair_families_agree(gf2_bialgebras):
    for A, delta in gf2_bialgebras[::3]:
        dual = dual_product(delta)
        if not dual.perm_verdict.ok:
            continue
        assert check_matched_pair_dual(A, dual.algebra).agree


def test_dual_product_verdicts_agree(gf2_bialgebras):
    for _, delta in gf2_bialgebras[::5]:
        dual = dual_product(delta)
        assert dual.verdict.ok == dual.perm_verdict.ok


@given(st.lists(st.integers(0, 2), min_size=8, max_size=8), st.integers(0, 112))
def test_negation_closure(census_gf3, flat, i):
    A = census_gf3[i]
    delta = Comultiplication(A, GF3.array(flat).reshape(2, 2, 2))
    assert check_perm_bialgebra(delta).ok == check_perm_bialgebra(-delta).ok


# -- S-equation fixtures -------------------------------------------------------------

def test_symmetric_solution():
    d = fixture("sequ_solution.json")
    rt = d.r()
    assert rt.symmetric and is_s_solution(rt)
    delta = coboundary_delta(rt)
    expected = Q.zeros((2, 2, 2))
    expected[0, 1, 1] = Q(-1)
    assert np.array_equal(delta.delta, expected)
    assert check_perm_bialgebra(delta).ok
    # the sign printed in the divergent fixture is also a member of the family
    div = divergent("sequ_delta.json")
    assert div["derived"]["e1"] == {"e2 e2": "-1"}
    assert check_perm_bialgebra(-delta).ok


def test_nonsolution_residual_matches_oracle():
    rt = fixture("sequ_nonsolution.json").r()
    res = s_equation_residual(rt)
    oracle = s_residual(rt.algebra.sc.tolist(), rt.r.tolist())
    assert res.tolist() == oracle
    div = divergent("sequ_residual.json")
    assert np.array_equal(res, tensor_from_words(Q, div["derived"]))
    assert not np.array_equal(res, tensor_from_words(Q, div["printed"]))
    delta = coboundary_delta(rt)
    assert delta.delta[1, 1, 1] == 2 and delta.delta[0, 1, 1] == -1


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_residual_oracle_over_q(flat):
    A = class_i(Q)
    r = [[Fraction(flat[0]), Fraction(flat[1])], [Fraction(flat[2]), Fraction(flat[3])]]
    assert s_equation_residual(RTensor(A, r)).tolist() == s_residual(A.sc.tolist(), r)


def test_zero_r():
    rt = RTensor(class_i(Q))
    assert is_s_solution(rt)
    assert not np.any(coboundary_delta(rt).delta)
    assert check_cob_conditions(rt).ok and check_solut_condition(rt).ok
    with pytest.raises(Singular):
        check_biline_condition(rt)


def test_r_sharp_and_induced_dual():
    rt = fixture("sequ_solution.json").r()
    s = r_sharp(rt)
    assert not np.any(s[:, 0]) and list(s[:, 1]) == [0, 1]
    ind = induced_dual_from_r(rt)
    expected = Q.zeros((2, 2, 2))
    expected[1, 1, 0] = Q(-1)
    assert np.array_equal(ind.algebra.sc, expected)
    assert ind.morphism.ok and ind.matches_coboundary and not ind.isomorphism


def test_symmetry_required():
    rt = RTensor(class_i(Q), [[0, 1], [0, 0]])
    with pytest.raises(NotSymmetric):
        check_solut_condition(rt)
    with pytest.raises(NotSymmetric):
        check_biline_condition(rt)


# -- the iff chain, exhaustively over GF(3) ------------------------------------------

def chain_disagreements(rt: RTensor) -> list:
    """Every equivalence in the coboundary chain that fails for this r."""
    bad = []
    delta = coboundary_delta(rt)
    bialg = not bialg_violations(delta)
    if check_cob_conditions(rt).ok != bialg:
        bad.append("cob")
    if check_dual_coalgebra_conditions(rt).ok != dual_product(delta).verdict.ok:
        bad.append("coalg")
    if rt.symmetric:
        ind = induced_dual_from_r(rt)
        if not ind.matches_coboundary:
            bad.append("induced")
        sol = is_s_solution(rt)
        if check_solut_condition(rt).ok != sol:
            bad.append("solut")
        nondeg = mat_inverse(rt.field, r_sharp(rt)) is not None
        if nondeg and check_biline_condition(rt).ok != sol:
            bad.append("biline")
        if sol and not (ind.morphism.ok and check_perm_bialgebra(delta).ok):
            bad.append("solution")
        if sol and nondeg and not ind.isomorphism:
            bad.append("iso")
    return bad


def test_iff_chain_q_fixtures():
    for name in ("sequ_solution.json", "sequ_nonsolution.json"):
        assert chain_disagreements(fixture(name).r()) == []


def test_iff_chain_exhaustive_gf3(census_gf3):
    assert len(census_gf3) == 113
    solutions = 0
    for A in census_gf3:
        for r in GF3.tensors((2, 2)):
            rt = RTensor(A, r)
            assert chain_disagreements(rt) == []
            solutions += rt.symmetric and is_s_solution(rt)
    assert solutions > 113     # r = 0 is always one


def test_iff_chain_gf3_fixture():
    rt = fixture("sequ_gf3.json").r()
    assert rt.field == GF3 and chain_disagreements(rt) == []


def test_literal_coalg2_disagrees(census_gf3):
    bad = sum(check_dual_coalgebra_conditions(RTensor(A, r), "literal").ok
              != dual_product(coboundary_delta(RTensor(A, r))).verdict.ok
              for A in census_gf3[::4] for r in GF3.tensors((2, 2)))
    assert bad > 0


def test_literal_cob2_disagrees(census_gf3):
    bad = 0
    for A in census_gf3[::4]:
        for r in GF3.tensors((2, 2)):
            rt = RTensor(A, r)
            bad += check_cob_conditions(rt, "literal").ok != (not bialg_violations(coboundary_delta(rt)))
    assert bad > 0


# -- the P, Q, S, T, M tensors -----------------------------------------------------

@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.integers(0, 112))
def test_s_is_twisted_t_for_symmetric_r(census_gf3, flat, i):
    r = GF3.array([[flat[0], flat[1]], [flat[1], flat[3]]])
    t = pqstm_tensors(RTensor(census_gf3[i], r))
    assert np.array_equal(t.S, twist(t.T, (0, 2, 1)))
    assert np.array_equal(t.P, t.Q)
    assert np.array_equal(t.P, GF3.neg(t.T))
    assert not np.any(t.M)


def test_s_twist_needs_symmetry(census_gf3):
    found = False
    for A in census_gf3[::7]:
        for r in GF3.tensors((2, 2)):
            t = pqstm_tensors(RTensor(A, r))
            found |= not np.array_equal(t.S, twist(t.T, (0, 2, 1)))
    assert found


def test_standard_form_is_skew():
    G = standard_form(Q, 3)
    assert np.array_equal(G.T, Q.neg(G))
    assert mat_inverse(Q, G) is not None
