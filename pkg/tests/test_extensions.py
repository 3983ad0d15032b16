import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import GF2, GF3, Q, class_i, fixture
from oracles import perm_tables
from permlab.errors import (BadProjection, DimensionMismatch, InvalidDatum,
                            InvalidDeformationMap, NotSubalgebra, RhoNotInvertible)
from permlab.extensions import (SLOTS, EquivalencePair, ExtendingDatum, MatchedPair,
                                bicrossed_product, check_datum_equivalence, check_factorization,
                                classify_complements, complement_isomorphism,
                                complement_iso_classes, decompose_extension, deform_complement,
                                deformation_equivalent, deformation_maps, equivalence_map,
                                equivalence_morphism, extending_ok_batch, graph_embedding,
                                is_deformation_map, subalgebra_on, unified_product,
                                validate_extending_structure, validate_matched_pair)
from permlab.kernel import Field, general_linear, mat_inverse, rank
from permlab.perm_core import PermAlgebra, check_morphism, check_perm, is_subalgebra


def shapes(n, m):
    return {"br": (n, m, m), "bl": (m, n, m), "tr": (m, n, n), "tl": (n, m, n),
            "chi": (m, m, n), "dot": (m, m, m)}


def all_datums(A: PermAlgebra, m: int):
    F = A.field
    sh = shapes(A.dim, m)
    sizes = [int(np.prod(sh[s])) for s in SLOTS]
    for flat in F.tensors((sum(sizes),)):
        parts, at = {}, 0
        for s, size in zip(SLOTS, sizes):
            parts[s] = flat[at:at + size].reshape(sh[s])
            at += size
        yield ExtendingDatum(A, m, **parts)


def random_datum(F: Field, A: PermAlgebra, m: int, rng, density=0.35) -> ExtendingDatum:
    parts = {}
    for s, shape in shapes(A.dim, m).items():
        vals = rng.integers(0, F.p, shape) * (rng.random(shape) < density)
        parts[s] = F.array(vals)
    return ExtendingDatum(A, m, **parts)


ONE_DIM = {"zero": PermAlgebra.zero(GF2, 1),
           "idempotent": PermAlgebra.from_table(GF2, 1, {(0, 0): {0: 1}})}


# -- the central law: validator iff the unified product is perm ------------------------

@pytest.mark.parametrize("name", sorted(ONE_DIM))
def test_validator_iff_perm_exhaustive_gf2(name):
    A = ONE_DIM[name]
    valid = 0
    for d in all_datums(A, 1):
        ok = validate_extending_structure(d).ok
        assert ok == check_perm(unified_product(d, checked=False)).ok
        valid += ok
    assert valid > 0


def test_validator_iff_perm_random_gf3(census_gf3, rng):
    valid = 0
    for t in range(1000):
        A = census_gf3[rng.integers(len(census_gf3))]
        d = random_datum(GF3, A, 1, rng, density=0.15 if t % 2 else 0.4)
        ok = validate_extending_structure(d).ok
        assert ok == check_perm(unified_product(d, checked=False)).ok
        valid += ok
    assert valid >= 50


def test_batch_matches_single(census_gf3, rng):
    ds = [random_datum(GF3, census_gf3[rng.integers(len(census_gf3))], 1, rng, 0.2) for _ in range(60)]
    for A in {d.A for d in ds}:
        group = [d for d in ds if d.A == A]
        batch = extending_ok_batch(A, 1, **{s: np.stack([getattr(d, s) for d in group]) for s in SLOTS})
        assert batch.tolist() == [validate_extending_structure(d).ok for d in group]


def test_batch_rejects_ragged():
    A = class_i(GF2)
    with pytest.raises(DimensionMismatch):
        extending_ok_batch(A, 1, br=GF2.zeros((2, 2, 1, 1)), bl=GF2.zeros((3, 1, 2, 1)))


def test_zero_datum_is_direct_sum():
    A = class_i(Q)
    V = PermAlgebra.from_table(Q, 1, {(0, 0): {0: 1}})
    d = ExtendingDatum(A, 1, dot=V.sc)
    E = unified_product(d)
    assert check_perm(E).ok
    assert np.array_equal(E.sc[:2, :2, :2], A.sc)
    assert E.sc[2, 2, 2] == 1
    assert not np.any(E.sc[:2, 2]) and not np.any(E.sc[2, :2])


def test_unified_product_refuses_invalid():
    with pytest.raises(InvalidDatum):
        unified_product(fixture("datum_bad.json").datum())


def test_subalgebra_on():
    E = fixture("A1.json").algebra
    A = subalgebra_on(E, [0, 1])
    assert np.array_equal(A.sc, class_i(Q).sc)
    with pytest.raises(NotSubalgebra):
        subalgebra_on(fixture("A3.json").algebra, [0, 2])


def test_decompose_roundtrip(rng):
    A = class_i(GF3)
    for _ in range(100):
        d = random_datum(GF3, A, 1, rng)
        E = unified_product(d, checked=False)
        assert decompose_extension(E, range(2)) == d


def test_decompose_with_projection():
    E = fixture("A1.json").algebra
    with pytest.raises(DimensionMismatch):
        decompose_extension(E, [0, 1], Q.zeros((3, 3)))
    with pytest.raises(BadProjection):
        decompose_extension(E, [0, 1], Q.zeros((2, 3)))
    # sliding x along e1 gives an equivalent datum with the same unified product
    pi = Q.array([[1, 0, 1], [0, 1, 0]])
    d = decompose_extension(E, [0, 1], pi)
    assert check_perm(unified_product(d)).ok


# -- datum equivalence ---------------------------------------------------------------

def test_datum_equivalence_matches_morphism(rng):
    A = class_i(GF3)
    checked = agree = 0
    for t in range(300):
        m = 1 + t % 2
        d = random_datum(GF3, A, m, rng, 0.3)
        lam = GF3.array(rng.integers(0, 3, (2, m)))
        rho = GF3.array(rng.integers(0, 3, (m, m)))
        if mat_inverse(GF3, rho) is None:
            continue
        pair = EquivalencePair(lam, rho)
        if t % 3:
            # transport d along the map so the pair is a genuine equivalence
            E = unified_product(d, checked=False)
            M = equivalence_map(d, pair)
            d2 = decompose_extension(E.transport(mat_inverse(GF3, M)), range(2))
        else:
            d2 = random_datum(GF3, A, m, rng, 0.3)
        a = check_datum_equivalence(d, d2, pair).ok
        b = check_morphism(equivalence_morphism(d, d2, pair)).ok
        assert a == b
        checked += 1
        agree += a
    assert checked > 100 and agree > 50


# -- matched pairs -------------------------------------------------------------------------

def test_matched_dual_fixture():
    d = fixture("matched_dual.json")
    datum = d.datum()
    assert validate_extending_structure(datum).ok
    V = PermAlgebra(Q, datum.dot)
    mp = MatchedPair(d.algebra, V, datum.br, datum.bl, datum.tr, datum.tl)
    assert validate_matched_pair(mp).ok
    E = bicrossed_product(mp)
    assert check_perm(E).ok and check_factorization(E, 2)


def test_matched_pair_from_factorization():
    E = fixture("A1.json").algebra
    mp = MatchedPair.from_extension(E, [0, 1])
    assert validate_matched_pair(mp).ok
    assert np.array_equal(bicrossed_product(mp).sc, E.sc)


def test_check_factorization_rejects():
    E = fixture("A2.json").algebra
    assert check_factorization(E, 2)
    # with e1 e1 = e1 in A and x x = x the 2 + 1 split holds, but 1 + 2 needs {e2, x} closed
    assert is_subalgebra(E, [Q.unit(3, 1), Q.unit(3, 2)]) == check_factorization(
        PermAlgebra(Q, E.sc[np.ix_([1, 2, 0], [1, 2, 0], [1, 2, 0])]), 2)


# -- deformation maps ----------------------------------------------------------------

def a4_pair(F: Field) -> MatchedPair:
    E = PermAlgebra.from_table(F, 3, {(0, 0): {0: 1}, (1, 0): {1: 1}, (2, 0): {2: 1}})
    return MatchedPair.from_extension(E, [0, 1])


def small_matched_pairs():
    """Every matched pair with dim A = dim V = 1 over GF(2)."""
    algs = [PermAlgebra(GF2, GF2.array(t).reshape(1, 1, 1)) for t in perm_tables(2, 1)]
    for A, V in itertools.product(algs, repeat=2):
        for flat in GF2.tensors((4,)):
            mp = MatchedPair(A, V, *(flat[i].reshape(1, 1, 1) for i in range(4)))
            if validate_matched_pair(mp).ok:
                yield mp


@pytest.mark.parametrize("p", [2, 3])
def test_deformation_iff_graph_subalgebra(p):
    F = Field(p)
    mp = a4_pair(F)
    E = bicrossed_product(mp)
    for psi in F.tensors((2, 1)):
        graph = graph_embedding(mp, psi)
        closed = is_subalgebra(E, list(graph.T))
        assert is_deformation_map(mp, psi).ok == closed
        if closed:
            assert check_perm(deform_complement(mp, psi)).ok


def test_deformation_iff_graph_small_pairs():
    for mp in small_matched_pairs():
        E = bicrossed_product(mp)
        for psi in GF2.tensors((1, 1)):
            closed = is_deformation_map(mp, psi).ok
            assert closed == is_subalgebra(E, list(graph_embedding(mp, psi).T))


def test_corrected_equivalence_matches_isomorphism():
    """The corrected reading agrees with rho: V_psi -> V_phi being an isomorphism."""
    literal_disagree = 0
    pairs = [a4_pair(GF2), a4_pair(GF3)] + list(small_matched_pairs())
    for mp in pairs:
        F = mp.field
        maps = deformation_maps(mp)
        for psi, phi in itertools.product(maps, repeat=2):
            for g in general_linear(F, mp.V.dim):
                iso = complement_isomorphism(mp, psi, phi, g).ok
                assert deformation_equivalent(mp, psi, phi, g).ok == iso
                literal_disagree += deformation_equivalent(mp, psi, phi, g, "literal").ok != iso
    assert literal_disagree > 0


def test_complement_index_counts_iso_classes():
    for mp in [a4_pair(GF2), a4_pair(GF3)] + list(small_matched_pairs()):
        classes = classify_complements(mp)
        assert classes.index == complement_iso_classes(mp)
        assert sum(len(c) for c in classes.classes) == len(classes.deformation_maps)


def test_deformation_errors():
    mp = a4_pair(GF3)
    with pytest.raises(DimensionMismatch):
        is_deformation_map(mp, GF3.zeros((1, 1)))
    with pytest.raises(RhoNotInvertible):
        deformation_equivalent(mp, GF3.zeros((2, 1)), GF3.zeros((2, 1)), GF3.zeros((1, 1)))
    assert all(is_deformation_map(mp, psi).ok for psi in GF3.tensors((2, 1)))
    for small in small_matched_pairs():
        bad = [psi for psi in GF2.tensors((1, 1)) if not is_deformation_map(small, psi).ok]
        for psi in bad:
            with pytest.raises(InvalidDeformationMap):
                deform_complement(small, psi)


def test_zero_psi_gives_v():
    mp = a4_pair(GF3)
    V = deform_complement(mp, GF3.zeros((2, 1)))
    assert np.array_equal(V.sc, mp.V.sc)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_unified_product_dims(flat):
    A = PermAlgebra.zero(GF3, 1)
    d = ExtendingDatum(A, 1, **{s: GF3.array([v]).reshape(1, 1, 1) for s, v in zip(SLOTS, flat)})
    E = unified_product(d, checked=False)
    assert E.dim == 2
    assert validate_extending_structure(d).ok == check_perm(E).ok
