import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES, GF3, Q, fixture
from permlab.errors import ParseError
from permlab.io import (MissingBlock, algebra_to_obj, dumps, emit_algebra, field_from_name,
                        fmt_map, load, loads)
from permlab.perm_core import PermAlgebra

BASE = {"field": {"kind": "rational"}, "dim": 2,
        "products": [{"left": "e1", "right": "e1", "result": {"e1": "1"}}]}


def doc(**changes) -> str:
    d = dict(BASE)
    d.update(changes)
    return json.dumps({k: v for k, v in d.items() if v is not None})


ALL_FIXTURES = sorted(p.name for p in FIXTURES.glob("*.json"))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_every_fixture_parses(name):
    d = fixture(name)
    assert d.algebra.dim == d.doc["dim"]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_emission_is_a_fixed_point(name):
    A = fixture(name).algebra
    text = emit_algebra(A)
    again = loads(text).algebra
    assert again == A
    assert emit_algebra(again) == text


@pytest.mark.parametrize("text,needle", [
    ("[1, 2]", "top level"),
    ("{", "invalid JSON"),
    (doc(extra=1), "unknown keys"),
    (doc(dim=None), "missing 'dim'"),
    (doc(field={"kind": "prime", "p": 4}), "field"),
    (doc(field={"kind": "prime", "p": "5"}), "integer"),
    (doc(field={"kind": "rational", "p": 5}), "takes no p"),
    (doc(field={"kind": "real"}), "unknown kind"),
    (doc(dim=-1), "non-negative"),
    (doc(basis=["a", "a"]), "distinct"),
    (doc(products=[{"left": "e1", "right": "e9", "result": {}}]), "unknown or missing"),
    (doc(products=[{"left": "e1", "right": "e1", "result": {"e1": 1.5}}]), "string or integer"),
    (doc(products=[{"left": "e1", "right": "e1", "result": {"e1": "x"}}]), "x"),
    (doc(products=[{"left": "e1", "right": "e1"}] * 2), "given twice"),
    (doc(products=[{"left": "e1", "right": "e1", "sum": {}}]), "unknown keys"),
    (doc(field={"kind": "prime", "p": 3}, products=[{"left": "e1", "right": "e1", "result": {"e1": 3}}]),
     "not in [0, 3)"),
])
def test_strict_parsing(text, needle):
    with pytest.raises(ParseError) as err:
        loads(text)
    assert needle in str(err.value)


def test_block_errors():
    d = loads(doc())
    with pytest.raises(MissingBlock):
        d.datum()
    bad = loads(doc(datum={"m": 1, "br": [["1"]]}))
    with pytest.raises(ParseError):
        bad.datum()
    with pytest.raises(ParseError):
        loads(doc(datum={"m": 1, "xx": []})).datum()
    with pytest.raises(ParseError):
        loads(doc(r=[["1", "0"], ["0"]])).r()
    with pytest.raises(ParseError):
        loads(doc(extension={"kernel": ["e7"]})).extension()
    with pytest.raises(MissingBlock):
        loads(doc(map={"target": BASE_TARGET})).map()


BASE_TARGET = {"dim": 2, "products": []}


def test_missing_file():
    with pytest.raises(ParseError):
        load(FIXTURES / "does_not_exist.json")


def test_field_names():
    assert field_from_name("Q").p == 0
    assert field_from_name("gf7").p == 7
    for bad in ("gf4", "gfx", "reals"):
        with pytest.raises(ParseError):
            field_from_name(bad)


def test_map_images_are_columns():
    target, M = fixture("iso_A2_A1.json").map()
    assert target.dim == 2
    # f(e1) = 2(e1 + e2), f(e2) = e2
    assert list(M[:, 0]) == [2, 2] and list(M[:, 1]) == [0, 1]
    assert fmt_map(Q, M) == [["2", "2"], ["0", "1"]]


def test_dumps_is_stable():
    obj = algebra_to_obj(fixture("class_i.json").algebra)
    assert dumps(obj) == dumps(json.loads(dumps(obj)))
    assert dumps(obj).endswith("\n")


@given(st.lists(st.integers(0, 2), min_size=8, max_size=8))
def test_roundtrip_random_gf3(flat):
    A = PermAlgebra(GF3, GF3.array(flat).reshape(2, 2, 2))
    B = loads(emit_algebra(A)).algebra
    assert np.array_equal(A.sc, B.sc) and B.field == GF3


def test_empty_algebra():
    d = fixture("empty.json")
    assert d.algebra.dim == 0
    assert emit_algebra(d.algebra) == emit_algebra(loads(emit_algebra(d.algebra)).algebra)
