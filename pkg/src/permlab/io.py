"""JSON definition files: strict parsing and deterministic emission.

Scalars are strings ("3", "-1/2"; over GF(p) a decimal in [0, p)).  Plain
integers are accepted too.  Linear maps are lists of images, so
``images[j]`` is the image of the j-th basis vector; bilinear maps are nested
arrays indexed exactly like the structure tensors.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .bialgebra import Comultiplication, RTensor
from .errors import ParseError
from .extensions import SLOTS, ExtendingDatum
from .flag import FlagDatum
from .kernel import Field
from .nonabelian import AutPair, NonAbelianCocycle
from .perm_core import PermAlgebra, Representation, default_basis

TOP_KEYS = ("field", "dim", "basis", "products", "datum", "flag", "cocycle", "delta",
            "r", "form", "map", "rep", "extension", "pair", "note")


class MissingBlock(ParseError):
    pass


def _strict(obj: dict, allowed, where: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise ParseError(f"{where}: unknown keys {extra}")


def parse_field(obj) -> Field:
    _strict(obj, ("kind", "p"), "field")
    kind = obj.get("kind")
    if kind == "rational":
        if "p" in obj:
            raise ParseError("field: rational field takes no p")
        return Field(0)
    if kind == "prime":
        p = obj.get("p")
        if not isinstance(p, int) or isinstance(p, bool):
            raise ParseError("field: p must be an integer")
        try:
            return Field(p)
        except ValueError as exc:
            raise ParseError(f"field: {exc}") from None
    raise ParseError(f"field: unknown kind {kind!r}")


def field_from_name(name: str) -> Field:
    """'q', 'rational' or 'gf<p>'."""
    s = name.strip().lower()
    if s in ("q", "rational", "rationals"):
        return Field(0)
    if s.startswith("gf"):
        try:
            return Field(int(s[2:]))
        except ValueError:
            pass
    raise ParseError(f"unknown field {name!r}")


def scalar(F: Field, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{where}: scalar must be a string or integer, got {x!r}")
    if isinstance(x, int) and F.p and not 0 <= x < F.p:
        raise ParseError(f"{where}: {x} not in [0, {F.p})")
    return F.parse(x) if isinstance(x, str) else F(x)


def tensor(F: Field, data, shape: tuple, where: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=object)
    except ValueError:
        raise ParseError(f"{where}: ragged array") from None
    if arr.shape != tuple(shape):
        raise ParseError(f"{where}: expected shape {tuple(shape)}, got {arr.shape}")
    out = F.zeros(shape)
    for idx in np.ndindex(*shape):
        out[idx] = scalar(F, arr[idx], where)
    return out


def linear_map(F: Field, images, rows: int, cols: int, where: str) -> np.ndarray:
    """List of ``cols`` images, each of length ``rows``; returns the rows x cols matrix."""
    if cols == 0:
        if images not in ([], None):
            raise ParseError(f"{where}: expected no images")
        return F.zeros((rows, 0))
    return tensor(F, images, (cols, rows), where).T.copy()


def _labels(obj, n: int, where: str, prefix: str = "e") -> tuple:
    if obj is None:
        return default_basis(n, prefix)
    if (not isinstance(obj, list) or len(obj) != n
            or not all(isinstance(x, str) and x for x in obj) or len(set(obj)) != n):
        raise ParseError(f"{where}: basis must be {n} distinct labels")
    return tuple(obj)


def parse_products(F: Field, rows, basis: tuple, where: str = "products") -> np.ndarray:
    n = len(basis)
    index = {b: i for i, b in enumerate(basis)}
    sc = F.zeros((n, n, n))
    if not isinstance(rows, list):
        raise ParseError(f"{where}: expected a list")
    seen = set()
    for k, row in enumerate(rows):
        at = f"{where}[{k}]"
        _strict(row, ("left", "right", "result"), at)
        try:
            i, j = index[row["left"]], index[row["right"]]
        except KeyError as exc:
            raise ParseError(f"{at}: unknown or missing label {exc}") from None
        if (i, j) in seen:
            raise ParseError(f"{at}: product {row['left']}{row['right']} given twice")
        seen.add((i, j))
        result = row.get("result", {})
        if not isinstance(result, dict):
            raise ParseError(f"{at}: result must be an object")
        for label, c in result.items():
            if label not in index:
                raise ParseError(f"{at}: unknown label {label!r}")
            sc[i, j, index[label]] = scalar(F, c, at)
    return sc


def parse_algebra_obj(obj: dict, F: Field | None = None, where: str = "algebra") -> PermAlgebra:
    allowed = ("dim", "basis", "products") if F is not None else ("field", "dim", "basis", "products")
    _strict(obj, allowed, where)
    if F is None:
        if "field" not in obj:
            raise MissingBlock(f"{where}: missing field")
        F = parse_field(obj["field"])
    n = obj.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"{where}: dim must be a non-negative integer")
    basis = _labels(obj.get("basis"), n, f"{where}.basis")
    sc = parse_products(F, obj.get("products", []), basis, f"{where}.products")
    return PermAlgebra(F, sc, basis)


class Definition:
    """A parsed definition file: the algebra plus its raw optional blocks."""

    def __init__(self, doc: dict):
        _strict(doc, TOP_KEYS, "file")
        for key in ("field", "dim"):
            if key not in doc:
                raise MissingBlock(f"file: missing {key!r}")
        self.doc = doc
        self.field = parse_field(doc["field"])
        core = {k: doc[k] for k in ("dim", "basis", "products") if k in doc}
        self.algebra = parse_algebra_obj(core, self.field, "file")

    def block(self, name: str):
        if name not in self.doc:
            raise MissingBlock(f"file has no {name!r} block")
        return self.doc[name]

    def has(self, name: str) -> bool:
        return name in self.doc

    # -- typed blocks ------------------------------------------------------
    def datum(self) -> ExtendingDatum:
        blk = self.block("datum")
        _strict(blk, ("m", "basis") + SLOTS, "datum")
        A, F = self.algebra, self.field
        m = blk.get("m")
        if not isinstance(m, int) or isinstance(m, bool) or m < 0:
            raise ParseError("datum: m must be a non-negative integer")
        n = A.dim
        shapes = {"br": (n, m, m), "bl": (m, n, m), "tr": (m, n, n),
                  "tl": (n, m, n), "chi": (m, m, n), "dot": (m, m, m)}
        maps = {s: tensor(F, blk[s], shapes[s], f"datum.{s}") for s in SLOTS if s in blk}
        labels = None if "basis" not in blk else _labels(blk["basis"], m, "datum.basis")
        return ExtendingDatum(A, m, labels, **maps)

    def flag(self) -> FlagDatum:
        blk = self.block("flag")
        _strict(blk, ("h", "g", "D", "T", "a_tilde", "k_tilde"), "flag")
        A, F = self.algebra, self.field
        n = A.dim
        get = lambda key, shape: (tensor(F, blk[key], shape, f"flag.{key}")  # noqa: E731
                                  if key in blk else F.zeros(shape))
        D = linear_map(F, blk["D"], n, n, "flag.D") if "D" in blk else F.zeros((n, n))
        T = linear_map(F, blk["T"], n, n, "flag.T") if "T" in blk else F.zeros((n, n))
        k = scalar(F, blk.get("k_tilde", "0"), "flag.k_tilde")
        return FlagDatum(A, get("h", (n,)), get("g", (n,)), D, T, get("a_tilde", (n,)), k)

    def cocycle(self) -> NonAbelianCocycle:
        blk = self.block("cocycle")
        _strict(blk, ("B", "tr", "tl", "chi"), "cocycle")
        if "B" not in blk:
            raise MissingBlock("cocycle: missing 'B'")
        A, F = self.algebra, self.field
        B = parse_algebra_obj(blk["B"], F, "cocycle.B")
        n, m = A.dim, B.dim
        shapes = {"tr": (m, n, n), "tl": (n, m, n), "chi": (m, m, n)}
        parts = {s: tensor(F, blk[s], shapes[s], f"cocycle.{s}") for s in shapes if s in blk}
        return NonAbelianCocycle(A, B, **parts)

    def delta(self) -> Comultiplication:
        n = self.algebra.dim
        return Comultiplication(self.algebra, tensor(self.field, self.block("delta"), (n, n, n), "delta"))

    def r(self) -> RTensor:
        n = self.algebra.dim
        return RTensor(self.algebra, tensor(self.field, self.block("r"), (n, n), "r"))

    def form(self) -> np.ndarray:
        n = self.algebra.dim
        return tensor(self.field, self.block("form"), (n, n), "form")

    def rep(self) -> Representation:
        blk = self.block("rep")
        _strict(blk, ("dim", "L", "R"), "rep")
        m = blk.get("dim")
        if not isinstance(m, int) or isinstance(m, bool) or m < 0:
            raise ParseError("rep: dim must be a non-negative integer")
        F, n = self.field, self.algebra.dim

        def stack(key):
            raw = blk.get(key)
            if raw is None:
                return F.zeros((n, m, m))
            if not isinstance(raw, list) or len(raw) != n:
                raise ParseError(f"rep.{key}: expected {n} maps")
            return np.stack([linear_map(F, x, m, m, f"rep.{key}[{i}]") for i, x in enumerate(raw)]) \
                if n else F.zeros((0, m, m))
        return Representation(self.algebra, stack("L"), stack("R"))

    def map(self) -> tuple:
        """(target algebra, matrix) for a morphism certificate."""
        blk = self.block("map")
        _strict(blk, ("target", "images"), "map")
        target = self.algebra if "target" not in blk else parse_algebra_obj(blk["target"], self.field,
                                                                            "map.target")
        if "images" not in blk:
            raise MissingBlock("map: missing 'images'")
        return target, linear_map(self.field, blk["images"], target.dim, self.algebra.dim, "map.images")

    def extension(self) -> tuple:
        """Kernel indices (0-based) from the labels listed under extension.kernel."""
        blk = self.block("extension")
        _strict(blk, ("kernel",), "extension")
        labels = blk.get("kernel")
        index = {b: i for i, b in enumerate(self.algebra.basis)}
        if not isinstance(labels, list) or any(x not in index for x in labels) or len(set(labels)) != len(labels):
            raise ParseError("extension.kernel: expected distinct basis labels")
        return tuple(sorted(index[x] for x in labels))

    def pair(self, n_kernel: int, n_quotient: int) -> AutPair:
        blk = self.block("pair")
        _strict(blk, ("beta", "gamma"), "pair")
        F = self.field
        beta = linear_map(F, blk.get("beta"), n_kernel, n_kernel, "pair.beta")
        gamma = linear_map(F, blk.get("gamma"), n_quotient, n_quotient, "pair.gamma")
        return AutPair(beta, gamma)


def load(path) -> Definition:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def loads(text: str) -> Definition:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("file: top level must be an object")
    return Definition(doc)


# -- emission --------------------------------------------------------------------

def fmt_tensor(F: Field, arr) -> Any:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return F.format(arr[()])
    return [fmt_tensor(F, x) for x in arr]


def fmt_map(F: Field, matrix) -> list:
    """Matrix as a list of images (columns)."""
    return [fmt_tensor(F, col) for col in np.asarray(matrix).T]


def algebra_to_obj(A: PermAlgebra, with_field: bool = True) -> dict:
    F = A.field
    rows = []
    for i in range(A.dim):
        for j in range(A.dim):
            res = {A.basis[k]: F.format(A.sc[i, j, k]) for k in range(A.dim) if A.sc[i, j, k] != 0}
            if res:
                rows.append({"left": A.basis[i], "right": A.basis[j], "result": res})
    obj = {"field": F.to_json()} if with_field else {}
    obj.update({"dim": A.dim, "basis": list(A.basis), "products": rows})
    return obj


def _plain(x):
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, default=_plain) + "\n"


def emit_algebra(A: PermAlgebra, note: str | None = None) -> str:
    obj = algebra_to_obj(A)
    if note:
        obj["note"] = note
    return dumps(obj)
