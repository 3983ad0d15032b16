"""Exact scalars, fields and dense tensors.

Tensors are numpy arrays.  Over Q the dtype is ``object`` holding
``fractions.Fraction``; over GF(p) the dtype is int64 with entries kept in
[0, p).  A :class:`Field` knows how to build, reduce and compare such
arrays, so the algebra modules never branch on the field themselves.

Conventions used everywhere:

* a bilinear map X x Y -> Z is a tensor ``t[i, j, k]`` = coefficient of z_k
  in x_i . y_j;
* a linear map is a matrix acting on column vectors, so column j is the
  image of the j-th basis vector.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (DimensionMismatch, DivisionByZero, FieldMismatch,
                     ParseError, SearchBoundExceeded, UnsupportedField)

DEFAULT_SEARCH_BOUND = 10_000_000


def search_bound(default: int = DEFAULT_SEARCH_BOUND) -> int:
    """Sweep bound, overridable through PERMLAB_MAX_SEARCH."""
    raw = os.environ.get("PERMLAB_MAX_SEARCH")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"PERMLAB_MAX_SEARCH must be an integer, got {raw!r}")
    if value < 0:
        raise ParseError("PERMLAB_MAX_SEARCH must be non-negative")
    return value


def require_bound(count: int, what: str, bound: int | None = None) -> None:
    limit = search_bound() if bound is None else bound
    if count > limit:
        raise SearchBoundExceeded(f"{what}: {count} candidates exceeds the bound {limit}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise UnsupportedField(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @cached_property
    def dtype(self):
        if self.p and self.p < 8192:
            return np.int64
        return object

    def __str__(self):
        return f"GF({self.p})" if self.p else "Q"

    def to_json(self) -> dict:
        if self.p:
            return {"kind": "prime", "p": self.p}
        return {"kind": "rational"}

    # -- scalars ---------------------------------------------------------
    def __call__(self, x):
        """Canonical scalar from an int, Fraction, Scalar or string."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"scalar over {x.field} used over {self}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (bool, float)):
            raise TypeError(f"inexact or boolean scalar {x!r}")
        if isinstance(x, np.integer):
            x = int(x)
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise DivisionByZero(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise DivisionByZero("division by zero")
        if self.p:
            return pow(int(x), -1, self.p)
        return 1 / x

    def parse(self, text: str):
        s = text.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(s))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad scalar {text!r}")
        if self.p and "/" not in s and not 0 <= value < self.p:
            raise ParseError(f"scalar {text!r} not in [0, {self.p})")
        return self(value)

    def format(self, x) -> str:
        x = self(x)
        if self.p:
            return str(int(x))
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def elements(self) -> range:
        if not self.p:
            raise UnsupportedField("Q is infinite; enumeration needs GF(p)")
        return range(self.p)

    def units(self) -> range:
        return range(1, len(self.elements()))

    # -- arrays ----------------------------------------------------------
    def array(self, data, shape: Sequence[int] | None = None) -> np.ndarray:
        arr = np.array(data, dtype=object)
        if shape is not None:
            arr = arr.reshape(tuple(shape))
        out = np.empty(arr.shape, dtype=self.dtype)
        for idx in np.ndindex(arr.shape):
            out[idx] = self(arr[idx])
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out[...] = self.zero
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit(self, n: int, i: int) -> np.ndarray:
        v = self.zeros((n,))
        v[i] = self.one
        return v

    def reduce(self, arr) -> np.ndarray:
        arr = np.asarray(arr)
        if self.dtype is object:
            if arr.dtype != object:
                return self.array(arr)
            if self.p:
                return np.vectorize(lambda v: v % self.p, otypes=[object])(arr) if arr.size else arr
            return arr
        if arr.dtype == np.int64:
            return np.mod(arr, self.p)
        return np.mod(arr, self.p).astype(np.int64)

    def einsum(self, spec: str, *ops, raw: bool = False) -> np.ndarray:
        """Exact einsum; ``raw=True`` skips the final reduction mod p."""
        if self.dtype is object and any(op.size == 0 for op in ops):
            # numpy refuses empty object einsums; build the zero result by hand
            out_shape = _einsum_shape(spec, ops)
            return self.zeros(out_shape)
        out = np.einsum(spec, *ops)
        return out if raw else self.reduce(out)

    def matmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a), np.asarray(b)
        if a.ndim == 1:
            return self.einsum("j,jk->k", a, b) if b.ndim == 2 else self.einsum("j,j->", a, b)
        if b.ndim == 1:
            return self.einsum("ij,j->i", a, b)
        return self.einsum("ij,jk->ik", a, b)

    def scale(self, s, arr) -> np.ndarray:
        return self.reduce(self(s) * np.asarray(arr))

    def add(self, *arrs) -> np.ndarray:
        total = arrs[0]
        for a in arrs[1:]:
            total = total + a
        return self.reduce(total)

    def sub(self, a, b) -> np.ndarray:
        return self.reduce(np.asarray(a) - np.asarray(b))

    def neg(self, a) -> np.ndarray:
        return self.reduce(-np.asarray(a))

    def vectors(self, n: int) -> Iterator[np.ndarray]:
        """All vectors of F^n in lexicographic order (GF(p) only)."""
        for tup in itertools.product(self.elements(), repeat=n):
            yield np.array(tup, dtype=self.dtype)

    def tensors(self, shape) -> Iterator[np.ndarray]:
        size = int(np.prod(shape)) if len(shape) else 1
        for tup in itertools.product(self.elements(), repeat=size):
            yield np.array(tup, dtype=self.dtype).reshape(shape)


def _einsum_shape(spec: str, ops) -> tuple:
    inputs, output = spec.split("->")
    sizes = {}
    for letters, op in zip(inputs.split(","), ops):
        for ch, d in zip(letters, op.shape):
            sizes[ch] = d
    return tuple(sizes[ch] for ch in output)


def is_zero(arr) -> bool:
    return np.count_nonzero(np.asarray(arr)) == 0


def same(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return a.size == 0 or is_zero(a != b)


def freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


def flat_key(*arrs) -> tuple:
    """Lexicographic sort key made from flattened tensors."""
    return tuple(int(v) if not isinstance(v, Fraction) else v
                 for a in arrs for v in np.asarray(a).ravel())


# -- scalars with a field attached ----------------------------------------

@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, y) -> "Scalar":
        if isinstance(y, Scalar):
            if y.field != self.field:
                raise FieldMismatch(f"{self.field} vs {y.field}")
            return y
        return Scalar(self.field, y)

    def __add__(self, y):
        return Scalar(self.field, self.value + self._other(y).value)

    def __sub__(self, y):
        return Scalar(self.field, self.value - self._other(y).value)

    def __mul__(self, y):
        return Scalar(self.field, self.value * self._other(y).value)

    def __truediv__(self, y):
        return Scalar(self.field, self.value * self.field.inv(self._other(y).value))

    def __neg__(self):
        return Scalar(self.field, -self.value)

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __str__(self):
        return self.field.format(self.value)


def scalar_ops(x: Scalar, y: Scalar, op: str) -> Scalar:
    if x.field != y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    table = {"+": Scalar.__add__, "-": Scalar.__sub__, "*": Scalar.__mul__,
             "/": Scalar.__truediv__, "−": Scalar.__sub__, "×": Scalar.__mul__,
             "÷": Scalar.__truediv__}
    if op not in table:
        raise ValueError(f"unknown operator {op!r}")
    return table[op](x, y)


# -- linear algebra ---------------------------------------------------------

def rref(F: Field, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns, exact."""
    a = F.array(m) if np.asarray(m).dtype != F.dtype else np.array(m, copy=True)
    if a.ndim != 2:
        raise DimensionMismatch("rref needs a matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = F.reduce(a[r] * F.inv(a[r, c]))
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = F.reduce(a[i] - a[i, c] * a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rank(F: Field, m) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(F, m)[1])


def mat_inverse(F: Field, m) -> np.ndarray | None:
    """Exact inverse, or None when the matrix is singular."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"inverse of a non-square {m.shape} matrix")
    n = m.shape[0]
    if n == 0:
        return F.zeros((0, 0))
    aug = np.concatenate([F.array(m), F.eye(n)], axis=1)
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        return None
    return red[:, n:]


def is_invertible(F: Field, m) -> bool:
    return mat_inverse(F, m) is not None


def solve(F: Field, a, b) -> np.ndarray | None:
    """One solution x of a x = b, or None."""
    a = np.asarray(a)
    rows, cols = a.shape
    if rows == 0:
        return F.zeros((cols,))
    aug = np.concatenate([F.array(a), F.array(b).reshape(rows, 1)], axis=1)
    red, piv = rref(F, aug)
    if cols in piv:
        return None
    x = F.zeros((cols,))
    for r, c in enumerate(piv):
        x[c] = red[r, cols]
    return x


def nullspace(F: Field, a) -> list[np.ndarray]:
    a = np.asarray(a)
    rows, cols = a.shape
    if rows == 0:
        return [F.unit(cols, i) for i in range(cols)]
    red, piv = rref(F, a)
    basis = []
    for free in (c for c in range(cols) if c not in piv):
        v = F.zeros((cols,))
        v[free] = F.one
        for r, c in enumerate(piv):
            v[c] = F.reduce(-red[r, free])
        basis.append(v)
    return basis


def contract(F: Field, t, slot: int, v) -> np.ndarray:
    """Sum a 3-tensor over one slot (1, 2 or 3) weighted by v."""
    t, v = np.asarray(t), np.asarray(v)
    if t.ndim != 3 or slot not in (1, 2, 3):
        raise DimensionMismatch("contract needs a 3-tensor and slot 1..3")
    if v.shape != (t.shape[slot - 1],):
        raise DimensionMismatch(f"vector of length {v.shape} for slot of size {t.shape[slot - 1]}")
    spec = {1: "ijk,i->jk", 2: "ijk,j->ik", 3: "ijk,k->ij"}[slot]
    return F.einsum(spec, t, v)


def twist(t, perm: Sequence[int]) -> np.ndarray:
    """Permute tensor slots: ``twist(t, (1, 0))`` is the flip tau."""
    t = np.asarray(t)
    perm = tuple(perm)
    if sorted(perm) != list(range(t.ndim)):
        raise DimensionMismatch(f"{perm} is not a permutation of {t.ndim} slots")
    for a, b in enumerate(perm):
        if t.shape[a] != t.shape[b]:
            raise DimensionMismatch("twist mixes slots of different sizes")
    return np.transpose(t, perm).copy()


def general_linear(F: Field, n: int, bound: int | None = None) -> Iterator[np.ndarray]:
    """All invertible n x n matrices over GF(p), built column by column."""
    require_bound(F.p ** (n * n), f"GL({n},{F.p}) sweep", bound)

    def extend(cols: list[np.ndarray]):
        if len(cols) == n:
            yield np.stack(cols, axis=1) if n else F.zeros((0, 0))
            return
        for v in F.vectors(n):
            if rank(F, np.stack(cols + [v], axis=1)) == len(cols) + 1:
                yield from extend(cols + [v])

    yield from extend([])


# -- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: ``ok`` plus every failing (identity, indices)."""

    violations: tuple = ()
    unknown: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and not self.unknown

    def __bool__(self):
        return self.ok

    @classmethod
    def of(cls, violations: Iterable) -> "Verdict":
        uniq = sorted(set((name, tuple(int(i) for i in idx)) for name, idx in violations))
        return cls(tuple(uniq))

    def __add__(self, other: "Verdict") -> "Verdict":
        v = Verdict.of(self.violations + other.violations)
        return Verdict(v.violations, self.unknown or other.unknown)

    def ids(self) -> set:
        return {name for name, _ in self.violations}

    def only(self, *names) -> "Verdict":
        return Verdict.of(v for v in self.violations if v[0] in names)

    @property
    def status(self) -> str:
        if self.violations:
            return "fail"
        return "unknown" if self.unknown else "ok"


def mismatches(name: str, exprs: Sequence[np.ndarray], value_axes: int = 1) -> list:
    """Violations of the chain ``exprs[0] = exprs[1] = ...``.

    The last ``value_axes`` axes hold the value; the leading axes are the
    basis tuple reported on failure.
    """
    first = np.asarray(exprs[0])
    if all(np.array_equal(first, other) for other in exprs[1:]):
        return []
    bad = np.zeros(first.shape[: first.ndim - value_axes], dtype=bool)
    for other in exprs[1:]:
        diff = np.asarray(first != np.asarray(other), dtype=bool)
        for _ in range(value_axes):
            diff = diff.any(axis=-1)
        bad |= diff
    return [(name, tuple(idx)) for idx in np.argwhere(bad)]


def batch_agreement(chains, batch: int) -> np.ndarray:
    """Per batch entry, whether every chain ``(name, exprs)`` holds everywhere.

    Every expression must carry the leading batch axis.
    """
    ok = np.ones(batch, dtype=bool)
    for name, exprs in chains:
        first = np.asarray(exprs[0])
        for other in exprs[1:]:
            diff = np.asarray(first != np.asarray(other), dtype=bool)
            if diff.ndim == 0 or diff.shape[0] != batch:
                raise ValueError(f"{name}: expression without the batch axis")
            ok &= ~diff.reshape(batch, -1).any(axis=1)
    return ok
