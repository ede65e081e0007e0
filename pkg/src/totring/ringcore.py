"""Finite rings realized as operation tables over element ids ``0..order-1``.

Rings are described compositionally by a small AST (:class:`Zn`, :class:`GF`,
:class:`Mat`, :class:`Tri`, :class:`Prod`, :class:`Table`) and realized by
:func:`make_ring`.  Every realized ring carries its addition and
multiplication tables, the unit / zero-divisor classification, the Jacobson
radical and the characteristic.

Element ids follow a big-endian structural encoding, so the id order is the
lexicographic order of the structural decoding:

* ``Zn(n)``      -- the residue itself
* ``GF(p, k)``   -- ``sum(c_i * p**i)`` for the coefficient vector
  ``(c_0, ..., c_{k-1})`` modulo the smallest monic irreducible polynomial
* ``Mat(n, S)``  -- row-major entries as base-``|S|`` digits, entry (1,1) most
  significant
* ``Tri(n, F)``  -- packed upper-triangular entries, same convention
* ``Prod(...)``  -- mixed radix over the factors, first factor most significant
* ``Table``      -- the raw table index (the additive identity is relabelled
  to id 0)
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Union

import numpy as np
from sympy import factorint, isprime

DEFAULT_MAX_ORDER = 4096
_CHUNK_CELLS = 1 << 22


class RingError(Exception):
    """Base class for ring construction errors."""


class OrderGuardExceeded(RingError):
    pass


class RingAxiomError(RingError):
    pass


class RadicalMismatch(RingError):
    pass


def default_max_order() -> int:
    env = os.environ.get("TOTRING_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


# --------------------------------------------------------------------------
# ring specifications


@dataclass(frozen=True)
class Zn:
    n: int


@dataclass(frozen=True)
class GF:
    p: int
    k: int = 1

    @property
    def q(self) -> int:
        return self.p**self.k


@dataclass(frozen=True)
class Mat:
    n: int
    base: RingSpec


@dataclass(frozen=True)
class Tri:
    n: int
    base: RingSpec


@dataclass(frozen=True)
class Prod:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("Prod needs at least one factor")


@dataclass(frozen=True)
class Table:
    order: int
    add: tuple
    mul: tuple
    zero: int = 0
    one: int = 1
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add", tuple(tuple(int(v) for v in row) for row in self.add))
        object.__setattr__(self, "mul", tuple(tuple(int(v) for v in row) for row in self.mul))

    @classmethod
    def from_dict(cls, data: dict, name: str | None = None) -> Table:
        return cls(
            order=int(data["order"]),
            add=data["add"],
            mul=data["mul"],
            zero=int(data.get("zero", 0)),
            one=int(data.get("one", 1)),
            name=name,
        )

    @classmethod
    def from_json(cls, path: str | os.PathLike) -> Table:
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_dict(data, name=str(path))

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "add": [list(r) for r in self.add],
            "mul": [list(r) for r in self.mul],
            "zero": self.zero,
            "one": self.one,
        }


RingSpec = Union[Zn, GF, Mat, Tri, Prod, Table]


def spec_order(spec: RingSpec) -> int:
    """Number of elements of the ring described by ``spec``."""
    if isinstance(spec, Zn):
        return spec.n
    if isinstance(spec, GF):
        return spec.q
    if isinstance(spec, Mat):
        return spec_order(spec.base) ** (spec.n * spec.n)
    if isinstance(spec, Tri):
        return spec_order(spec.base) ** (spec.n * (spec.n + 1) // 2)
    if isinstance(spec, Prod):
        out = 1
        for f in spec.factors:
            out *= spec_order(f)
        return out
    if isinstance(spec, Table):
        return spec.order
    raise TypeError(f"not a ring spec: {spec!r}")


# --------------------------------------------------------------------------
# polynomials over GF(p), little-endian coefficient lists


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_rem(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _monic_polys(p: int, degree: int):
    for v in range(p**degree):
        coeffs = [(v // p**i) % p for i in range(degree)]
        yield coeffs + [1]


def is_irreducible(f: list[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not poly_rem(list(f), g, p):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree ``k`` over GF(p), ordered by sum c_i p^i."""
    for f in _monic_polys(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise RingError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


# --------------------------------------------------------------------------
# digit helpers


def big_endian_digits(ids: np.ndarray, base: int, count: int) -> np.ndarray:
    ids = np.asarray(ids, dtype=np.int64)
    weights = base ** np.arange(count - 1, -1, -1, dtype=np.int64)
    return (ids[..., None] // weights) % base


def from_big_endian(digits: np.ndarray, base: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    count = digits.shape[-1]
    weights = base ** np.arange(count - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def matrix_unit_id(n: int, q: int, i: int, j: int, x: int = 1) -> int:
    """Id of ``x * E_{i,j}`` (1-based position) in ``Mat(n, S)`` with ``|S| = q``."""
    r = (i - 1) * n + (j - 1)
    return x * q ** (n * n - 1 - r)


def _pairwise(n: int, fn) -> np.ndarray:
    """Build an ``n x n`` table row-chunk by row-chunk; ``fn(rows)`` returns ``(len(rows), n)``."""
    out = np.empty((n, n), dtype=np.int32)
    step = max(1, _CHUNK_CELLS // max(n, 1))
    for start in range(0, n, step):
        rows = np.arange(start, min(n, start + step))
        out[rows] = fn(rows)
    return out


# --------------------------------------------------------------------------
# the realized ring


class ElementKind(enum.Enum):
    UNIT = "Unit"
    ZERO_DIVISOR = "ZeroDivisor"


class Ring:
    """A realized finite ring with identity.

    ``add_table``/``mul_table`` are ``order x order`` int arrays.  Element 0 is
    always the additive identity.  Instances are immutable after construction.
    """

    def __init__(self, spec: RingSpec, add_table, mul_table, one: int, *, parts=(), raw=None):
        self.spec = spec
        self.add_table = np.ascontiguousarray(add_table, dtype=np.int32)
        self.mul_table = np.ascontiguousarray(mul_table, dtype=np.int32)
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)
        self.order = int(self.add_table.shape[0])
        self.zero = 0
        self.one = int(one)
        self.parts = tuple(parts)
        self._raw = raw

        self.neg_table = np.argmax(self.add_table == 0, axis=1).astype(np.int32)
        self.neg_table.setflags(write=False)

        mul = self.mul_table
        left_inv = (mul == self.one).any(axis=1)
        right_inv = (mul == self.one).any(axis=0)
        self.is_unit = left_inv & right_inv
        nz = mul[:, 1:] == 0
        nz_t = mul[1:, :] == 0
        self.is_zero_divisor = nz.any(axis=1) | nz_t.any(axis=0)
        self.is_unit.setflags(write=False)
        self.is_zero_divisor.setflags(write=False)
        self.units = frozenset(np.flatnonzero(self.is_unit).tolist())
        self.zero_divisors = frozenset(np.flatnonzero(self.is_zero_divisor).tolist())

        c, x = 1, self.one
        while x != 0:
            x = int(self.add_table[x, self.one])
            c += 1
        self.characteristic = c

        self.radical_mask = _brute_radical(self)
        self.radical_mask.setflags(write=False)
        self.radical = frozenset(np.flatnonzero(self.radical_mask).tolist())

    # arithmetic
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        from .expr import format_spec

        return f"Ring({format_spec(self.spec)}, order={self.order})"

    @property
    def label(self) -> str:
        from .expr import format_spec

        return format_spec(self.spec)

    # encoding
    def decode(self, x: int):
        """Structural decoding of element id ``x``."""
        return _decode(self, int(x))

    def encode(self, value) -> int:
        return _encode(self, value)

    def element_label(self, x: int) -> str:
        return _label(self, int(x))

    @cached_property
    def is_field(self) -> bool:
        return len(self.units) == self.order - 1

    @cached_property
    def quotient(self) -> QuotientRing:
        return _quotient(self)

    @cached_property
    def semisimple_model(self) -> SemisimpleModel | None:
        return _semisimple_model(self)


def _brute_radical(ring: Ring) -> np.ndarray:
    # x in J iff 1 - r x is a unit for every r
    neg_rx = ring.neg_table[ring.mul_table]
    one_minus = ring.add_table[ring.one][neg_rx]
    return ring.is_unit[one_minus].all(axis=0)


# --------------------------------------------------------------------------
# realization


def make_ring(spec: RingSpec, max_order: int | None = None) -> Ring:
    """Realize ``spec`` as a :class:`Ring`.

    Raises :class:`OrderGuardExceeded` when the order exceeds ``max_order``
    (default from ``TOTRING_MAX_ORDER`` or 4096), :class:`RingAxiomError` for
    invalid Table specs and non-prime characteristics, and
    :class:`RadicalMismatch` when the brute-force radical disagrees with the
    structural rule.
    """
    if max_order is None:
        max_order = default_max_order()
    return _make_ring(spec, max_order)


@lru_cache(maxsize=128)
def _make_ring(spec: RingSpec, max_order: int) -> Ring:
    _check_spec(spec, max_order)
    ring = _realize(spec, max_order)
    structural = structural_radical(ring)
    if structural is not None and not np.array_equal(structural, ring.radical_mask):
        bad = int(np.flatnonzero(structural != ring.radical_mask)[0])
        raise RadicalMismatch(
            f"radical of {ring.label}: element {ring.element_label(bad)} is "
            f"{'in' if ring.radical_mask[bad] else 'not in'} the brute-force radical "
            "but disagrees with the structural rule"
        )
    _check_ideal(ring)
    return ring


def _check_spec(spec: RingSpec, max_order: int) -> None:
    if isinstance(spec, Zn):
        if spec.n < 2:
            raise RingAxiomError(f"Zn needs n >= 2, got {spec.n}")
    elif isinstance(spec, GF):
        if not isprime(spec.p):
            raise RingAxiomError(f"GF characteristic {spec.p} is not prime")
        if spec.k < 1:
            raise RingAxiomError(f"GF degree must be >= 1, got {spec.k}")
    elif isinstance(spec, Mat):
        if spec.n < 1:
            raise RingAxiomError(f"matrix size must be >= 1, got {spec.n}")
    elif isinstance(spec, Tri):
        if spec.n < 2:
            raise RingAxiomError(f"triangular size must be >= 2, got {spec.n}")
        if not isinstance(spec.base, GF):
            raise RingAxiomError("triangular rings are only supported over GF(q)")
    elif isinstance(spec, Table):
        if spec.order < 2:
            raise RingAxiomError("Table rings need at least 2 elements")
    elif not isinstance(spec, Prod):
        raise TypeError(f"not a ring spec: {spec!r}")
    order = spec_order(spec)
    if order > max_order:
        raise OrderGuardExceeded(f"ring order {order} exceeds the guard of {max_order}")


def _realize(spec: RingSpec, max_order: int) -> Ring:
    if isinstance(spec, Zn):
        ids = np.arange(spec.n)
        return Ring(spec, (ids[:, None] + ids) % spec.n, (ids[:, None] * ids) % spec.n, 1 % spec.n)
    if isinstance(spec, GF):
        return _realize_gf(spec)
    if isinstance(spec, Mat):
        base = _make_ring(spec.base, max_order)
        n = spec.n
        positions = [(i, j) for i in range(n) for j in range(n)]
        add, mul = _matrix_tables(base, n, positions)
        one = from_big_endian(np.array([base.one if i == j else 0 for i, j in positions]), base.order)
        return Ring(spec, add, mul, int(one), parts=(base,))
    if isinstance(spec, Tri):
        base = _make_ring(spec.base, max_order)
        n = spec.n
        positions = [(i, j) for i in range(n) for j in range(i, n)]
        add, mul = _matrix_tables(base, n, positions)
        one = from_big_endian(np.array([base.one if i == j else 0 for i, j in positions]), base.order)
        return Ring(spec, add, mul, int(one), parts=(base,))
    if isinstance(spec, Prod):
        parts = tuple(_make_ring(f, max_order) for f in spec.factors)
        return _realize_product(spec, parts)
    if isinstance(spec, Table):
        return _realize_table(spec, validate=True)
    raise TypeError(f"not a ring spec: {spec!r}")  # pragma: no cover


def _realize_gf(spec: GF) -> Ring:
    p, k, q = spec.p, spec.k, spec.q
    ids = np.arange(q)
    if k == 1:
        return Ring(spec, (ids[:, None] + ids) % p, (ids[:, None] * ids) % p, 1)
    modulus = list(smallest_irreducible(p, k))
    digits = (ids[:, None] // p ** np.arange(k)) % p
    weights = p ** np.arange(k)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights

    def coeffs(x):
        return _trim([(x // p**i) % p for i in range(k)])

    def to_id(c):
        return sum(v * p**i for i, v in enumerate(c))

    # exp/log tables from the least primitive element
    for g in range(2, q):
        powers, x = [1], [1]
        gc = coeffs(g)
        for _ in range(q - 2):
            x = poly_rem(poly_mul(x, gc, p), modulus, p)
            powers.append(to_id(x))
        if len(set(powers)) == q - 1:
            break
    else:  # pragma: no cover
        raise RingError(f"no primitive element found for GF({q})")
    exp = np.array(powers, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
    mul[0, :] = 0
    mul[:, 0] = 0
    return Ring(spec, add, mul, 1)


def _matrix_tables(base: Ring, n: int, positions: list[tuple[int, int]]):
    """Tables for matrices over ``base`` supported on ``positions`` (0-based)."""
    s = base.order
    npos = len(positions)
    order = s**npos
    where = {pos: r for r, pos in enumerate(positions)}
    digits = big_endian_digits(np.arange(order), s, npos)
    badd, bmul = base.add_table, base.mul_table

    def add_rows(rows):
        d = badd[digits[rows][:, None, :], digits[None, :, :]]
        return from_big_endian(d, s)

    def mul_rows(rows):
        dr = digits[rows]
        out = np.zeros((len(rows), order, npos), dtype=np.int64)
        for r, (i, j) in enumerate(positions):
            acc = np.zeros((len(rows), order), dtype=np.int64)
            for kk in range(n):
                a_pos, b_pos = where.get((i, kk)), where.get((kk, j))
                if a_pos is None or b_pos is None:
                    continue
                term = bmul[dr[:, a_pos][:, None], digits[:, b_pos][None, :]]
                acc = badd[acc, term]
            out[:, :, r] = acc
        return from_big_endian(out, s)

    return _pairwise(order, add_rows), _pairwise(order, mul_rows)


def _realize_product(spec: Prod, parts: tuple[Ring, ...]) -> Ring:
    add, mul, one = parts[0].add_table, parts[0].mul_table, parts[0].one
    for part in parts[1:]:
        m = part.order
        ids = np.arange(add.shape[0] * m)
        hi, lo = ids // m, ids % m
        prev_add, prev_mul = add, mul
        add = _pairwise(len(ids), lambda r: prev_add[hi[r][:, None], hi] * m + part.add_table[lo[r][:, None], lo])
        mul = _pairwise(len(ids), lambda r: prev_mul[hi[r][:, None], hi] * m + part.mul_table[lo[r][:, None], lo])
        one = one * m + part.one
    return Ring(spec, add, mul, one, parts=parts)


def _realize_table(spec: Table, validate: bool) -> Ring:
    n = spec.order
    add = np.array(spec.add, dtype=np.int64)
    mul = np.array(spec.mul, dtype=np.int64)
    if add.shape != (n, n) or mul.shape != (n, n):
        raise RingAxiomError(f"tables must be {n}x{n}")
    if add.min() < 0 or mul.min() < 0 or add.max() >= n or mul.max() >= n:
        raise RingAxiomError("table entries out of range")
    if not (0 <= spec.zero < n and 0 <= spec.one < n):
        raise RingAxiomError("zero/one out of range")
    # relabel so the additive identity is id 0
    perm = np.arange(n)
    perm[[0, spec.zero]] = perm[[spec.zero, 0]]  # new id -> raw index
    inv = np.argsort(perm)
    add = inv[add[np.ix_(perm, perm)]]
    mul = inv[mul[np.ix_(perm, perm)]]
    one = int(inv[spec.one])
    if validate:
        _validate_table(add, mul, one, perm)
    return Ring(spec, add, mul, one, raw=perm)


def _validate_table(add: np.ndarray, mul: np.ndarray, one: int, raw: np.ndarray) -> None:
    n = add.shape[0]

    def fail(what, *elems):
        shown = ", ".join(str(int(raw[e])) for e in elems)
        raise RingAxiomError(f"{what} fails at ({shown})")

    ids = np.arange(n)
    if not (add[0] == ids).all():
        fail("additive identity", int(np.flatnonzero(add[0] != ids)[0]))
    bad = np.argwhere(add != add.T)
    if len(bad):
        fail("commutativity of +", *bad[0])
    if not (add == 0).any(axis=1).all():
        fail("additive inverse", int(np.flatnonzero(~(add == 0).any(axis=1))[0]))
    if not ((mul[one] == ids).all() and (mul[:, one] == ids).all()):
        bad = np.flatnonzero((mul[one] != ids) | (mul[:, one] != ids))
        fail("multiplicative identity", int(bad[0]))
    for a in range(n):
        checks = (
            ("associativity of +", add[add[a]], add[a][add]),
            ("associativity of *", mul[mul[a]], mul[a][mul]),
            ("left distributivity", mul[a][add], add[mul[a][:, None], mul[a][None, :]]),
            ("right distributivity", mul[add, a], add[mul[:, a][:, None], mul[:, a][None, :]]),
        )
        for what, lhs, rhs in checks:
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                fail(what, a, *bad[0])


# --------------------------------------------------------------------------
# decoding


def _component_ids(ring: Ring, x: int) -> list[int]:
    comps = []
    for part in reversed(ring.parts):
        comps.append(x % part.order)
        x //= part.order
    return comps[::-1]


def _matrix_positions(ring: Ring) -> list[tuple[int, int]]:
    n = ring.spec.n
    if isinstance(ring.spec, Tri):
        return [(i, j) for i in range(n) for j in range(i, n)]
    return [(i, j) for i in range(n) for j in range(n)]


def _matrix_entries(ring: Ring, x: int) -> list[list[int]]:
    base = ring.parts[0]
    n = ring.spec.n
    positions = _matrix_positions(ring)
    digits = big_endian_digits(np.array(x), base.order, len(positions)).tolist()
    entries = [[0] * n for _ in range(n)]
    for (i, j), d in zip(positions, digits):
        entries[i][j] = d
    return entries


def _decode(ring: Ring, x: int):
    spec = ring.spec
    if isinstance(spec, Zn):
        return x
    if isinstance(spec, GF):
        if spec.k == 1:
            return x
        return tuple((x // spec.p**i) % spec.p for i in range(spec.k))
    if isinstance(spec, (Mat, Tri)):
        base = ring.parts[0]
        return tuple(tuple(base.decode(e) for e in row) for row in _matrix_entries(ring, x))
    if isinstance(spec, Prod):
        return tuple(part.decode(c) for part, c in zip(ring.parts, _component_ids(ring, x)))
    if isinstance(spec, Table):
        return int(ring._raw[x])
    raise TypeError(spec)  # pragma: no cover


def _encode(ring: Ring, value) -> int:
    spec = ring.spec
    if isinstance(spec, Zn):
        return int(value) % spec.n
    if isinstance(spec, GF):
        if spec.k == 1:
            return int(value) % spec.p
        return sum(int(c) * spec.p**i for i, c in enumerate(value))
    if isinstance(spec, (Mat, Tri)):
        base = ring.parts[0]
        digits = [base.encode(value[i][j]) for i, j in _matrix_positions(ring)]
        if isinstance(spec, Tri):
            n = spec.n
            if any(base.encode(value[i][j]) != 0 for i in range(n) for j in range(i)):
                raise ValueError("matrix is not upper triangular")
        return int(from_big_endian(np.array(digits), base.order))
    if isinstance(spec, Prod):
        x = 0
        for part, v in zip(ring.parts, value):
            x = x * part.order + part.encode(v)
        return x
    if isinstance(spec, Table):
        return int(np.flatnonzero(ring._raw == int(value))[0])
    raise TypeError(spec)  # pragma: no cover


def _label(ring: Ring, x: int) -> str:
    spec = ring.spec
    if isinstance(spec, GF) and spec.k > 1:
        coeffs = ring.decode(x)
        terms = []
        for i in range(len(coeffs) - 1, -1, -1):
            c = coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"
    if isinstance(spec, (Mat, Tri)):
        base = ring.parts[0]
        rows = _matrix_entries(ring, x)
        return "[" + ",".join("[" + ",".join(base.element_label(e) for e in row) + "]" for row in rows) + "]"
    if isinstance(spec, Prod):
        return "(" + ",".join(p.element_label(c) for p, c in zip(ring.parts, _component_ids(ring, x))) + ")"
    return str(ring.decode(x))


# --------------------------------------------------------------------------
# classification, radical, quotient


def classify(ring: Ring, x: int) -> ElementKind:
    """Classify ``x`` directly from the definitions, without the cached sets."""
    x = int(x)
    row, col = ring.mul_table[x], ring.mul_table[:, x]
    unit = bool(((row == ring.one) & (col == ring.one)).any())
    zd = bool((row[1:] == 0).any() or (col[1:] == 0).any())
    if unit == zd:
        raise RingError(f"element {ring.element_label(x)} is {'both' if unit else 'neither'} unit and zero-divisor")
    return ElementKind.UNIT if unit else ElementKind.ZERO_DIVISOR


def jacobson(ring: Ring) -> frozenset[int]:
    return ring.radical


def structural_radical(ring: Ring) -> np.ndarray | None:
    """Radical mask from the composition rule, or None for Table rings."""
    spec = ring.spec
    ids = np.arange(ring.order)
    if isinstance(spec, Zn):
        rad = 1
        for p in factorint(spec.n):
            rad *= p
        return ids % rad == 0
    if isinstance(spec, GF):
        return ids == 0
    if isinstance(spec, Mat):
        base = ring.parts[0]
        digits = big_endian_digits(ids, base.order, spec.n * spec.n)
        return base.radical_mask[digits].all(axis=1)
    if isinstance(spec, Tri):
        base = ring.parts[0]
        positions = _matrix_positions(ring)
        digits = big_endian_digits(ids, base.order, len(positions))
        diag = [r for r, (i, j) in enumerate(positions) if i == j]
        return (digits[:, diag] == 0).all(axis=1)
    if isinstance(spec, Prod):
        mask = np.ones(ring.order, dtype=bool)
        rest = ids.copy()
        for part in reversed(ring.parts):
            mask &= part.radical_mask[rest % part.order]
            rest //= part.order
        return mask
    return None


def _check_ideal(ring: Ring) -> None:
    mask = ring.radical_mask
    j = np.flatnonzero(mask)
    ok = (
        mask[ring.add_table[np.ix_(j, j)]].all()
        and mask[ring.mul_table[:, j]].all()
        and mask[ring.mul_table[j, :]].all()
    )
    if not ok:
        raise RadicalMismatch(f"radical of {ring.label} is not a two-sided ideal")


@dataclass(frozen=True, eq=False)
class QuotientRing:
    """``R / J`` realized as a Table ring on least-id coset representatives."""

    base: Ring
    quotient: Ring
    project: np.ndarray
    section: np.ndarray

    @property
    def cosets(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.project == c) for c in range(self.quotient.order)]


def _quotient(ring: Ring) -> QuotientRing:
    j = np.flatnonzero(ring.radical_mask)
    reps = ring.add_table[:, j].min(axis=1)
    section = np.unique(reps)
    index = np.full(ring.order, -1, dtype=np.int64)
    index[section] = np.arange(len(section))
    project = index[reps]
    qadd = project[ring.add_table[np.ix_(section, section)]]
    qmul = project[ring.mul_table[np.ix_(section, section)]]
    table = Table(len(section), qadd.tolist(), qmul.tolist(), zero=0, one=int(project[ring.one]),
                  name=f"{ring.label}/J")
    q = _realize_table(table, validate=False)
    project.setflags(write=False)
    section.setflags(write=False)
    return QuotientRing(ring, q, project, section)


def quotient_mod_radical(ring: Ring) -> QuotientRing:
    return ring.quotient


def is_local(ring: Ring) -> bool:
    """True iff the non-units are exactly the radical."""
    return bool(np.array_equal(~ring.is_unit, ring.radical_mask))


def ganesan_koh_holds(ring: Ring) -> bool:
    m = len(ring.zero_divisors)
    return m < 2 or ring.order <= m * m


# --------------------------------------------------------------------------
# semisimple structure for compositional specs


@dataclass(frozen=True)
class SemisimpleShape:
    """``R/J`` as a product of full matrix rings: ``(n_i, |F_i|)`` pairs, or unknown."""

    factors: tuple[tuple[int, int], ...] | None

    @property
    def known(self) -> bool:
        return self.factors is not None

    def as_json(self):
        return None if self.factors is None else [list(f) for f in self.factors]


@dataclass(frozen=True, eq=False)
class SemisimpleModel:
    """An explicit surjection ``phi: R -> M_{n_1}(F_1) x ... x M_{n_k}(F_k)`` with kernel J.

    ``factors`` holds ``(n_i, field_spec)``; ``target`` is the realized product
    ring and ``phi`` maps element ids of R to element ids of ``target``.
    """

    factors: tuple[tuple[int, RingSpec], ...]
    target: Ring
    phi: np.ndarray

    @property
    def shape(self) -> SemisimpleShape:
        return SemisimpleShape(tuple((n, spec_order(f)) for n, f in self.factors))

    def factor_spec(self, i: int) -> RingSpec:
        n, f = self.factors[i]
        return f if n == 1 else Mat(n, f)

    @cached_property
    def representatives(self) -> np.ndarray:
        """Least R id in each fibre of ``phi``, indexed by target id."""
        reps = np.full(self.target.order, -1, dtype=np.int64)
        order = np.argsort(self.phi, kind="stable")
        ph = self.phi[order]
        first = np.concatenate([[True], ph[1:] != ph[:-1]])
        reps[ph[first]] = order[first]
        return reps


def _factor_images(ring: Ring):
    """``(factors, images)`` with ``images[x, i]`` the id of the i-th component of phi(x)."""
    spec = ring.spec
    ids = np.arange(ring.order)
    if isinstance(spec, Zn):
        primes = sorted(factorint(spec.n))
        return [(1, Zn(p)) for p in primes], np.stack([ids % p for p in primes], axis=1)
    if isinstance(spec, GF):
        return [(1, spec)], ids[:, None]
    if isinstance(spec, Tri):
        base = ring.parts[0]
        positions = _matrix_positions(ring)
        digits = big_endian_digits(ids, base.order, len(positions))
        diag = [r for r, (i, j) in enumerate(positions) if i == j]
        return [(1, spec.base)] * spec.n, digits[:, diag]
    if isinstance(spec, Prod):
        factors, cols = [], []
        rest = ids.copy()
        comps = []
        for part in reversed(ring.parts):
            comps.append(rest % part.order)
            rest //= part.order
        comps.reverse()
        for part, comp in zip(ring.parts, comps):
            sub = _factor_images(part)
            if sub is None:
                return None
            f, img = sub
            factors += f
            cols.append(img[comp])
        return factors, np.concatenate(cols, axis=1)
    if isinstance(spec, Mat):
        base = ring.parts[0]
        sub = _factor_images(base)
        if sub is None:
            return None
        f_base, img_base = sub
        n = spec.n
        digits = big_endian_digits(ids, base.order, n * n)
        factors, cols = [], []
        for i, (m, fspec) in enumerate(f_base):
            q = spec_order(fspec)
            block = big_endian_digits(img_base[:, i], q, m * m)  # (|S|, m*m)
            full = block[digits].reshape(len(ids), n, n, m, m)
            full = full.transpose(0, 1, 3, 2, 4).reshape(len(ids), (n * m) ** 2)
            factors.append((n * m, fspec))
            cols.append(from_big_endian(full, q)[:, None])
        return factors, np.concatenate(cols, axis=1)
    return None


def _semisimple_model(ring: Ring) -> SemisimpleModel | None:
    sub = _factor_images(ring)
    if sub is None:
        return None
    factors, images = sub
    fspecs = [f if n == 1 else Mat(n, f) for n, f in factors]
    target_spec = fspecs[0] if len(fspecs) == 1 else Prod(tuple(fspecs))
    target = make_ring(target_spec, max(default_max_order(), spec_order(target_spec)))
    phi = np.zeros(ring.order, dtype=np.int64)
    for i, fs in enumerate(fspecs):
        phi = phi * spec_order(fs) + images[:, i]
    # phi must be a surjective ring homomorphism with kernel J
    if len(np.unique(phi)) != target.order:
        raise RingError(f"semisimple map of {ring.label} is not surjective")
    if not np.array_equal(phi[ring.add_table], target.add_table[phi[:, None], phi[None, :]]):
        raise RingError(f"semisimple map of {ring.label} does not preserve addition")
    if not np.array_equal(phi[ring.mul_table], target.mul_table[phi[:, None], phi[None, :]]):
        raise RingError(f"semisimple map of {ring.label} does not preserve multiplication")
    if not np.array_equal(phi == 0, ring.radical_mask):
        raise RingError(f"kernel of the semisimple map of {ring.label} is not the radical")
    phi.setflags(write=False)
    return SemisimpleModel(tuple(factors), target, phi)


def semisimple_shape(ring: Ring) -> SemisimpleShape:
    model = ring.semisimple_model
    return SemisimpleShape(None) if model is None else model.shape
