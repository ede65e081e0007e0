"""Hamiltonian cycles in total graphs of non-local finite rings.

Cycles are built constructively wherever the structure of ``R/J`` is known:

* full matrix rings ``M_n(F)`` grow a Hamiltonian path one matrix position at
  a time (row-major), translating the current path by every nonzero scalar
  multiple of ``E_{k,l}`` and threading the copies boustrophedon;
* products ``R x S`` interleave the two element orderings;
* a cycle on ``R/J`` lifts to ``R`` by running it once per radical element.

Table-realized quotients fall back to a backtracking search.  Every edge is
checked as it is appended and every returned cycle passes :func:`verify_cycle`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .ringcore import Mat, Prod, Ring, is_local, make_ring
from .totgraph import TotalGraph, build, is_connected, iter_bits

log = logging.getLogger(__name__)


class HamiltonError(Exception):
    pass


class EdgeViolation(HamiltonError):
    def __init__(self, ring: Ring, a: int, b: int):
        self.pair = (a, b)
        super().__init__(
            f"{ring.element_label(a)} + {ring.element_label(b)} = "
            f"{ring.element_label(ring.add(a, b))} is not a zero-divisor in {ring.label}"
        )


class LocalRing(HamiltonError):
    pass


class SearchExhausted(HamiltonError):
    pass


class InvalidInput(HamiltonError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HamPath:
    seq: tuple[int, ...]
    ring: Ring

    def __len__(self) -> int:
        return len(self.seq)

    @property
    def first(self) -> int:
        return self.seq[0]

    @property
    def last(self) -> int:
        return self.seq[-1]

    def labels(self) -> list[str]:
        return [self.ring.element_label(x) for x in self.seq]


@dataclass(frozen=True, eq=False)
class HamCycle(HamPath):
    notes: tuple[str, ...] = field(default=())


# --------------------------------------------------------------------------
# verifier (independent oracle)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    position: int | None = None


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_cycle(ring: Ring, seq) -> Verdict:
    """Check that ``seq`` is a Hamiltonian cycle of ``tau(ring)``.

    Zero-divisors are recomputed from the multiplication table here rather than
    taken from the ring's cached classification.
    """
    seq = [int(x) for x in seq]
    n = ring.order
    if len(seq) < 3:
        return Verdict(False, Violation("TooShort", f"a cycle needs at least 3 vertices, got {len(seq)}"))
    seen: dict[int, int] = {}
    for i, x in enumerate(seq):
        if not 0 <= x < n:
            return Verdict(False, Violation("BadVertex", f"{x} is not an element id", i))
        if x in seen:
            return Verdict(False, Violation("DuplicateVertex", f"{ring.element_label(x)} repeats", i))
        seen[x] = i
    if len(seq) != n:
        missing = next(x for x in range(n) if x not in seen)
        return Verdict(False, Violation("MissingVertex", f"{ring.element_label(missing)} not visited"))
    arr = np.array(seq)
    sums = ring.add_table[arr, np.roll(arr, -1)]
    mul = ring.mul_table
    for i, s in enumerate(sums.tolist()):
        if not ((mul[s, 1:] == 0).any() or (mul[1:, s] == 0).any()):
            a, b = seq[i], seq[(i + 1) % n]
            return Verdict(False, Violation(
                "NotAdjacent",
                f"{ring.element_label(a)} + {ring.element_label(b)} = {ring.element_label(s)} is not a zero-divisor",
                i,
            ))
    return Verdict(True)


class _Builder:
    """Append-only vertex sequence that checks each new edge against Z(R)."""

    def __init__(self, ring: Ring, seq=()):
        self.ring = ring
        self.seq = list(seq)

    def append(self, x: int):
        x = int(x)
        if self.seq:
            self.check(self.seq[-1], x)
        self.seq.append(x)

    def extend(self, xs):
        for x in xs:
            self.append(x)

    def check(self, a: int, b: int):
        if not self.ring.is_zero_divisor[self.ring.add_table[a, b]]:
            raise EdgeViolation(self.ring, a, b)


# --------------------------------------------------------------------------
# index sets for the matrix construction


@dataclass(frozen=True)
class MatrixIndexSet:
    """Row-major index prefixes at position ``(k, l)`` of ``n x n`` matrices (1-based)."""

    n: int
    k: int
    l: int

    def prefix(self) -> frozenset[tuple[int, int]]:
        """Positions strictly before ``(k, l)`` in row-major order."""
        return frozenset((i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1)
                         if i < self.k or (i == self.k and j < self.l))

    def closed(self) -> frozenset[tuple[int, int]]:
        return self.prefix() | {(self.k, self.l)}

    def reduced(self) -> frozenset[tuple[int, int]]:
        """The prefix without the row-major predecessor of ``(k, l)``."""
        pred = (self.k - 1, self.n) if self.l == 1 else (self.k, self.l - 1)
        return self.prefix() - {pred}

    def next(self) -> MatrixIndexSet | None:
        if self.l < self.n:
            return MatrixIndexSet(self.n, self.k, self.l + 1)
        if self.k < self.n:
            return MatrixIndexSet(self.n, self.k + 1, 1)
        return None

    def _members(self, positions, mring: Ring) -> list[int]:
        q = mring.parts[0].order
        slots = sorted((i - 1) * self.n + (j - 1) for i, j in positions)
        weights = [q ** (self.n * self.n - 1 - r) for r in slots]
        out = [0]
        for w in weights:
            out = [x + d * w for x in out for d in range(q)]
        return sorted(out)

    def support(self, mring: Ring) -> list[int]:
        """Ids of matrices vanishing outside the prefix."""
        return self._members(self.prefix(), mring)

    def closed_support(self, mring: Ring) -> list[int]:
        return self._members(self.closed(), mring)

    def constant_on(self, positions, mring: Ring, x: int, c: int) -> bool:
        entries = _entries(mring, x)
        return all(entries[i - 1][j - 1] == c for i, j in positions)

    def in_C(self, mring: Ring, x: int, c: int) -> bool:
        return self.constant_on(self.prefix(), mring, x, c)

    def in_C_closed(self, mring: Ring, x: int, c: int) -> bool:
        return self.constant_on(self.closed(), mring, x, c)

    def in_C_reduced(self, mring: Ring, x: int, c: int) -> bool:
        return self.constant_on(self.reduced(), mring, x, c)

    def unit_id(self, mring: Ring, scalar: int) -> int:
        q = mring.parts[0].order
        r = (self.k - 1) * self.n + (self.l - 1)
        return scalar * q ** (self.n * self.n - 1 - r)


def _entries(mring: Ring, x: int) -> list[list[int]]:
    q = mring.parts[0].order
    n = mring.spec.n
    digits = [(x // q ** (n * n - 1 - r)) % q for r in range(n * n)]
    return [digits[i * n:(i + 1) * n] for i in range(n)]


def _matrix_ring(path: HamPath) -> tuple[Ring, Ring]:
    mring = path.ring
    if not isinstance(mring.spec, Mat) or mring.spec.n < 2:
        raise InvalidInput("layer extension works on M_n(F) with n >= 2")
    field_ring = mring.parts[0]
    if not field_ring.is_field:
        raise InvalidInput(f"{field_ring.label} is not a field")
    return mring, field_ring


def _check_layer_input(path: HamPath, idx: MatrixIndexSet):
    mring = path.ring
    if path.first != 0:
        raise InvalidInput("path must start at the zero matrix")
    if sorted(path.seq) != idx.support(mring):
        raise InvalidInput(f"path does not cover A_{{{idx.k},{idx.l}}} exactly")
    b = _Builder(mring)
    b.extend(path.seq)


def extend_layer_char2(path: HamPath, k: int, l: int, field: Ring | None = None) -> HamPath:
    """Extend a path on ``A_{k,l}`` to ``A-bar_{k,l}`` over a field of characteristic 2.

    The input runs ``0, B_1, .., B_t`` and ends in ``C-underline_{k,l}(0)``.
    The result continues with ``P + x_1 E`` backwards, ``P + x_2 E`` forwards,
    and so on for ``F^* = {x_1 < .. < x_m}``, ending at ``x_m E_{k,l}``.
    """
    mring, fring = _matrix_ring(path)
    if field is not None and field.spec != fring.spec:
        raise InvalidInput("field does not match the matrix ring")
    if fring.characteristic != 2:
        raise InvalidInput("extend_layer_char2 needs characteristic 2")
    idx = MatrixIndexSet(mring.spec.n, k, l)
    _check_layer_input(path, idx)
    if not idx.in_C_reduced(mring, path.last, 0):
        raise InvalidInput("path must end in C-underline_{k,l}(0)")

    scalars = list(range(1, fring.order))
    add = mring.add_table
    out = _Builder(mring, path.seq)
    base = list(path.seq)
    for row, x in enumerate(scalars):
        e = idx.unit_id(mring, x)
        shifted = [int(add[v, e]) for v in base]
        out.extend(reversed(shifted) if row % 2 == 0 else shifted)
    result = HamPath(tuple(out.seq), mring)
    if not idx.in_C(mring, result.last, 0):
        raise HamiltonError("char-2 extension did not end in C_{k,l}(0)")
    nxt = idx.next()
    if nxt is not None and not nxt.in_C_reduced(mring, result.last, 0):
        raise HamiltonError("char-2 extension endpoint fails the next C-underline condition")
    return result


def _signed_scalar_pairs(fring: Ring, c: int) -> list[int]:
    """``F^*`` as ``x_1, -x_1, .., x_m, -x_m`` with ``x_m = (-1)^(m+1) c``."""
    pairs = []
    for x in range(1, fring.order):
        if x < fring.neg(x):
            pairs.append(x)
    last = next(x for x in pairs if c in (x, fring.neg(x)))
    pairs.remove(last)
    pairs.append(last)
    m = len(pairs)
    pairs[-1] = c if m % 2 == 1 else fring.neg(c)
    return pairs


def extend_layer_odd(path: HamPath, k: int, l: int, field: Ring | None = None) -> HamPath:
    """Extend a path on ``A_{k,l}`` to ``A-bar_{k,l}`` over a field of odd characteristic.

    The input ends in ``C_{k,l}(c)`` with ``c != 0``.  For each scalar pair
    ``{x_i, -x_i}`` two rows are laid out, ``s B_j + (-1)^j x_i E`` and
    ``s B_j - (-1)^j x_i E`` with ``s = (-1)^i``.  The first pair is entered
    from ``B_t`` at ``-B_t + x_1 E``.  The output ends in ``C-bar_{k,l}(d)``.
    """
    mring, fring = _matrix_ring(path)
    if field is not None and field.spec != fring.spec:
        raise InvalidInput("field does not match the matrix ring")
    if fring.characteristic == 2:
        raise InvalidInput("extend_layer_odd needs odd characteristic")
    idx = MatrixIndexSet(mring.spec.n, k, l)
    _check_layer_input(path, idx)
    prefix = idx.prefix()
    if prefix:
        i0, j0 = min(prefix)
        c = _entries(mring, path.last)[i0 - 1][j0 - 1]
        if c == 0 or not idx.in_C(mring, path.last, c):
            raise InvalidInput("path must end in C_{k,l}(c) for some nonzero c")
    else:
        c = 1  # least nonzero scalar; the C-condition is vacuous here
    t = len(path.seq) - 1
    if t % 2 != 0:  # pragma: no cover - |A_{k,l}| is a power of an odd q
        raise HamiltonError(f"odd snake length t={t}")

    add, neg = mring.add_table, mring.neg_table
    base = list(path.seq)
    xs = _signed_scalar_pairs(fring, c)
    out = _Builder(mring, path.seq)
    for i, x in enumerate(xs, start=1):
        e_pos = idx.unit_id(mring, x)
        e_neg = int(neg[e_pos])
        signed = base if i % 2 == 0 else [int(neg[v]) for v in base]
        first = [int(add[b, e_pos if j % 2 == 0 else e_neg]) for j, b in enumerate(signed)]
        second = [int(add[b, e_neg if j % 2 == 0 else e_pos]) for j, b in enumerate(signed)]
        out.extend(reversed(first))
        out.extend(second)
    result = HamPath(tuple(out.seq), mring)
    d = _entries(mring, result.last)[k - 1][l - 1]
    if d == 0 or not idx.in_C_closed(mring, result.last, d):
        raise HamiltonError("odd extension did not end in C-bar_{k,l}(d) with d != 0")
    return result


def ham_matrix_path(n: int, field: Ring) -> HamPath:
    """Hamiltonian path on ``M_n(F)`` from 0 built position by position."""
    if n < 2:
        raise InvalidInput("need n >= 2")
    if not field.is_field:
        raise InvalidInput(f"{field.label} is not a field")
    mring = make_ring(Mat(n, field.spec))
    extend = extend_layer_char2 if field.characteristic == 2 else extend_layer_odd
    path = HamPath((0,), mring)
    idx: MatrixIndexSet | None = MatrixIndexSet(n, 1, 1)
    while idx is not None:
        path = extend(path, idx.k, idx.l, field)
        if sorted(path.seq) != idx.closed_support(mring):
            raise HamiltonError(f"layer ({idx.k},{idx.l}) does not cover A-bar exactly")
        idx = idx.next()
    return path


def ham_matrix(n: int, field: Ring) -> HamCycle:
    """Hamiltonian cycle on ``tau(M_n(F))``; the path's endpoint is singular, closing the cycle at 0."""
    path = ham_matrix_path(n, field)
    _Builder(path.ring).check(path.last, path.first)
    return _verified(path.ring, path.seq, (f"matrix construction M_{n}({field.label})",))


# --------------------------------------------------------------------------
# products and lifting


def _order_with_opposite_ends(ring: Ring) -> list[int]:
    """Elements ordered by id, except ``a_1`` is the least non-2-torsion element and ``a_r = -a_1``."""
    a1 = next(x for x in range(ring.order) if ring.neg(x) != x)
    ar = ring.neg(a1)
    middle = [x for x in range(ring.order) if x not in (a1, ar)]
    return [a1] + middle + [ar]


def _pairs_then_torsion(ring: Ring) -> tuple[list[int], list[int]]:
    pairs, torsion = [], []
    for x in range(ring.order):
        y = ring.neg(x)
        if y == x:
            torsion.append(x)
        elif x < y:
            pairs.append(x)
    return pairs, torsion


def _boustrophedon(rows_r: list[int], neg_r, cols: list[int]) -> list[tuple[int, int]]:
    out = []
    for j, b in enumerate(cols):
        if j % 2 == 0:
            out += [(a, b) for a in rows_r]
        else:
            out += [(neg_r(a), b) for a in reversed(rows_r)]
    return out


def ham_product(r: Ring, s: Ring) -> HamCycle:
    """Hamiltonian cycle on ``tau(R x S)`` for any two finite rings."""
    prod = make_ring(Prod((r.spec, s.spec)))
    m = s.order

    if s.characteristic == 2 or r.characteristic == 2:
        swap = s.characteristic != 2
        a_ring, b_ring = (s, r) if swap else (r, s)
        pairs = _boustrophedon(list(range(a_ring.order)), a_ring.neg, list(range(b_ring.order)))
        if swap:
            pairs = [(a, b) for b, a in pairs]
        note = "char(R)=2, roles swapped" if swap else "char(S)=2"
    else:
        rows = _order_with_opposite_ends(r)
        b_pairs, torsion = _pairs_then_torsion(s)
        pairs = []
        for i, b in enumerate(b_pairs):
            nb = s.neg(b)
            order = rows if i % 2 == 0 else [r.neg(a) for a in reversed(rows)]
            for a in order:
                pairs += [(a, b), (a, nb)]
        pairs += _boustrophedon(rows, r.neg, torsion)
        note = "odd/odd stitching"
    seq = _Builder(prod)
    seq.extend(a * m + b for a, b in pairs)
    seq.check(seq.seq[-1], seq.seq[0])
    return _verified(prod, seq.seq, (f"product construction ({note})",))


def lift_mod_radical(ring: Ring, qcycle) -> HamCycle:
    """Lift a cycle on ``R/J``, given as representatives ``x_1..x_m`` in R, to ``R``.

    The result runs ``x_1 + j, .., x_m + j`` for each radical element ``j`` in
    increasing id order.
    """
    reps = [int(x) for x in qcycle]
    q = ring.quotient
    verdict = verify_cycle(q.quotient, [int(q.project[x]) for x in reps])
    if not verdict:
        raise InvalidInput(f"quotient cycle rejected: {verdict.violation.kind}: {verdict.violation.detail}")
    out = _Builder(ring)
    for j in sorted(ring.radical):
        out.extend(int(ring.add_table[x, j]) for x in reps)
    out.check(out.seq[-1], out.seq[0])
    return _verified(ring, out.seq, (f"lifted over |J| = {len(ring.radical)}",))


def _verified(ring: Ring, seq, notes=()) -> HamCycle:
    verdict = verify_cycle(ring, seq)
    if not verdict:
        raise HamiltonError(f"constructed sequence failed verification: {verdict.violation}")
    return HamCycle(tuple(int(x) for x in seq), ring, tuple(notes))


# --------------------------------------------------------------------------
# search fallback


def search_ham(g: TotalGraph, max_nodes: int | None = None) -> HamCycle:
    """Backtracking Hamiltonian cycle search from vertex 0.

    Extensions are tried fewest-free-neighbours first (ties by id).  A branch is
    cut when an unvisited vertex has fewer than two usable neighbours or the
    unvisited vertices stop being reachable from the path end.
    """
    n = g.order
    if n < 3 or not is_connected(g):
        raise SearchExhausted(f"tau({g.ring.label}) has no Hamiltonian cycle: disconnected or too small")
    rows = g.rows
    full = (1 << n) - 1
    start = 0
    path = [start]
    visited = 1 << start
    nodes = 0

    def feasible(end: int, visited: int) -> bool:
        free = full & ~visited
        if not free:
            return bool(rows[end] >> start & 1)
        ends = (1 << end) | (1 << start)
        for u in iter_bits(free):
            usable = rows[u] & (free | ends)
            if usable & (usable - 1) == 0:
                return False
        # free vertices must be reachable from the end through free vertices
        reached, frontier = 1 << end, 1 << end
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= rows[v]
            frontier = nxt & free & ~reached
            reached |= frontier
        return reached & free == free

    def candidates(end: int, visited: int) -> list[int]:
        free = full & ~visited
        cands = list(iter_bits(rows[end] & free))
        cands.sort(key=lambda u: ((rows[u] & free).bit_count(), u))
        return cands

    stack = [iter(candidates(start, visited))]
    while stack:
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise SearchExhausted(f"node budget {max_nodes} exhausted")
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            visited &= ~(1 << path.pop())
            continue
        path.append(nxt)
        visited |= 1 << nxt
        if len(path) == n:
            if rows[nxt] >> start & 1:
                return _verified(g.ring, path, ("backtracking search",))
            visited &= ~(1 << path.pop())
            continue
        if not feasible(nxt, visited):
            visited &= ~(1 << path.pop())
            continue
        stack.append(iter(candidates(nxt, visited)))
    raise SearchExhausted(f"no Hamiltonian cycle in tau({g.ring.label})")


# --------------------------------------------------------------------------
# dispatcher


def quotient_cycle(ring: Ring) -> tuple[list[int], str]:
    """A Hamiltonian cycle of ``tau(R/J)`` given as representatives in R, plus the route used."""
    model = ring.semisimple_model
    if model is not None:
        target = model.target
        specs = [model.factor_spec(i) for i in range(len(model.factors))]
        if len(specs) == 1:
            n, f = model.factors[0]
            cyc = ham_matrix(n, make_ring(f))
        else:
            first = make_ring(specs[0])
            rest_spec = specs[1] if len(specs) == 2 else Prod(tuple(specs[1:]))
            rest = make_ring(rest_spec)
            cyc = ham_product(first, rest)
        if cyc.ring.order != target.order:  # pragma: no cover
            raise HamiltonError("constructed quotient cycle lives on the wrong ring")
        reps = model.representatives[list(cyc.seq)]
        return [int(x) for x in reps], "constructive"
    q = ring.quotient
    cyc = search_ham(build(q.quotient))
    return [int(q.section[c]) for c in cyc.seq], "search"


def ham_cycle(ring: Ring) -> HamCycle:
    """Hamiltonian cycle of ``tau(R)`` for a non-local ring; raises :class:`LocalRing` otherwise."""
    if is_local(ring):
        raise LocalRing(f"{ring.label} is local, so tau(R) is disconnected")
    reps, route = quotient_cycle(ring)
    log.debug("quotient cycle of %s via %s", ring.label, route)
    if not ring.radical - {0}:
        return _verified(ring, reps, (f"quotient route: {route}",))
    lifted = lift_mod_radical(ring, reps)
    return HamCycle(lifted.seq, ring, (f"quotient route: {route}",) + lifted.notes)
