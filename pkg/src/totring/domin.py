"""Domination in total graphs: explicit sets, closed formulas, and an exact solver.

:func:`gamma_exact` is the ground truth for every comparison made here; the
formulas and bounds are reported next to it, never substituted for it.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .ringcore import GF, Mat, Prod, Ring, is_local, make_ring, semisimple_shape, spec_order
from .totgraph import TotalGraph, build, component_profile, iter_bits

DEFAULT_SOLVE_GUARD = 1024


class DominationError(Exception):
    pass


class NotLocal(DominationError):
    pass


class SolveGuardExceeded(DominationError):
    pass


def default_solve_guard() -> int:
    env = os.environ.get("TOTRING_SOLVE_GUARD")
    return int(env) if env else DEFAULT_SOLVE_GUARD


@dataclass(frozen=True, eq=False)
class DominatingSet:
    members: frozenset[int]
    ring: Ring | None = None

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [self.ring.element_label(x) for x in sorted(self.members)]


def dominates(g: TotalGraph, members) -> bool:
    covered = 0
    for v in members:
        covered |= g.rows[v] | (1 << v)
    return covered == (1 << g.order) - 1


def undominated(g: TotalGraph, members) -> list[int]:
    covered = 0
    for v in members:
        covered |= g.rows[v] | (1 << v)
    return list(iter_bits(((1 << g.order) - 1) & ~covered))


# --------------------------------------------------------------------------
# exact solver


@dataclass
class SolveStats:
    nodes: int = 0
    lower_bound: int = 0
    greedy: int = 0
    group_size: int = 0


SYMMETRY_CELLS = 1 << 25  # cap on |units|^2 * |R| for the automorphism table


def unit_automorphisms(ring: Ring, max_cells: int = SYMMETRY_CELLS) -> np.ndarray | None:
    """Distinct maps ``x -> u x v`` (u, v units) as rows of a permutation table.

    Each one preserves Z(R) and sums, so each is an automorphism of tau(R).
    Returns None when the table would exceed ``max_cells`` entries.
    """
    units = np.array(sorted(ring.units), dtype=np.int64)
    if len(units) ** 2 * ring.order > max_cells:
        return None
    left = ring.mul_table[units]  # u x
    perms = ring.mul_table[left[:, :, None], units[None, None, :]]  # (u x) v, indexed [u, x, v]
    perms = perms.transpose(0, 2, 1).reshape(-1, ring.order)
    return np.unique(perms, axis=0).astype(np.int32)


def _mask(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _greedy(closed: list[int], full: int) -> list[int]:
    uncovered, chosen = full, []
    while uncovered:
        best = max(range(len(closed)), key=lambda v: ((closed[v] & uncovered).bit_count(), -v))
        chosen.append(best)
        uncovered &= ~closed[best]
    return chosen


class _Search:
    def __init__(self, closed: list[int], stats: SolveStats):
        self.closed = closed
        self.stats = stats
        self.n = len(closed)

    def _stabilizer(self, group, uncovered: int, allowed: int):
        # automorphisms mapping both sets onto themselves; the subproblem
        # depends on nothing else, so they permute equivalent branches
        if group is None:
            return None
        um, am = _mask(uncovered, self.n), _mask(allowed, self.n)
        keep = (um[group] == um).all(axis=1) & (am[group] == am).all(axis=1)
        h = group[keep]
        return h if len(h) > 1 else None

    def run(self, uncovered: int, allowed: int, k: int, group=None) -> list[int] | None:
        self.stats.nodes += 1
        if not uncovered:
            return []
        if k == 0:
            return None
        closed = self.closed
        if k == 1:
            common = allowed
            for u in iter_bits(uncovered):
                common &= closed[u]
                if not common:
                    return None
            return [(common & -common).bit_length() - 1]
        # branch on the uncovered vertex with the fewest allowed dominators
        best_cands, best_count = 0, math.inf
        for u in iter_bits(uncovered):
            cands = closed[u] & allowed
            c = cands.bit_count()
            if c < best_count:
                best_cands, best_count = cands, c
                if c == 0:
                    return None
        # k candidates can cover at most the k largest coverages
        need = uncovered.bit_count()
        covers = sorted(((closed[v] & uncovered).bit_count() for v in iter_bits(allowed)), reverse=True)
        if sum(covers[:k]) < need:
            return None
        group = self._stabilizer(group, uncovered, allowed)
        for v in iter_bits(best_cands):
            if not allowed >> v & 1:
                continue  # pruned together with an equivalent sibling
            sub = self.run(uncovered & ~closed[v], allowed, k - 1, group)
            if sub is not None:
                return [v] + sub
            # no solution uses v, hence none uses any image of v
            orbit = {v} if group is None else set(group[:, v].tolist())
            for w in orbit:
                allowed &= ~(1 << w)
        return None


def solve_min_dominating(g: TotalGraph, stats: SolveStats | None = None, symmetry: bool = True) -> list[int]:
    """Minimum dominating set of ``g``; deterministic for a given graph.

    Iterative deepening from ``ceil(|V| / (Delta + 1))`` up to the greedy
    bound; each depth runs a branch-and-bound over closed-neighbourhood covers.
    With ``symmetry`` the maps ``x -> u x v`` prune branches equivalent to one
    already refuted.
    """
    stats = stats if stats is not None else SolveStats()
    n = g.order
    full = (1 << n) - 1
    closed = [g.rows[v] | (1 << v) for v in range(n)]
    greedy = _greedy(closed, full)
    lower = -(-n // (int(g.degree.max()) + 1))
    group = unit_automorphisms(g.ring) if symmetry else None
    stats.lower_bound, stats.greedy = lower, len(greedy)
    stats.group_size = 0 if group is None else len(group)
    search = _Search(closed, stats)
    for k in range(lower, len(greedy)):
        found = search.run(full, full, k, group)
        if found is not None:
            return sorted(found)
    return sorted(greedy)


def gamma_exact(g: TotalGraph, guard: int | None = None) -> tuple[int, DominatingSet]:
    """Exact domination number and a witness; raises :class:`SolveGuardExceeded` above ``guard`` vertices."""
    guard = default_solve_guard() if guard is None else guard
    if g.order > guard:
        raise SolveGuardExceeded(f"tau({g.ring.label}) has {g.order} vertices > solve guard {guard}; use --slow")
    members = solve_min_dominating(g)
    if not dominates(g, members):  # pragma: no cover
        raise DominationError("solver returned a non-dominating set")
    return len(members), DominatingSet(frozenset(members), g.ring)


# --------------------------------------------------------------------------
# formulas and bounds


def gamma_local_formula(ring: Ring) -> int:
    """The closed form for local rings: |R/J| in characteristic 2^k, else (|R/J| + 1) / 2."""
    if not is_local(ring):
        raise NotLocal(f"{ring.label} is not local")
    quotient_order = ring.order // len(ring.radical)
    char = ring.characteristic
    if char & (char - 1) == 0:
        return quotient_order
    return (quotient_order + 1) // 2


def gamma_from_profile(ring: Ring) -> int:
    """Domination number read off the component structure of a local ring's total graph."""
    if not is_local(ring):
        raise NotLocal(f"{ring.label} is not local")
    total = 0
    for kind, count in component_profile(build(ring)).entries:
        if kind.kind == "Complete":
            total += count
        elif kind.kind == "Biclique":
            total += count * (1 if kind.size == 1 else 2)
        else:
            raise DominationError(f"local ring {ring.label} has a component that is neither K_m nor K_m,m")
    return total


def gamma_upper(ring: Ring) -> int | None:
    """``min_i n_i (|F_i| - 1) + 1`` over the semisimple shape, or None if unknown."""
    shape = semisimple_shape(ring)
    if not shape.known:
        return None
    return min(n * (q - 1) + 1 for n, q in shape.factors)


# --------------------------------------------------------------------------
# matrices over fields


def _field_ring(field_ring: Ring | GF) -> Ring:
    ring = field_ring if isinstance(field_ring, Ring) else make_ring(field_ring)
    if not ring.is_field:
        raise ValueError(f"{ring.label} is not a field")
    return ring


def det(field_ring: Ring, matrix) -> int:
    """Leibniz determinant of a square matrix of field element ids."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    add, mul, neg = field_ring.add_table, field_ring.mul_table, field_ring.neg_table
    total = 0
    for perm in itertools.permutations(range(n)):
        term = field_ring.one
        for i, j in enumerate(perm):
            term = int(mul[term, a[i][j]])
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total = int(add[total, neg[term] if inversions % 2 else term])
    return total


def det_batch(field_ring: Ring, mats: np.ndarray) -> np.ndarray:
    """Leibniz determinants of ``(N, n, n)`` arrays of field ids."""
    n = mats.shape[1]
    add, mul, neg = field_ring.add_table, field_ring.mul_table, field_ring.neg_table
    total = np.zeros(mats.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.full(mats.shape[0], field_ring.one, dtype=np.int64)
        for i, j in enumerate(perm):
            term = mul[term, mats[:, i, j]]
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total = add[total, neg[term] if inversions % 2 else term]
    return total


def minor(matrix, row: int, col: int) -> list[list[int]]:
    """Drop ``row`` and ``col`` (1-based)."""
    return [[v for j, v in enumerate(r, 1) if j != col] for i, r in enumerate(matrix, 1) if i != row]


def det_expansion_check(field_ring: Ring, matrix, j: int, x: int, signed: bool = True) -> bool:
    """Check ``det(A + x E_{1j}) = det(A) + s x det(A(1,j))`` by direct evaluation.

    ``s = (-1)^(1+j)`` when ``signed``; ``signed=False`` tests the identity with
    the cofactor sign dropped, which only holds in characteristic 2 or for odd ``j``.
    """
    f = field_ring
    a = [list(map(int, row)) for row in matrix]
    shifted = [row[:] for row in a]
    shifted[0][j - 1] = f.add(shifted[0][j - 1], x)
    lhs = det(f, shifted)
    term = f.mul(x, det(f, minor(a, 1, j)))
    if signed and (1 + j) % 2:
        term = f.neg(term)
    return lhs == f.add(det(f, a), term)


def _matrix_member(n: int, q: int, row: int, col: int, x: int) -> int:
    r = (row - 1) * n + (col - 1)
    return x * q ** (n * n - 1 - r)


def matrix_dominating_set(n: int, field_ring) -> DominatingSet:
    """``{x E_{1,j} : x in F^*, 1 <= j <= n} + {0}`` as element ids of ``M_n(F)``.

    The ring is attached when ``M_n(F)`` fits under the order guard; use
    :func:`verify_matrix_domination` to check domination for any size.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    f = _field_ring(field_ring)
    q = f.order
    members = {0} | {_matrix_member(n, q, 1, j, x) for j in range(1, n + 1) for x in range(1, q)}
    spec = Mat(n, f.spec)
    from .ringcore import default_max_order

    ring = make_ring(spec) if spec_order(spec) <= default_max_order() else None
    return DominatingSet(frozenset(members), ring)


def verify_matrix_domination(n: int, field_ring, members, chunk: int = 1 << 15) -> bool:
    """Stream every ``n x n`` matrix over F and check it is in, or adjacent to, ``members``.

    Adjacency ``A ~ D`` means ``A + D`` is singular, the zero-divisor test in
    ``M_n(F)``; the ring itself is never materialized.
    """
    f = _field_ring(field_ring)
    q = f.order
    size = q ** (n * n)
    weights = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    member_ids = np.array(sorted(members), dtype=np.int64)
    member_digits = (member_ids[:, None] // weights) % q
    for start in range(0, size, chunk):
        ids = np.arange(start, min(size, start + chunk), dtype=np.int64)
        digits = (ids[:, None] // weights) % q
        ok = np.isin(ids, member_ids)
        for d_ids, d_digits in zip(member_ids, member_digits):
            if ok.all():
                break
            summed = f.add_table[digits, d_digits[None, :]].reshape(-1, n, n)
            ok |= (det_batch(f, summed) == 0) & (ids != d_ids)
        if not ok.all():
            return False
    return True


# --------------------------------------------------------------------------
# reductions and the conjectured equality


@dataclass
class InvarianceResult:
    ring_gamma: int
    quotient_gamma: int
    projected_dominates: bool
    lifted_dominates: bool

    @property
    def holds(self) -> bool:
        return self.ring_gamma == self.quotient_gamma and self.projected_dominates and self.lifted_dominates


def check_quotient_invariance(ring: Ring, guard: int | None = None) -> InvarianceResult:
    """Compare gamma(R) with gamma(R/J) and transfer witnesses both ways."""
    q = ring.quotient
    g, gq = build(ring), build(q.quotient)
    gr, wr = gamma_exact(g, guard)
    gqv, wq = gamma_exact(gq, guard)
    projected = {int(q.project[x]) for x in wr.members}
    lifted = {int(q.section[c]) for c in wq.members}
    return InvarianceResult(gr, gqv, dominates(gq, projected), dominates(g, lifted))


@dataclass
class ProductMinResult:
    gamma_r: int
    gamma_s: int
    gamma_product: int

    @property
    def holds(self) -> bool:
        return self.gamma_product == min(self.gamma_r, self.gamma_s)


def check_product_min(r: Ring, s: Ring, guard: int | None = None) -> ProductMinResult:
    prod = make_ring(Prod((r.spec, s.spec)))
    return ProductMinResult(
        gamma_exact(build(r), guard)[0],
        gamma_exact(build(s), guard)[0],
        gamma_exact(build(prod), guard)[0],
    )


@dataclass
class ConjectureResult:
    status: str  # "Confirmed", "Refuted" or "Inapplicable"
    exact: int | None = None
    bound: int | None = None
    witness: DominatingSet | None = None


def conjecture_check(ring: Ring, guard: int | None = None) -> ConjectureResult:
    """Does gamma equal the matrix bound when every Wedderburn factor has n_i >= 2?"""
    shape = semisimple_shape(ring)
    if not shape.known:
        raise DominationError(f"semisimple shape of {ring.label} is unknown")
    bound = gamma_upper(ring)
    if any(n == 1 for n, _ in shape.factors):
        return ConjectureResult("Inapplicable", bound=bound)
    exact, witness = gamma_exact(build(ring), guard)
    if exact > bound:
        raise DominationError(f"gamma({ring.label}) = {exact} exceeds the proven bound {bound}")
    status = "Confirmed" if exact == bound else "Refuted"
    return ConjectureResult(status, exact, bound, witness if status == "Refuted" else None)


# --------------------------------------------------------------------------
# report


@dataclass
class GammaReport:
    exact: int
    witness: DominatingSet
    upper_bound: int | None
    local_formula: int | None
    profile_gamma: int | None
    lower_bound: int
    flags: dict[str, bool] = field(default_factory=dict)

    def as_json(self) -> dict:
        ring = self.witness.ring
        return {
            "exact": self.exact,
            "witness": self.witness.labels() if ring is not None else sorted(self.witness.members),
            "upper_bound": self.upper_bound,
            "local_formula": self.local_formula if self.local_formula is not None else "NotLocal",
            "profile_gamma": self.profile_gamma if self.profile_gamma is not None else "NotLocal",
            "lower_bound": self.lower_bound,
            "flags": dict(self.flags),
        }


def gamma_report(ring: Ring, guard: int | None = None) -> GammaReport:
    g = build(ring)
    exact, witness = gamma_exact(g, guard)
    upper = gamma_upper(ring)
    local = is_local(ring)
    formula = gamma_local_formula(ring) if local else None
    profile = gamma_from_profile(ring) if local else None
    lower = -(-ring.order // (int(g.degree.max()) + 1))
    flags = {"within_bound": upper is None or exact <= upper, "above_degree_bound": exact >= lower}
    if local:
        flags["profile_agrees"] = profile == exact
        flags["formula_agrees"] = formula == exact
    return GammaReport(exact, witness, upper, formula, profile, lower, flags)
