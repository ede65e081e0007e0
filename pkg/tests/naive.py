"""Slow reference arithmetic written without the package, used as a test oracle.

Elements are plain Python values in the same shape as ``Ring.decode``: ints
for Z(n) and prime fields, little-endian coefficient tuples for GF(p^k),
nested tuples for matrices and products.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable

# moduli as little-endian coefficients with the leading 1 dropped
MODULI = {(2, 2): (1, 1), (2, 3): (1, 1, 0), (3, 2): (1, 0), (5, 2): (2, 0)}


@dataclass
class NaiveRing:
    name: str
    elements: list
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any

    def neg(self, a):
        return next(b for b in self.elements if self.add(a, b) == self.zero)

    def zero_divisors(self) -> set:
        z = self.zero
        return {x for x in self.elements
                if any(y != z and (self.mul(x, y) == z or self.mul(y, x) == z) for y in self.elements)}

    def units(self) -> set:
        return {x for x in self.elements if any(self.mul(x, y) == self.one == self.mul(y, x) for y in self.elements)}

    def is_nilpotent(self, x) -> bool:
        p = x
        for _ in range(len(self.elements)):
            if p == self.zero:
                return True
            p = self.mul(p, x)
        return p == self.zero

    def radical(self) -> set:
        # in a finite ring J is the largest ideal of nilpotent-generating
        # elements: x in J iff r x is nilpotent for every r
        return {x for x in self.elements if all(self.is_nilpotent(self.mul(r, x)) for r in self.elements)}


def zn(n: int) -> NaiveRing:
    return NaiveRing(f"Z{n}", list(range(n)), lambda a, b: (a + b) % n, lambda a, b: (a * b) % n, 0, 1 % n)


def gf(p: int, k: int) -> NaiveRing:
    if k == 1:
        return zn(p)
    tail = MODULI[(p, k)]  # x^k = -(tail) as a polynomial

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i, t in enumerate(tail):
                    prod[d - k + i] = (prod[d - k + i] - c * t) % p
        return tuple(prod[:k])

    els = list(itertools.product(range(p), repeat=k))
    one = (1,) + (0,) * (k - 1)
    return NaiveRing(f"GF{p}^{k}", [tuple(e) for e in els], add, mul, (0,) * k, one)


def mat(n: int, base: NaiveRing, upper: bool = False) -> NaiveRing:
    def add(a, b):
        return tuple(tuple(base.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def mul(a, b):
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = base.zero
                for t in range(n):
                    s = base.add(s, base.mul(a[i][t], b[t][j]))
                row.append(s)
            out.append(tuple(row))
        return tuple(out)

    cells = [(i, j) for i in range(n) for j in range(n) if not upper or j >= i]
    els = []
    for vals in itertools.product(base.elements, repeat=len(cells)):
        m = [[base.zero] * n for _ in range(n)]
        for (i, j), v in zip(cells, vals):
            m[i][j] = v
        els.append(tuple(tuple(r) for r in m))
    zero = tuple(tuple(base.zero for _ in range(n)) for _ in range(n))
    one = tuple(tuple(base.one if i == j else base.zero for j in range(n)) for i in range(n))
    return NaiveRing(f"M{n}({base.name})", els, add, mul, zero, one)


def prod(*rings: NaiveRing) -> NaiveRing:
    def add(a, b):
        return tuple(r.add(x, y) for r, x, y in zip(rings, a, b))

    def mul(a, b):
        return tuple(r.mul(x, y) for r, x, y in zip(rings, a, b))

    els = [tuple(e) for e in itertools.product(*(r.elements for r in rings))]
    return NaiveRing("x".join(r.name for r in rings), els, add, mul,
                     tuple(r.zero for r in rings), tuple(r.one for r in rings))


# --------------------------------------------------------------------------
# graph side


def total_graph(r: NaiveRing) -> dict:
    z = r.zero_divisors()
    return {x: {y for y in r.elements if y != x and r.add(x, y) in z} for x in r.elements}


def components(adj: dict) -> list[set]:
    seen, comps = set(), []
    for v in adj:
        if v in seen:
            continue
        comp, queue = {v}, deque([v])
        while queue:
            u = queue.popleft()
            for w in adj[u] - comp:
                comp.add(w)
                queue.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def diameter(adj: dict) -> float:
    best = 0
    for v in adj:
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if len(dist) < len(adj):
            return float("inf")
        best = max(best, max(dist.values()))
    return best


def gamma(adj: dict, limit: int | None = None) -> int | None:
    """Domination number by plain subset enumeration (None if above ``limit``)."""
    verts = list(adj)
    closed = [adj[v] | {v} for v in verts]
    full = set(verts)
    for k in range(1, (limit or len(verts)) + 1):
        for combo in itertools.combinations(range(len(verts)), k):
            if set().union(*(closed[i] for i in combo)) == full:
                return k
    return None


def is_dominating(adj: dict, members) -> bool:
    covered = set(members)
    for m in members:
        covered |= adj[m]
    return covered == set(adj)
