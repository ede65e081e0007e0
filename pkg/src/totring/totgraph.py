"""The total graph of a finite ring and the invariants checked on it.

Adjacency rows are kept twice: as a boolean numpy matrix and as Python ints
used as bitsets (bit ``y`` of ``rows[x]`` is set iff ``x ~ y``).  The bitset
rows drive BFS and the domination / Hamiltonian searches.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .ringcore import Ring, is_local

INFINITE = math.inf


def iter_bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _bitset_rows(adj: np.ndarray) -> list[int]:
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class TotalGraph:
    """``tau(R)``: vertices are ring elements, ``x ~ y`` iff ``x != y`` and ``x + y`` is a zero-divisor."""

    def __init__(self, ring: Ring):
        self.ring = ring
        adj = ring.is_zero_divisor[ring.add_table]
        np.fill_diagonal(adj, False)
        adj.setflags(write=False)
        self.adjacency = adj
        self.degree = adj.sum(axis=1)
        self.degree.setflags(write=False)
        self.rows = _bitset_rows(adj)

    @property
    def order(self) -> int:
        return self.ring.order

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x, y])

    @property
    def edge_count(self) -> int:
        return int(self.degree.sum()) // 2

    @cached_property
    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by least vertex."""
        seen = 0
        comps = []
        for v in range(self.order):
            if seen >> v & 1:
                continue
            comp = self._reach(1 << v)
            seen |= comp
            comps.append(list(iter_bits(comp)))
        return comps

    def _reach(self, start: int) -> int:
        reached, frontier = start, start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self.rows[v]
            frontier = nxt & ~reached
            reached |= frontier
        return reached

    def eccentricity(self, v: int) -> float:
        full = (1 << self.order) - 1
        reached, frontier, dist = 1 << v, 1 << v, 0
        while reached != full:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= self.rows[u]
            frontier = nxt & ~reached
            if not frontier:
                return INFINITE
            reached |= frontier
            dist += 1
        return dist


def build(ring: Ring) -> TotalGraph:
    return TotalGraph(ring)


def is_connected(g: TotalGraph) -> bool:
    return len(g.components) == 1


def diameter(g: TotalGraph) -> float:
    """Exact diameter by BFS from every vertex; ``math.inf`` when disconnected."""
    if not is_connected(g):
        return INFINITE
    return max(g.eccentricity(v) for v in range(g.order))


def is_eulerian(g: TotalGraph) -> bool:
    """Graph-theoretic test: connected and every degree even."""
    return is_connected(g) and bool((g.degree % 2 == 0).all())


def is_regular(g: TotalGraph) -> bool:
    return bool((g.degree == g.degree[0]).all())


def degree_law_holds(g: TotalGraph) -> bool:
    """Degrees are |Z|-1 (even order), or |Z| on units and |Z|-1 on zero-divisors (odd order)."""
    ring = g.ring
    z = len(ring.zero_divisors)
    if ring.order % 2 == 0:
        expected = np.full(ring.order, z - 1)
    else:
        expected = np.where(ring.is_unit, z, z - 1)
    return bool(np.array_equal(g.degree, expected))


@dataclass(frozen=True)
class ComponentKind:
    kind: str  # "Complete", "Biclique" or "Other"
    size: int  # m for K_m / K_{m,m}; vertex count for Other

    def __str__(self) -> str:
        if self.kind == "Complete":
            return f"K{self.size}"
        if self.kind == "Biclique":
            return f"K{self.size},{self.size}"
        return f"Other({self.size})"

    @property
    def vertices(self) -> int:
        return 2 * self.size if self.kind == "Biclique" else self.size


@dataclass(frozen=True)
class ComponentProfile:
    entries: tuple[tuple[ComponentKind, int], ...]

    def counts(self) -> dict[str, int]:
        return {str(k): c for k, c in self.entries}

    def total_vertices(self) -> int:
        return sum(k.vertices * c for k, c in self.entries)


def _classify_component(g: TotalGraph, comp: list[int]) -> ComponentKind:
    ring = g.ring
    size = len(comp)
    sub = g.adjacency[np.ix_(comp, comp)]
    complete = bool((sub | np.eye(size, dtype=bool)).all())
    if size == 2:
        # a single edge is both K_2 and K_{1,1}; it is a biclique edge {x, -x}
        # joining two distinct classes iff the endpoints differ by a unit
        a, b = comp
        return ComponentKind("Biclique", 1) if ring.is_unit[ring.sub(a, b)] else ComponentKind("Complete", 2)
    if complete:
        return ComponentKind("Complete", size)
    side = {comp[0]: 0}
    queue = [comp[0]]
    for v in queue:
        for u in comp:
            if g.adjacency[v, u]:
                if u not in side:
                    side[u] = 1 - side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return ComponentKind("Other", size)
    left = [v for v in comp if side[v] == 0]
    right = [v for v in comp if side[v] == 1]
    if len(left) == len(right) and g.adjacency[np.ix_(left, right)].all():
        return ComponentKind("Biclique", len(left))
    return ComponentKind("Other", size)


def component_profile(g: TotalGraph) -> ComponentProfile:
    counter: Counter[ComponentKind] = Counter(_classify_component(g, c) for c in g.components)
    order = {"Complete": 0, "Biclique": 1, "Other": 2}
    entries = sorted(counter.items(), key=lambda kv: (order[kv[0].kind], kv[0].size))
    return ComponentProfile(tuple(entries))


def expected_local_profile(ring: Ring) -> ComponentProfile:
    """Component structure predicted for a local ring."""
    z = len(ring.zero_divisors)
    classes = ring.order // z
    char = ring.characteristic
    if char & (char - 1) == 0:
        return ComponentProfile(((ComponentKind("Complete", z), classes),))
    entries = [(ComponentKind("Complete", z), 1)]
    if classes > 1:
        entries.append((ComponentKind("Biclique", z), (classes - 1) // 2))
    return ComponentProfile(tuple(entries))


def metrics(g: TotalGraph) -> dict:
    diam = diameter(g)
    return {
        "order": g.order,
        "zsize": len(g.ring.zero_divisors),
        "connected": is_connected(g),
        "diameter": "inf" if diam == INFINITE else int(diam),
        "regular": is_regular(g),
        "eulerian": is_eulerian(g),
        "local": is_local(g.ring),
        "profile": component_profile(g).counts(),
    }


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: TotalGraph, highlight: list[int] | None = None) -> str:
    """DOT text for ``g``; ``highlight`` is a cyclic vertex sequence drawn in bold."""
    label = g.ring.element_label
    lines = [f"graph {_dot_id('tau(' + g.ring.label + ')')} {{"]
    for v in range(g.order):
        lines.append(f"  {v} [label={_dot_id(label(v))}];")
    bold = set()
    if highlight:
        for a, b in zip(highlight, highlight[1:] + highlight[:1]):
            bold.add((min(a, b), max(a, b)))
    for x in range(g.order):
        for y in iter_bits(g.rows[x] >> (x + 1) << (x + 1)):
            attr = " [penwidth=3, color=red]" if (x, y) in bold else ""
            lines.append(f"  {x} -- {y}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: TotalGraph, path, highlight: list[int] | None = None) -> Path:
    path = Path(path)
    path.write_text(to_dot(g, highlight), encoding="utf-8")
    return path
