import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from totring.corpus import default_corpus
from totring.expr import parse
from totring.ringcore import is_local, make_ring, spec_order
from totring.selfcheck import even_field_product
from totring.totgraph import (INFINITE, build, component_profile, degree_law_holds, diameter,
                              expected_local_profile, export_dot, is_connected, is_eulerian, is_regular,
                              iter_bits, metrics, to_dot)

CORPUS = [e for e in default_corpus() if spec_order(e.spec) <= 256]


def g_of(text):
    return build(make_ring(parse(text)))


def test_klein_four_is_a_4_cycle():
    g = g_of("Z(2) x Z(2)")
    assert g.order == 4 and is_regular(g) and set(g.degree.tolist()) == {2}
    assert is_connected(g) and g.edge_count == 4


def test_z4_two_edges():
    g = g_of("Z(4)")
    assert sorted(sorted(c) for c in g.components) == [[0, 2], [1, 3]]
    assert g.adjacent(0, 2) and g.adjacent(1, 3) and not g.adjacent(0, 1)


def test_m2gf2_is_9_regular():
    g = g_of("M(2,GF(2))")
    assert g.order == 16 and set(g.degree.tolist()) == {9}


@pytest.mark.parametrize("text, connected, diam", [
    ("Z(6)", True, 2), ("Z(4)", False, INFINITE), ("Z(2)", False, INFINITE)])
def test_connectivity_and_diameter(text, connected, diam):
    g = g_of(text)
    assert is_connected(g) == connected
    assert diameter(g) == diam


def test_z2_two_isolated_vertices():
    g = g_of("Z(2)")
    assert g.edge_count == 0 and len(g.components) == 2


@pytest.mark.parametrize("text, euler", [
    ("Z(2) x Z(2)", True), ("Z(2) x Z(3)", False), ("GF(4) x GF(2)", True), ("GF(4)", False),
    ("M(2,GF(2))", False), ("Z(2) x Z(2) x Z(2)", True)])
def test_eulerian_examples(text, euler):
    assert is_eulerian(g_of(text)) == euler


@pytest.mark.parametrize("text, counts", [
    ("Z(4)", {"K2": 2}),
    ("Z(9)", {"K3": 1, "K3,3": 1}),
    ("Z(3)", {"K1": 1, "K1,1": 1}),
    ("GF(4)", {"K1": 4}),
    ("Z(8)", {"K4": 2}),
    ("GF(9)", {"K1": 1, "K1,1": 4}),
])
def test_component_profiles(text, counts):
    g = g_of(text)
    assert component_profile(g).counts() == counts
    assert expected_local_profile(g.ring).counts() == counts
    assert component_profile(g).total_vertices() == g.order


def test_profile_kinds_are_real_graph_shapes():
    # brute-force the K_m / K_{m,m} shapes on the naive side for Z(9)
    adj = naive.total_graph(naive.zn(9))
    comps = sorted(naive.components(adj), key=len)
    assert [len(c) for c in comps] == [3, 6]
    k3 = comps[0]
    assert all(adj[v] >= k3 - {v} for v in k3)
    bip = comps[1]
    sides = {frozenset(adj[v]) for v in bip}
    assert len(sides) == 2 and all(len(s) == 3 for s in sides)


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
def test_graph_laws_over_corpus(entry):
    ring = make_ring(entry.spec)
    g = build(ring)
    assert not g.adjacency.diagonal().any()
    assert np.array_equal(g.adjacency, g.adjacency.T)
    assert degree_law_holds(g)
    assert is_eulerian(g) == even_field_product(ring)
    if is_local(ring):
        assert diameter(g) == INFINITE
        assert component_profile(g).counts() == expected_local_profile(ring).counts()
    else:
        assert diameter(g) == 2


@pytest.mark.parametrize("text", ["Z(6)", "Z(9)", "GF(2) x GF(3)", "T(2,GF(3))", "M(2,GF(2))", "Z(3) x Z(3)"])
def test_graph_matches_reference(ring_pair, text):
    ring, ref = ring_pair(text)
    g = build(ring)
    adj = naive.total_graph(ref)
    for x in range(ring.order):
        assert {ring.decode(y) for y in iter_bits(g.rows[x])} == adj[ring.decode(x)]
    assert diameter(g) == naive.diameter(adj)
    assert len(g.components) == len(naive.components(adj))


def test_degree_law_by_parity():
    for text in ["Z(9)", "GF(9)", "Z(3) x Z(3)", "M(2,GF(3))"]:
        ring = make_ring(parse(text))
        g = build(ring)
        z = len(ring.zero_divisors)
        for x in range(ring.order):
            assert g.degree[x] == (z - 1 if x in ring.zero_divisors else z)
    ring = make_ring(parse("Z(12)"))
    assert set(build(ring).degree.tolist()) == {len(ring.zero_divisors) - 1}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_bitset_rows_agree_with_matrix(entry, data):
    g = build(make_ring(entry.spec))
    x = data.draw(st.integers(0, g.order - 1))
    assert set(iter_bits(g.rows[x])) == set(np.flatnonzero(g.adjacency[x]).tolist())


def test_metrics_z6():
    m = metrics(g_of("Z(6)"))
    assert m["order"] == 6 and m["zsize"] == 4 and m["diameter"] == 2
    assert not m["local"] and not m["eulerian"] and m["connected"]
    assert metrics(g_of("Z(4)"))["diameter"] == "inf"


def test_dot_output(tmp_path):
    g = g_of("Z(2) x Z(2)")
    text = to_dot(g, highlight=[0, 1, 3, 2])
    assert text.startswith("graph ") and text.rstrip().endswith("}")
    edges = re.findall(r"^\s+(\d+) -- (\d+)", text, re.M)
    assert len(edges) == g.edge_count
    assert text.count("color=red") == 4
    path = export_dot(g, tmp_path / "g.dot")
    assert path.read_text() == to_dot(g)
    # labels with quotes/brackets stay quoted
    assert '"(1,0)"' in text
