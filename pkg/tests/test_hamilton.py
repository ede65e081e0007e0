import time

import pytest

import naive
from conftest import naive_from_spec
from totring.corpus import default_corpus
from totring.expr import parse
from totring.hamilton import (EdgeViolation, HamPath, InvalidInput, LocalRing, MatrixIndexSet, SearchExhausted,
                              extend_layer_char2, extend_layer_odd, ham_cycle, ham_matrix, ham_matrix_path,
                              ham_product, lift_mod_radical, quotient_cycle, search_ham, verify_cycle)
from totring.ringcore import GF, Mat, Zn, is_local, make_ring, matrix_unit_id
from totring.totgraph import build


def naive_det(f: naive.NaiveRing, m) -> object:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = f.zero
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = f.mul(m[0][j], naive_det(f, sub))
        total = f.add(total, term if j % 2 == 0 else f.neg(term))
    return total


def independent_cycle_check(ring, seq):
    """Re-check a cycle using decoded values and reference arithmetic only."""
    ref = naive_from_spec(ring.spec)
    assert len(seq) == ring.order == len(set(seq))
    values = [ring.decode(x) for x in seq]
    assert set(values) == set(ref.elements)
    if isinstance(ring.spec, Mat) and make_ring(ring.spec.base).is_field:
        f = naive_from_spec(ring.spec.base)
        singular = lambda v: naive_det(f, v) == f.zero  # noqa: E731
    else:
        zds = ref.zero_divisors()
        singular = zds.__contains__
    for a, b in zip(values, values[1:] + values[:1]):
        assert singular(ref.add(a, b)), (a, b)


# --------------------------------------------------------------------------
# verifier


def test_verifier_examples():
    r = make_ring(parse("Z(2) x Z(2)"))
    assert verify_cycle(r, [0, 1, 3, 2])
    v = verify_cycle(r, [0, 1, 1, 2])
    assert not v and v.violation.kind == "DuplicateVertex"
    v = verify_cycle(make_ring(Zn(4)), [0, 1, 2, 3])
    assert not v and v.violation.kind == "NotAdjacent" and v.violation.position == 0
    assert verify_cycle(r, [0, 1]).violation.kind == "TooShort"
    assert verify_cycle(r, [0, 1, 3]).violation.kind == "MissingVertex"
    assert verify_cycle(r, [0, 1, 3, 9]).violation.kind == "BadVertex"


# --------------------------------------------------------------------------
# index sets


def test_index_set_walk():
    idx = MatrixIndexSet(2, 1, 1)
    assert idx.prefix() == frozenset() and idx.closed() == {(1, 1)}
    seen = []
    while idx is not None:
        seen.append((idx.k, idx.l))
        idx = idx.next()
    assert seen == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert MatrixIndexSet(3, 2, 1).prefix() == {(1, 1), (1, 2), (1, 3)}
    assert MatrixIndexSet(3, 2, 2).reduced() == {(1, 1), (1, 2), (1, 3)}
    assert MatrixIndexSet(3, 2, 1).reduced() == {(1, 1), (1, 2)}


def test_full_closed_support_is_everything():
    m = make_ring(Mat(2, GF(3)))
    assert MatrixIndexSet(2, 2, 2).closed_support(m) == list(range(81))
    assert MatrixIndexSet(2, 1, 1).support(m) == [0]


# --------------------------------------------------------------------------
# layer extensions


def test_char2_first_layer():
    m = make_ring(Mat(2, GF(2)))
    p = extend_layer_char2(HamPath((0,), m), 1, 1)
    assert p.seq == (0, matrix_unit_id(2, 2, 1, 1))


def test_char2_first_layer_gf4():
    m = make_ring(Mat(2, GF(2, 2)))
    p = extend_layer_char2(HamPath((0,), m), 1, 1)
    assert p.seq == (0,) + tuple(matrix_unit_id(2, 4, 1, 1, x) for x in (1, 2, 3))
    for a, b in zip(p.seq, p.seq[1:]):
        assert m.add(a, b) in m.zero_divisors


def test_odd_first_layer():
    m = make_ring(Mat(2, GF(3)))
    p = extend_layer_odd(HamPath((0,), m), 1, 1)
    assert sorted(p.seq) == sorted(matrix_unit_id(2, 3, 1, 1, x) for x in (0, 1, 2))


def _paths_from_zero(m, support):
    """All Hamiltonian paths of tau restricted to ``support`` starting at 0 (small supports only)."""
    rest = [x for x in support if x != 0]
    out = []

    def grow(path, left):
        if not left:
            out.append(tuple(path))
            return
        for x in left:
            if m.add(path[-1], x) in m.zero_divisors:
                grow(path + [x], left - {x})

    grow([0], set(rest))
    return out


def test_odd_endpoint_contract():
    m = make_ring(Mat(2, GF(3)))
    idx = MatrixIndexSet(2, 2, 1)
    paths = _paths_from_zero(m, idx.support(m))
    good = [p for p in paths if any(idx.in_C(m, p[-1], c) for c in (1, 2))]
    bad = [p for p in paths if not any(idx.in_C(m, p[-1], c) for c in (1, 2))]
    assert good and bad
    for p in good:
        ext = extend_layer_odd(HamPath(p, m), 2, 1)
        assert sorted(ext.seq) == idx.closed_support(m)
    with pytest.raises(InvalidInput):
        extend_layer_odd(HamPath(bad[0], m), 2, 1)


def test_layer_input_must_cover_support():
    m = make_ring(Mat(2, GF(3)))
    with pytest.raises(InvalidInput):
        extend_layer_odd(HamPath((0,), m), 1, 2)
    e = lambda x: matrix_unit_id(2, 3, 1, 1, x)  # noqa: E731
    with pytest.raises(InvalidInput):
        extend_layer_odd(HamPath((e(1), 0, e(2)), m), 1, 2)


def test_layer_input_edges_are_checked():
    m = make_ring(Mat(2, GF(3)))
    # id order on A_{2,2} steps from [[0,0],[2,0]] to [[0,1],[0,0]], an invertible sum
    support = MatrixIndexSet(2, 2, 2).support(m)
    with pytest.raises(EdgeViolation):
        extend_layer_odd(HamPath(tuple(support), m), 2, 2)


def test_wrong_characteristic_rejected():
    with pytest.raises(InvalidInput):
        extend_layer_odd(HamPath((0,), make_ring(Mat(2, GF(2)))), 1, 1)
    with pytest.raises(InvalidInput):
        extend_layer_char2(HamPath((0,), make_ring(Mat(2, GF(3)))), 1, 1)
    with pytest.raises(InvalidInput):
        ham_matrix_path(1, make_ring(GF(2)))


@pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2)])
def test_matrix_path_is_hamiltonian(n, q):
    field = make_ring(parse(f"GF({q})"))
    path = ham_matrix_path(n, field)
    m = path.ring
    assert sorted(path.seq) == list(range(m.order))
    for a, b in zip(path.seq, path.seq[1:]):
        assert m.add(a, b) in m.zero_divisors


@pytest.mark.parametrize("n, q, length", [(2, 2, 16), (2, 3, 81), (3, 2, 512), (2, 4, 256), (2, 7, 2401)])
def test_ham_matrix(n, q, length):
    start = time.perf_counter()
    cyc = ham_matrix(n, make_ring(parse(f"GF({q})")))
    assert len(cyc) == length and verify_cycle(cyc.ring, cyc.seq)
    assert time.perf_counter() - start < 5


@pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_ham_matrix_independent(n, q):
    cyc = ham_matrix(n, make_ring(parse(f"GF({q})")))
    independent_cycle_check(cyc.ring, list(cyc.seq))


# --------------------------------------------------------------------------
# products, lifting, search


def test_product_klein_four():
    z2 = make_ring(Zn(2))
    cyc = ham_product(z2, z2)
    assert len(cyc) == 4 and verify_cycle(cyc.ring, cyc.seq)
    # a 4-cycle on C_4 visits both neighbours of 0 at positions 1 and 3
    nbrs = {cyc.seq[1], cyc.seq[3]}
    assert nbrs == {x for x in range(4) if build(cyc.ring).adjacent(0, x)}


@pytest.mark.parametrize("a, b", [("Z(3)", "Z(3)"), ("Z(2)", "Z(3)"), ("Z(3)", "Z(2)"), ("GF(9)", "Z(5)"),
                                  ("Z(9)", "Z(3)"), ("GF(4)", "Z(4)"), ("M(2,GF(3))", "Z(5)"), ("Z(3)", "Z(7)")])
def test_ham_product(a, b):
    r, s = make_ring(parse(a)), make_ring(parse(b))
    cyc = ham_product(r, s)
    assert len(cyc) == r.order * s.order
    independent_cycle_check(cyc.ring, list(cyc.seq))


def test_lift_examples():
    t2 = make_ring(parse("T(2,GF(2))"))
    reps, _ = quotient_cycle(t2)
    cyc = lift_mod_radical(t2, reps)
    assert len(cyc) == 8
    independent_cycle_check(t2, list(cyc.seq))
    z12 = make_ring(Zn(12))
    q = z12.quotient
    qcyc = search_ham(build(q.quotient))
    cyc = lift_mod_radical(z12, [int(q.section[c]) for c in qcyc.seq])
    assert len(cyc) == 12
    independent_cycle_check(z12, list(cyc.seq))


def test_lift_rejects_z4():
    z4 = make_ring(Zn(4))
    with pytest.raises(InvalidInput):
        lift_mod_radical(z4, [0, 1])


def test_search_examples():
    cyc = search_ham(build(make_ring(Zn(6))))
    assert len(cyc) == 6 and verify_cycle(cyc.ring, cyc.seq)
    cyc = search_ham(build(make_ring(parse("Z(2) x Z(2)"))))
    assert len(cyc) == 4
    with pytest.raises(SearchExhausted):
        search_ham(build(make_ring(Zn(4))))


def test_search_budget():
    with pytest.raises(SearchExhausted):
        search_ham(build(make_ring(parse("M(2,GF(3))"))), max_nodes=10)


NON_LOCAL = [e for e in default_corpus() if not is_local(make_ring(e.spec))]
LOCAL = [e for e in default_corpus() if is_local(make_ring(e.spec))]


@pytest.mark.parametrize("entry", NON_LOCAL, ids=lambda e: e.label)
def test_ham_cycle_corpus(entry):
    ring = make_ring(entry.spec)
    start = time.perf_counter()
    cyc = ham_cycle(ring)
    assert time.perf_counter() - start < 5
    assert verify_cycle(ring, cyc.seq)


@pytest.mark.parametrize("text", ["Z(2) x Z(2)", "Z(2) x Z(3)", "Z(3) x Z(3)", "Z(12)", "T(2,GF(2))",
                                  "M(2,Z(4))", "T(2,GF(3))", "M(2,GF(2)) x GF(3)", "Z(2) x Z(3) x Z(5)"])
def test_ham_cycle_independent(text):
    ring = make_ring(parse(text))
    independent_cycle_check(ring, list(ham_cycle(ring).seq))


@pytest.mark.parametrize("entry", LOCAL, ids=lambda e: e.label)
def test_local_rings_refused(entry):
    with pytest.raises(LocalRing):
        ham_cycle(make_ring(entry.spec))
