"""Law-by-law verification over a ring corpus.

Each ring gets a row of verdicts (``PASS``/``FAIL``/``WARN``/``SKIP``).  A
``WARN`` marks a closed-form claim that the exact solver disagrees with; it is
reported, never reconciled.  Pairwise product checks, the matrix dominating
sets and the cofactor identity run as separate sections.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import domin, hamilton
from .corpus import CorpusEntry
from .ringcore import (GF, Prod, Ring, ganesan_koh_holds, is_local, make_ring, semisimple_shape, spec_order,
                       structural_radical)
from .totgraph import (INFINITE, build, component_profile, degree_law_holds, diameter,
                       expected_local_profile, is_connected, is_eulerian)

PASS, FAIL, WARN, SKIP = "PASS", "FAIL", "WARN", "SKIP"
PRODUCT_LIMIT = 256
MATRIX_SET_CASES = [(n, f) for n in (2, 3) for f in (GF(2), GF(3), GF(2, 2))]
COFACTOR_EXHAUSTIVE = [GF(2), GF(3)]
COFACTOR_RANDOM = [(2, GF(2, 2)), (2, GF(5)), (3, GF(2)), (3, GF(3)), (3, GF(2, 2))]
COFACTOR_SAMPLES = 1000
SEED = 20240611


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def even_field_product(ring: Ring) -> bool:
    """Is R a product of at least two finite fields of even order (from its structure)?"""
    if ring.radical - {0}:
        return False
    shape = semisimple_shape(ring)
    if not shape.known:
        return False
    return len(shape.factors) >= 2 and all(n == 1 and q % 2 == 0 for n, q in shape.factors)


def _quotient_correspondence(ring: Ring) -> bool:
    q = ring.quotient
    lhs = ring.is_zero_divisor[ring.add_table]
    p = q.project
    rhs = q.quotient.is_zero_divisor[q.quotient.add_table[p[:, None], p[None, :]]]
    return bool(np.array_equal(lhs, rhs))


def _radical_absorption(ring: Ring) -> bool:
    z = np.flatnonzero(ring.is_zero_divisor)
    j = np.flatnonzero(ring.radical_mask)
    return bool(ring.is_zero_divisor[ring.add_table[np.ix_(z, j)]].all())


def check_ring(entry: CorpusEntry, slow: bool = False) -> dict:
    """Run every per-ring law on ``entry``; returns ``{"ring", "values", "laws"}``."""
    ring = make_ring(entry.spec)
    g = build(ring)
    local = is_local(ring)
    laws: dict[str, str] = {}
    values: dict = {
        "order": ring.order,
        "characteristic": ring.characteristic,
        "zsize": len(ring.zero_divisors),
        "radical_size": len(ring.radical),
        "local": local,
        "shape": semisimple_shape(ring).as_json(),
    }

    laws["unit_zd_partition"] = _verdict(
        not (ring.is_unit & ring.is_zero_divisor).any() and (ring.is_unit | ring.is_zero_divisor).all())
    laws["zero_divisor_bound"] = _verdict(ganesan_koh_holds(ring))
    laws["radical_absorption"] = _verdict(_radical_absorption(ring))
    structural = structural_radical(ring)
    laws["radical_structural"] = SKIP if structural is None else _verdict(
        np.array_equal(structural, ring.radical_mask))
    laws["quotient_correspondence"] = _verdict(_quotient_correspondence(ring)) if ring.radical - {0} else SKIP
    laws["degree_law"] = _verdict(degree_law_holds(g))

    euler = is_eulerian(g)
    values["eulerian"] = euler
    laws["eulerian_criterion"] = _verdict(euler == even_field_product(ring))

    diam = diameter(g)
    values["diameter"] = "inf" if diam == INFINITE else int(diam)
    laws["diameter_law"] = _verdict(diam == INFINITE if local else diam == 2)

    profile = component_profile(g)
    values["profile"] = profile.counts()
    if local:
        laws["local_profile"] = _verdict(
            profile.counts() == expected_local_profile(ring).counts() and not is_connected(g))
    else:
        laws["local_profile"] = SKIP

    try:
        cycle = hamilton.ham_cycle(ring)
    except hamilton.LocalRing:
        values["hamiltonian"] = None
        laws["hamiltonian"] = _verdict(local and not is_connected(g))
    else:
        values["hamiltonian"] = {"length": len(cycle.seq), "route": list(cycle.notes)}
        laws["hamiltonian"] = _verdict(not local and bool(hamilton.verify_cycle(ring, cycle.seq)))

    upper = domin.gamma_upper(ring)
    values["gamma_upper"] = upper
    if entry.gamma_slow and not slow:
        values["gamma"] = None
        for law in ("dominating_witness", "gamma_within_bound", "quotient_invariance",
                    "profile_gamma", "local_formula", "conjecture"):
            laws[law] = SKIP
    else:
        report = domin.gamma_report(ring, guard=ring.order if slow else None)
        values["gamma"] = report.exact
        values["gamma_witness"] = report.witness.labels()
        laws["dominating_witness"] = _verdict(domin.dominates(g, report.witness.members)
                                              and report.exact >= report.lower_bound)
        laws["gamma_within_bound"] = _verdict(upper is None or report.exact <= upper)
        if ring.radical - {0}:
            inv = domin.check_quotient_invariance(ring)
            values["quotient_gamma"] = inv.quotient_gamma
            laws["quotient_invariance"] = _verdict(inv.holds)
        else:
            laws["quotient_invariance"] = SKIP
        if local:
            values["profile_gamma"] = report.profile_gamma
            values["local_formula"] = report.local_formula
            laws["profile_gamma"] = _verdict(report.profile_gamma == report.exact)
            laws["local_formula"] = PASS if report.local_formula == report.exact else WARN
        else:
            laws["profile_gamma"] = laws["local_formula"] = SKIP
        if upper is not None:
            conj = domin.conjecture_check(ring, guard=ring.order)
            values["conjecture"] = conj.status
            if conj.status == "Refuted":
                values["conjecture_witness"] = conj.witness.labels()
            laws["conjecture"] = {"Confirmed": PASS, "Refuted": WARN, "Inapplicable": SKIP}[conj.status]
        else:
            laws["conjecture"] = SKIP
    return {"ring": entry.label, "values": values, "laws": laws}


def _check_ring_timed(args) -> tuple[dict, float]:
    entry, slow = args
    start = time.perf_counter()
    row = check_ring(entry, slow)
    return row, time.perf_counter() - start


def check_products(entries: list[CorpusEntry], gammas: dict[str, int], limit: int = PRODUCT_LIMIT) -> list[dict]:
    """Product-min law on every unordered pair (self-pairs included) with ``|R x S| <= limit``."""
    rows = []
    for a, b in itertools.combinations_with_replacement(entries, 2):
        if a.label not in gammas or b.label not in gammas:
            continue
        if spec_order(a.spec) * spec_order(b.spec) > limit:
            continue
        prod = make_ring(Prod((a.spec, b.spec)))
        gp = domin.gamma_exact(build(prod))[0]
        expected = min(gammas[a.label], gammas[b.label])
        rows.append({"pair": [a.label, b.label], "gamma": gp, "min": expected,
                     "law": _verdict(gp == expected)})
    return rows


def check_matrix_sets() -> list[dict]:
    rows = []
    for n, f in MATRIX_SET_CASES:
        dset = domin.matrix_dominating_set(n, f)
        q = spec_order(f)
        ok = domin.verify_matrix_domination(n, f, dset.members) and len(dset) == n * (q - 1) + 1
        rows.append({"n": n, "field_order": q, "size": len(dset), "law": _verdict(ok)})
    return rows


def check_cofactor(samples: int = COFACTOR_SAMPLES, seed: int = SEED) -> list[dict]:
    rows = []
    for f in COFACTOR_EXHAUSTIVE:
        fr = make_ring(f)
        q = fr.order
        count, ok = 0, True
        for entries in itertools.product(range(q), repeat=4):
            a = [list(entries[:2]), list(entries[2:])]
            for j in (1, 2):
                for x in range(q):
                    ok &= domin.det_expansion_check(fr, a, j, x)
                    count += 1
        rows.append({"n": 2, "field_order": q, "mode": "exhaustive", "triples": count, "law": _verdict(ok)})
    rng = np.random.default_rng(seed)
    for n, f in COFACTOR_RANDOM:
        fr = make_ring(f)
        q = fr.order
        ok = True
        for _ in range(samples):
            a = rng.integers(0, q, size=(n, n)).tolist()
            j = int(rng.integers(1, n + 1))
            x = int(rng.integers(0, q))
            ok &= domin.det_expansion_check(fr, a, j, x)
        rows.append({"n": n, "field_order": q, "mode": "random", "triples": samples, "law": _verdict(ok)})
    return rows


def _tally(report: dict) -> dict[str, int]:
    counts = {PASS: 0, FAIL: 0, WARN: 0, SKIP: 0}
    for row in report["rings"]:
        for v in row["laws"].values():
            counts[v] += 1
    for section in ("products", "matrix_sets", "cofactor"):
        for row in report[section]:
            counts[row["law"]] += 1
    return counts


def selfcheck(entries: list[CorpusEntry], slow: bool = False, parallel: bool = False,
              products: bool = True) -> tuple[dict, dict]:
    """Run the full law suite; returns ``(results, timing)``."""
    start = time.perf_counter()
    jobs = [(e, slow) for e in entries]
    if parallel:
        with ProcessPoolExecutor() as pool:
            outcomes = list(pool.map(_check_ring_timed, jobs))
    else:
        outcomes = [_check_ring_timed(job) for job in jobs]
    rows = [row for row, _ in outcomes]
    timing = {"rings": {row["ring"]: round(t, 4) for row, t in outcomes}}

    gammas = {row["ring"]: row["values"]["gamma"] for row in rows if row["values"].get("gamma") is not None}
    t0 = time.perf_counter()
    results = {
        "rings": rows,
        "products": check_products(entries, gammas) if products else [],
    }
    timing["products"] = round(time.perf_counter() - t0, 4)
    t0 = time.perf_counter()
    results["matrix_sets"] = check_matrix_sets()
    results["cofactor"] = check_cofactor()
    timing["matrix_and_cofactor"] = round(time.perf_counter() - t0, 4)
    results["summary"] = _tally(results)
    timing["total"] = round(time.perf_counter() - start, 4)
    return results, timing
