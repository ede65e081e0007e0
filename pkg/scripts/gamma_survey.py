"""Tabulate exact domination numbers against the closed forms.

For every corpus ring up to ``--limit`` elements this prints gamma, the
matrix bound, the local formula and the component-profile value, then the
same for pairwise products together with min(gamma(R), gamma(S)).

    python3 scripts/gamma_survey.py [--limit 256] [--csv survey.csv]
"""

import argparse
import csv
import itertools
import time

from totring import domin
from totring.corpus import default_corpus
from totring.ringcore import Prod, make_ring, spec_order
from totring.totgraph import build


def _fmt(v):
    return "-" if v is None else str(v)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=256, help="largest ring order to solve")
    ap.add_argument("--csv", help="also write the rows to this file")
    args = ap.parse_args()

    entries = [e for e in default_corpus() if spec_order(e.spec) <= args.limit]
    rows, gammas = [], {}
    print(f"{'ring':<22}{'|R|':>5}{'gamma':>7}{'bound':>7}{'formula':>9}{'profile':>9}")
    for e in entries:
        ring = make_ring(e.spec)
        rep = domin.gamma_report(ring)
        gammas[e.label] = rep.exact
        print(f"{e.label:<22}{ring.order:>5}{rep.exact:>7}{_fmt(rep.upper_bound):>7}"
              f"{_fmt(rep.local_formula):>9}{_fmt(rep.profile_gamma):>9}")
        rows.append({"ring": e.label, "order": ring.order, "gamma": rep.exact, "bound": rep.upper_bound,
                     "formula": rep.local_formula, "profile": rep.profile_gamma, "min": None})

    print(f"\n{'product':<44}{'|RxS|':>6}{'gamma':>7}{'min':>5}")
    for a, b in itertools.combinations_with_replacement(entries, 2):
        if spec_order(a.spec) * spec_order(b.spec) > args.limit:
            continue
        ring = make_ring(Prod((a.spec, b.spec)))
        t = time.perf_counter()
        g = domin.gamma_exact(build(ring))[0]
        lo = min(gammas[a.label], gammas[b.label])
        mark = "" if g == lo else "  <- differs"
        print(f"{'[' + a.label + '] x [' + b.label + ']':<44}{ring.order:>6}{g:>7}{lo:>5}{mark}"
              f"  ({time.perf_counter() - t:.2f} s)")
        rows.append({"ring": f"[{a.label}] x [{b.label}]", "order": ring.order, "gamma": g, "bound": None,
                     "formula": None, "profile": None, "min": lo})

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
