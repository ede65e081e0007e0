"""Command line front end: ``totring <command> [options] EXPR``.

Exit codes: 0 success (or Confirmed), 1 verification failure (or Refuted),
2 usage error, 3 order or solve guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, domin, hamilton
from .corpus import default_corpus, load_corpus
from .expr import ExprSyntaxError, format_spec, parse
from .ringcore import (Mat, OrderGuardExceeded, RingAxiomError, RingError, is_local, make_ring,
                       semisimple_shape)
from .selfcheck import FAIL, selfcheck
from .totgraph import build, export_dot, metrics

SCHEMA = "totring.report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ring(args):
    try:
        spec = parse(args.expr)
    except ExprSyntaxError as exc:
        raise UsageError(str(exc)) from exc
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load ring: {exc}") from exc
    return make_ring(spec)


def _solve_guard(args, ring) -> int | None:
    return max(ring.order, domin.default_solve_guard()) if args.slow else None


# --------------------------------------------------------------------------
# commands; each returns (ring label, results, exit code)


def cmd_analyze(args):
    ring = _ring(args)
    g = build(ring)
    results = {
        "order": ring.order,
        "characteristic": ring.characteristic,
        "units": len(ring.units),
        "zsize": len(ring.zero_divisors),
        "radical_size": len(ring.radical),
        "field": ring.is_field,
        "shape": semisimple_shape(ring).as_json(),
    }
    results.update(metrics(g))
    if args.dot:
        export_dot(g, args.dot)
    return ring.label, results, EXIT_OK


def cmd_graph(args):
    ring = _ring(args)
    g = build(ring)
    results = metrics(g)
    results["edges"] = g.edge_count
    results["degrees"] = {ring.element_label(x): int(g.degree[x]) for x in range(ring.order)}
    results["components"] = [[ring.element_label(x) for x in comp] for comp in g.components]
    if args.dot:
        export_dot(g, args.dot)
    return ring.label, results, EXIT_OK


def cmd_hamilton(args):
    ring = _ring(args)
    try:
        cycle = hamilton.ham_cycle(ring)
    except hamilton.LocalRing as exc:
        return ring.label, {"hamiltonian": False, "local": True, "reason": str(exc)}, EXIT_FAIL
    verdict = hamilton.verify_cycle(ring, cycle.seq)
    results = {
        "hamiltonian": verdict.ok,
        "length": len(cycle),
        "route": list(cycle.notes),
        "verified": verdict.ok,
        "cycle": cycle.labels(),
    }
    if not verdict.ok:
        results["violation"] = {"kind": verdict.violation.kind, "detail": verdict.violation.detail}
    if args.emit_edges:
        seq = list(cycle.seq)
        lines = [f"{ring.element_label(a)}\t{ring.element_label(b)}" for a, b in zip(seq, seq[1:] + seq[:1])]
        Path(args.emit_edges).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.dot:
        export_dot(build(ring), args.dot, highlight=list(cycle.seq))
    return ring.label, results, EXIT_OK if verdict.ok else EXIT_FAIL


def _conjecture(ring, guard):
    conj = domin.conjecture_check(ring, guard)
    out = {"status": conj.status, "exact": conj.exact, "bound": conj.bound}
    if conj.witness is not None:
        out["witness"] = conj.witness.labels()
    return out, EXIT_FAIL if conj.status == "Refuted" else EXIT_OK


def _matrix_set(ring):
    spec = ring.spec
    if not isinstance(spec, Mat) or not make_ring(spec.base).is_field:
        raise UsageError("--set needs a matrix ring over a field, e.g. M(2,GF(4))")
    field = make_ring(spec.base)
    dset = domin.matrix_dominating_set(spec.n, field)
    ok = domin.verify_matrix_domination(spec.n, field, dset.members)
    return {"size": len(dset), "members": dset.labels(), "dominates": ok}, EXIT_OK if ok else EXIT_FAIL


def cmd_dominate(args):
    ring = _ring(args)
    guard = _solve_guard(args, ring)
    results, code = {}, EXIT_OK
    exact = args.exact or not (args.bound or args.set or args.conjecture)
    if args.bound:
        results["upper_bound"] = domin.gamma_upper(ring)
        if is_local(ring):
            results["local_formula"] = domin.gamma_local_formula(ring)
            results["profile_gamma"] = domin.gamma_from_profile(ring)
    if args.set:
        results["matrix_set"], c = _matrix_set(ring)
        code = max(code, c)
    if exact:
        report = domin.gamma_report(ring, guard)
        results.update(report.as_json())
        if not (report.flags["within_bound"] and report.flags["above_degree_bound"]):
            code = EXIT_FAIL
    if args.conjecture:
        results["conjecture"], c = _conjecture(ring, guard)
        code = max(code, c)
    return ring.label, results, code


def cmd_conjecture(args):
    ring = _ring(args)
    results, code = _conjecture(ring, _solve_guard(args, ring))
    return ring.label, results, code


def cmd_quotient(args):
    ring = _ring(args)
    q = ring.quotient
    qr = q.quotient
    results = {
        "order": ring.order,
        "radical": [ring.element_label(x) for x in sorted(ring.radical)],
        "quotient_order": qr.order,
        "quotient_units": len(qr.units),
        "local": is_local(ring),
        "shape": semisimple_shape(ring).as_json(),
        "cosets": [[ring.element_label(int(x)) for x in c] for c in q.cosets],
    }
    model = ring.semisimple_model
    if model is not None:
        results["model"] = [f"M({n},{format_spec(f)})" if n > 1 else format_spec(f) for n, f in model.factors]
    code = EXIT_OK
    if args.gamma:
        inv = domin.check_quotient_invariance(ring, _solve_guard(args, ring))
        results["invariance"] = {
            "ring_gamma": inv.ring_gamma,
            "quotient_gamma": inv.quotient_gamma,
            "projected_dominates": inv.projected_dominates,
            "lifted_dominates": inv.lifted_dominates,
            "holds": inv.holds,
        }
        code = EXIT_OK if inv.holds else EXIT_FAIL
    return ring.label, results, code


def cmd_check(args):
    if args.corpus:
        try:
            entries = load_corpus(args.corpus)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        label = str(args.corpus)
    else:
        entries = default_corpus()
        label = "default-corpus"
    results, timing = selfcheck(entries, slow=args.slow, parallel=args.parallel, products=not args.no_products)
    args._timing = timing
    return label, results, EXIT_FAIL if results["summary"][FAIL] else EXIT_OK


HANDLERS = {
    "analyze": cmd_analyze,
    "graph": cmd_graph,
    "hamilton": cmd_hamilton,
    "dominate": cmd_dominate,
    "quotient": cmd_quotient,
    "check": cmd_check,
    "conjecture": cmd_conjecture,
}


# --------------------------------------------------------------------------
# argument parsing and output


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--dot", metavar="FILE", help="write the total graph as DOT")
    common.add_argument("--max-order", type=int, metavar="N", help="ring order guard (TOTRING_MAX_ORDER)")
    common.add_argument("--slow", action="store_true", help="lift the solve guard to the ring order")
    common.add_argument("--parallel", action="store_true", help="run corpus entries in worker processes")

    parser = argparse.ArgumentParser(prog="totring", description="Total graphs of finite rings.")
    parser.add_argument("--version", action="version", version=f"totring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def ring_command(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("expr", help='ring expression, e.g. "M(2,GF(2))" or "Z(3) x GF(4)"')
        return p

    ring_command("analyze", "ring and graph summary")
    ring_command("graph", "degrees, components and DOT export")
    p = ring_command("hamilton", "construct and verify a Hamiltonian cycle")
    p.add_argument("--emit-edges", metavar="FILE", help="write the cycle edges, one per line")
    p = ring_command("dominate", "domination number and bounds")
    p.add_argument("--exact", action="store_true", help="exact domination number (default)")
    p.add_argument("--bound", action="store_true", help="closed-form upper bound and local formulas")
    p.add_argument("--set", action="store_true", help="explicit dominating set for M(n, GF(q))")
    p.add_argument("--conjecture", action="store_true", help="compare exact value with the bound")
    p = ring_command("quotient", "Jacobson radical and R/J")
    p.add_argument("--gamma", action="store_true", help="also compare gamma(R) with gamma(R/J)")
    ring_command("conjecture", "equality test for the matrix bound")
    p = sub.add_parser("check", parents=[common], help="run the law suite over a ring corpus")
    p.add_argument("--corpus", metavar="FILE", help="one ring expression per line")
    p.add_argument("--no-products", action="store_true", help="skip the pairwise product section")
    return parser


def _config(args) -> dict:
    skip = {"command", "expr", "json", "_timing"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["max_order"] = int(os.environ.get("TOTRING_MAX_ORDER", 0)) or None
    return cfg


def _print_text(report: dict, out) -> None:
    print(f"{report['command']} {report['ring']}", file=out)
    for key, value in report["results"].items():
        if isinstance(value, (list, dict)) and len(json.dumps(value)) > 100:
            value = json.dumps(value)[:97] + "..."
        print(f"  {key}: {value}", file=out)
    for err in report["errors"]:
        print(f"  error ({err['type']}): {err['message']}", file=out)


def run(argv: list[str] | None = None, out=None) -> tuple[int, dict | None]:
    """Parse ``argv``, run the command and return ``(exit code, report)``."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    if args.max_order is not None and args.max_order < 1:
        print("totring: --max-order must be positive", file=sys.stderr)
        return EXIT_USAGE, None
    saved = os.environ.get("TOTRING_MAX_ORDER")
    if args.max_order is not None:
        os.environ["TOTRING_MAX_ORDER"] = str(args.max_order)

    errors: list[dict] = []
    label, results = getattr(args, "expr", None) or getattr(args, "corpus", None), {}
    start = time.perf_counter()
    try:
        label, results, code = HANDLERS[args.command](args)
    except UsageError as exc:
        errors.append({"type": "UsageError", "message": str(exc)})
        code = EXIT_USAGE
    except (OrderGuardExceeded, domin.SolveGuardExceeded) as exc:
        errors.append({"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_GUARD
    except (RingError, domin.DominationError, hamilton.HamiltonError) as exc:
        errors.append({"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_USAGE if isinstance(exc, RingAxiomError) else EXIT_FAIL
    finally:
        config = _config(args)
        # run() may be called in-process; do not leak --max-order
        if saved is None:
            os.environ.pop("TOTRING_MAX_ORDER", None)
        else:
            os.environ["TOTRING_MAX_ORDER"] = saved
    timing = {"seconds": round(time.perf_counter() - start, 4)}
    timing.update(getattr(args, "_timing", {}))

    report = {
        "schema": SCHEMA,
        "command": args.command,
        "ring": label,
        "results": results,
        "errors": errors,
        "timing": timing,
        "version": __version__,
        "config": config,
    }
    if args.json:
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_text(report, out)
    return code, report


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
