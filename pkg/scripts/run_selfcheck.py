"""Run the law suite over the built-in corpus and write the JSON report.

    python3 scripts/run_selfcheck.py [--slow] [--out selfcheck.json]
"""

import argparse
import json
import sys

from totring.corpus import default_corpus
from totring.selfcheck import FAIL, selfcheck


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--slow", action="store_true", help="exact domination on the large matrix rings too")
    ap.add_argument("--parallel", action="store_true")
    ap.add_argument("--out", default="selfcheck.json")
    args = ap.parse_args()

    results, timing = selfcheck(default_corpus(), slow=args.slow, parallel=args.parallel)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump({"results": results, "timing": timing}, fh, indent=2)

    for row in results["rings"]:
        bad = [k for k, v in row["laws"].items() if v not in ("PASS", "SKIP")]
        print(f"{row['ring']:<22} gamma={row['values'].get('gamma')!s:<5} {' '.join(bad) or 'ok'}")
    failed = [r["pair"] for r in results["products"] if r["law"] == FAIL]
    print(f"product-min failures: {len(failed)} / {len(results['products'])}")
    print("summary:", results["summary"], f"({timing['total']:.1f} s) -> {args.out}")
    return 1 if results["summary"][FAIL] else 0


if __name__ == "__main__":
    sys.exit(main())
