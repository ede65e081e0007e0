import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from totring.expr import parse  # noqa: E402
from totring.ringcore import GF, Mat, Prod, Tri, Zn, make_ring  # noqa: E402

import naive  # noqa: E402


def naive_from_spec(spec) -> naive.NaiveRing:
    if isinstance(spec, Zn):
        return naive.zn(spec.n)
    if isinstance(spec, GF):
        return naive.gf(spec.p, spec.k)
    if isinstance(spec, Mat):
        return naive.mat(spec.n, naive_from_spec(spec.base))
    if isinstance(spec, Tri):
        return naive.mat(spec.n, naive_from_spec(spec.base), upper=True)
    if isinstance(spec, Prod):
        return naive.prod(*(naive_from_spec(f) for f in spec.factors))
    raise TypeError(spec)


@pytest.fixture
def ring_pair():
    """``ring_pair("Z(6)")`` gives (package ring, naive reference ring)."""
    def make(text):
        spec = parse(text)
        return make_ring(spec), naive_from_spec(spec)
    return make


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}" + (f": {detail}" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
