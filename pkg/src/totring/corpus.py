"""The built-in ring corpus used by ``totring check`` and the acceptance suite."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .expr import ExprSyntaxError, format_spec, parse
from .ringcore import RingSpec, Table


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    spec: RingSpec
    gamma_slow: bool = False  # exact domination only under --slow


def dual_numbers_gf3() -> Table:
    """GF(3)[e]/(e^2): a local ring of order 9 given only by its tables."""
    data = json.loads(resources.files("totring").joinpath("data/dual3.json").read_text(encoding="utf-8"))
    return Table.from_dict(data, name="dual3.json")


_EXPRESSIONS = [
    ("Z(2)", False),
    ("Z(3)", False),
    ("Z(4)", False),
    ("Z(6)", False),
    ("Z(8)", False),
    ("Z(9)", False),
    ("Z(12)", False),
    ("GF(4)", False),
    ("GF(8)", False),
    ("GF(9)", False),
    ("GF(2) x GF(2)", False),
    ("GF(2) x GF(3)", False),
    ("Z(3) x Z(3)", False),
    ("GF(4) x GF(2)", False),
    ("M(2,GF(2))", False),
    ("M(2,GF(3))", False),
    ("M(2,GF(4))", True),
    ("M(3,GF(2))", True),
    ("T(2,GF(2))", False),
    ("T(2,GF(3))", False),
    ("M(2,Z(4))", False),
    ("M(2,GF(2)) x GF(3)", False),
]


def default_corpus() -> list[CorpusEntry]:
    entries = [CorpusEntry(text, parse(text), slow) for text, slow in _EXPRESSIONS]
    entries.append(CorpusEntry("GF(3)[e]/(e^2)", dual_numbers_gf3()))
    return entries


def load_corpus(path: str | Path) -> list[CorpusEntry]:
    """One ring expression per line; blank lines and ``#`` comments are ignored."""
    entries = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            spec = parse(text)
        except ExprSyntaxError as exc:
            exc.args = (f"{path}:{lineno}: {exc}",)
            raise
        entries.append(CorpusEntry(format_spec(spec), spec))
    if not entries:
        raise ValueError(f"corpus file {path} is empty")
    return entries
