"""Ring expressions: ``Z(6)``, ``GF(4) x Z(3)``, ``M(2,GF(3))``, ``T(2,GF(2))``, ``@ring.json``.

Grammar::

    expr := term ("x" term)*
    term := "Z(" int ")" | "GF(" int ["," int] ")" | "M(" int "," expr ")"
          | "T(" int "," gf-term ")" | "@" filepath | "(" expr ")"

``GF(q)`` with ``q`` a prime power is shorthand for ``GF(p,k)``.  A chain of
``x`` products parses to one flat :class:`~totring.ringcore.Prod`.
"""

from __future__ import annotations

import re

from sympy import perfect_power

from .ringcore import GF, Mat, Prod, RingSpec, Table, Tri, Zn


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_INT = re.compile(r"\d+")
_PATH = re.compile(r"[^\s()]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def expect(self, token: str):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            raise ExprSyntaxError(f"expected {token!r}, found {found!r}", self.pos)
        self.pos += len(token)

    def integer(self) -> int:
        self.skip_ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise ExprSyntaxError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def expr(self) -> RingSpec:
        factors = [self.term()]
        while self._product_sign():
            factors.append(self.term())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def _product_sign(self) -> bool:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] in "x*×":
            self.pos += 1
            return True
        return False

    def term(self) -> RingSpec:
        self.skip_ws()
        if self.peek("GF("):
            self.expect("GF(")
            p = self.integer()
            if self.peek(","):
                self.expect(",")
                k = self.integer()
            else:
                pp = perfect_power(p) if p > 3 else False
                p, k = (int(pp[0]), int(pp[1])) if pp else (p, 1)
            self.expect(")")
            return GF(p, k)
        if self.peek("Z("):
            self.expect("Z(")
            n = self.integer()
            self.expect(")")
            return Zn(n)
        if self.peek("M("):
            self.expect("M(")
            n = self.integer()
            self.expect(",")
            base = self.expr()
            self.expect(")")
            return Mat(n, base)
        if self.peek("T("):
            self.expect("T(")
            n = self.integer()
            self.expect(",")
            start = self.pos
            base = self.term()
            if not isinstance(base, GF):
                raise ExprSyntaxError("T(n, ...) needs a GF(...) base", start)
            self.expect(")")
            return Tri(n, base)
        if self.peek("@"):
            self.expect("@")
            m = _PATH.match(self.text, self.pos)
            if not m:
                raise ExprSyntaxError("expected a file path", self.pos)
            self.pos = m.end()
            return Table.from_json(m.group())
        if self.peek("("):
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return inner
        found = self.text[self.pos:self.pos + 1] or "end of input"
        raise ExprSyntaxError(f"expected a ring term, found {found!r}", self.pos)


def parse(text: str) -> RingSpec:
    """Parse a ring expression into a spec; raises :class:`ExprSyntaxError`."""
    parser = _Parser(text)
    spec = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ExprSyntaxError(f"unexpected {text[parser.pos]!r}", parser.pos)
    return spec


def format_spec(spec: RingSpec) -> str:
    """Canonical text for ``spec``; ``parse(format_spec(s)) == s`` except for Table names."""
    if isinstance(spec, Zn):
        return f"Z({spec.n})"
    if isinstance(spec, GF):
        return f"GF({spec.q})" if spec.k > 1 else f"GF({spec.p})"
    if isinstance(spec, Mat):
        return f"M({spec.n},{format_spec(spec.base)})"
    if isinstance(spec, Tri):
        return f"T({spec.n},{format_spec(spec.base)})"
    if isinstance(spec, Prod):
        parts = []
        for f in spec.factors:
            text = format_spec(f)
            parts.append(f"({text})" if isinstance(f, Prod) else text)
        return " x ".join(parts)
    if isinstance(spec, Table):
        return f"@{spec.name}" if spec.name else f"Table({spec.order})"
    raise TypeError(f"not a ring spec: {spec!r}")
