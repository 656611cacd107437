"""Recursive-descent parser for polynomials in x1, x2 with exact rational coefficients.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom (('^' | '**') INT)?
    atom   := INT ['/' INT] | 'x1' | 'x2' | '(' expr ')'

Errors carry the byte offset of the offending token in the UTF-8 input.
"""
from __future__ import annotations

import re
from fractions import Fraction

from ..errors import NonRationalCoefficient, ParseError
from ..poly import Polynomial

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<var>x[12](?![0-9A-Za-z_]))
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<pow>\*\*|\^)
  | (?P<op>[-+*/()])
""", re.VERBOSE)


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        off = len(text[:pos].encode())
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", off)
        kind = m.lastgroup
        if kind == "float":
            raise NonRationalCoefficient(f"decimal literal {m.group()!r}; write coefficients as p/q", off)
        if kind == "name":
            raise NonRationalCoefficient(f"symbol {m.group()!r} is not a rational coefficient or x1/x2", off)
        if kind != "ws":
            out.append((kind, m.group(), off))
        pos = m.end()
    out.append(("end", "", len(text.encode())))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, v, off = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", off)

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        if self.peek()[:2] == ("op", "/"):
            raise ParseError("'/' is only allowed inside a rational literal p/q", self.peek()[2])
        return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "pow":
            self.take()
            kind, v, off = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", off)
            base = base ** int(v)
        return base

    def atom(self) -> Polynomial:
        kind, v, off = self.take()
        if kind == "int":
            c = Fraction(int(v))
            if self.peek()[:2] == ("op", "/"):
                self.take()
                k2, v2, off2 = self.take()
                if k2 != "int":
                    raise ParseError("denominator must be a positive integer", off2)
                if int(v2) == 0:
                    raise ParseError("zero denominator", off2)
                c = Fraction(int(v), int(v2))
            return Polynomial.constant(c)
        if kind == "var":
            return Polynomial.x1() if v == "x1" else Polynomial.x2()
        if (kind, v) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        if (kind, v) == ("op", "-"):
            return -self.atom()
        raise ParseError(f"unexpected {v or 'end of input'!r}", off)


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``text`` into an exact Polynomial; duplicate monomials are summed."""
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    out = p.expr()
    kind, v, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {v!r}", off)
    return out
