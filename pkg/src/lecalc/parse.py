"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace insensitive)::

    expr   := term  (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' INT)?
    atom   := NUMBER | IDENT | '(' expr ')'

``NUMBER`` is an integer or rational literal like ``7`` or ``3/4``;
``IDENT`` must be a frame variable.  Multiplication is always explicit:
``2x`` is a syntax error, ``2*x`` is not.  Errors carry a 1-based column.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .ring import Polynomial, PolyRing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            col = len(text) - len(rest) + 1
            raise ParseError(f"unexpected character {rest[0]!r}", col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, col = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", col)
        return self.advance()

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, value, col = self.peek()
        if kind != "end":
            hint = " (multiplication must be explicit)" if kind in ("ident", "num") else ""
            raise ParseError(f"unexpected {value!r}{hint}", col)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                q = self.term()
                p = p + q if value == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        kind, value, col = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return -self.factor()
        p = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, col = self.peek()
            if kind != "num" or "/" in value:
                raise ParseError("expected integer exponent", col)
            self.advance()
            p = p ** int(value)
        return p

    def atom(self) -> Polynomial:
        kind, value, col = self.peek()
        if kind == "num":
            self.advance()
            if "/" in value:
                a, b = value.split("/")
                return self.ring.const(Fraction(int(a), int(b)))
            return self.ring.const(int(value))
        if kind == "ident":
            self.advance()
            return self.ring.var(value)  # raises UnknownVariableError
        if kind == "op" and value == "(":
            self.advance()
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError("expected a value", col)


def parse(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``text`` into a canonical polynomial of ``ring``."""
    return _Parser(text, ring).parse()
