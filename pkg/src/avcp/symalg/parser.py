"""Recursive-descent parser for polynomial expressions.

Grammar (ASCII)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*      # divisor must be a scalar monomial
    factor := ("+" | "-") factor | base ("^" uint)?
    base   := number | ident | "(" expr ")"
    number := integer | decimal                 # "3/4" parses as 3 divided by 4
    ident  := letter (letter | digit | "_")*    # reserved: hbar, i

In ``"classical"`` context products commute and the result is a
:class:`ClassicalPoly`; in ``"operator"`` context factor order is kept and the
result is an :class:`NCPoly` bound to the given algebra.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError, UnknownSymbol
from .polys import HBAR, I_UNIT, ClassicalPoly, CommutationSpec, NCPoly

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.lastgroup is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, context: str, algebra: CommutationSpec | None, scalars=(), symbols=()):
        if context not in ("classical", "operator"):
            raise ValueError("context must be 'classical' or 'operator'")
        self.text = text
        self.context = context
        self.algebra = algebra
        self.tokens = tokenize(text)
        self.i = 0
        self.scalars = set(scalars) | {HBAR}
        self.symbols: set[str] = set(symbols)
        if algebra is not None:
            self.scalars |= set(algebra.scalars)
            self.symbols |= set(algebra.symbols)

    # helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.pos, self.text)

    def const(self, c):
        if self.context == "classical":
            return ClassicalPoly.const(c)
        return NCPoly.const(c, self.algebra)

    # grammar
    def parse(self):
        if self.tok.kind == "end":
            self.error("empty expression")
        out = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return out

    def expr(self):
        out = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            at = self.tok
            rhs = self.factor()
            if op.text == "*":
                out = out * rhs
            else:
                try:
                    out = out * rhs.inverse_scalar()
                except ZeroDivisionError:
                    self.error("division only by nonzero scalar monomials", at)
        return out

    def factor(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = self.advance().text
            f = self.factor()
            return -f if sign == "-" else f
        base = self.base()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                self.error("exponent must be a non-negative integer")
            self.advance()
            base = base ** int(t.text)
        return base

    def base(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return self.const(Fraction(t.text))
        if t.kind == "ident":
            self.advance()
            return self.ident(t)
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self.error("expected ')'")
            self.advance()
            return inner
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")

    def ident(self, t: Token):
        name = t.text
        if name == "i":
            return self.const(I_UNIT)
        cls = ClassicalPoly if self.context == "classical" else None
        if name in self.scalars:
            if cls:
                return ClassicalPoly.scalar_symbol(name)
            return NCPoly.scalar_symbol(name, self.algebra)
        if name in self.symbols:
            if cls:
                return ClassicalPoly.symbol(name)
            return NCPoly.symbol(name, self.algebra)
        err = UnknownSymbol(f"unknown symbol {name!r} at offset {t.pos}")
        err.position = t.pos
        raise err


def parse_expression(text: str, context: str = "classical", algebra: CommutationSpec | None = None,
                     scalars=(), symbols=()):
    """Parse ``text``; ``scalars``/``symbols`` add names beyond the algebra's."""
    return _Parser(text, context, algebra, scalars, symbols).parse()
