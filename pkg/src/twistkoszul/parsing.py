"""Recursive-descent parser shared by polynomials and Clifford expressions.

Grammar (standard precedence, left association)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | <juxtaposition>) unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

Juxtaposition multiplies, so ``t1 t2`` means ``t1*t2``.  Division is only
allowed by a nonzero constant.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cyclo import scalar_inv, zeta
from .poly import Poly, var_index

__all__ = ["ParseError", "parse_expression", "PolyRing", "CliffordRing"]


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # trailing whitespace
            break
        if mt.group(1) is not None:
            toks.append(("int", mt.group(1), mt.start(1)))
        elif mt.group(2) is not None:
            toks.append(("ident", mt.group(2), mt.start(2)))
        else:
            ch = mt.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", mt.start(3), text)
            toks.append(("op", ch, mt.start(3)))
        pos = mt.end()
    toks.append(("end", "", len(text)))
    return toks


class PolyRing:
    def __init__(self, n: int, m: int = 1):
        self.n = n
        self.m = m

    def scalar(self, c):
        return Poly.const(self.n, c)

    def ident(self, name: str, pos: int, text: str):
        if name == "z":
            return Poly.const(self.n, zeta(self.m))
        v = var_index(self.n, name)
        if v < 0:
            raise ParseError(f"unknown variable {name!r}", pos, text)
        return Poly.gen(self.n, v)

    def constant_of(self, a):
        return a.constant_value()


class CliffordRing(PolyRing):
    """Expressions in x/y variables plus ``t<i>`` (theta) and ``d<i>`` (contraction)."""

    def scalar(self, c):
        from .clifford import CliffordElt

        return CliffordElt.scalar(self.n, Poly.const(self.n, c))

    def ident(self, name: str, pos: int, text: str):
        from .clifford import CliffordElt

        if len(name) >= 2 and name[0] in "td" and name[1:].isdigit():
            i = int(name[1:])
            if not 1 <= i <= self.n:
                raise ParseError(f"index out of range in {name!r}", pos, text)
            return CliffordElt.theta(self.n, i) if name[0] == "t" else CliffordElt.contraction(self.n, i)
        return CliffordElt.scalar(self.n, super().ident(name, pos, text))

    def constant_of(self, a):
        if not a.terms:
            return Fraction(0)
        if set(a.terms) == {((), ())}:
            return a.terms[((), ())].constant_value()
        return None


class _Parser:
    def __init__(self, text: str, ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        val = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def _starts_atom(self, tok):
        return tok[0] in ("int", "ident") or tok[:2] == ("op", "(")

    def term(self):
        val = self.unary()
        while True:
            tok = self.peek()
            if tok[:2] == ("op", "*"):
                self.take()
                val = val * self.unary()
            elif tok[:2] == ("op", "/"):
                self.take()
                rhs_tok = self.peek()
                rhs = self.unary()
                c = self.ring.constant_of(rhs)
                if c is None:
                    self.error("division only by a constant", rhs_tok)
                if not c:
                    self.error("division by zero", rhs_tok)
                val = val * scalar_inv(c)
            elif self._starts_atom(tok):
                val = val * self.unary()
            else:
                return val

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.error("exponent not a nonnegative integer", tok)
            self.take()
            k = int(tok[1])
            out = self.ring.scalar(1)
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return self.ring.scalar(Fraction(int(tok[1])))
        if tok[0] == "ident":
            return self.ring.ident(tok[1], tok[2], self.text)
        if tok[:2] == ("op", "("):
            val = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return val
        if tok[0] == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {tok[1]!r}", tok)


def parse_expression(text: str, ring):
    return _Parser(text, ring).parse()
