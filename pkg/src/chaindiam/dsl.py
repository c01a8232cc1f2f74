"""Text syntax for chain terms and their elements.

Chain grammar (``+`` binds looser than ``x``; both nest to the right)::

    expr := prod ('+' prod)*
    prod := term (('x' | '×') term)*
    term := 'N' | 'N*' | 'Z' | 'Q' | 'R' | INTEGER | 'rev(' expr ')' | '(' expr ')'

Element syntax follows the term: integers for finite chains, N, N* and Z;
``p/q`` for Q; ``L:<el>`` / ``R:<el>`` inside sums; ``(<el>,<el>)`` inside
products.
"""
from __future__ import annotations

from fractions import Fraction

from .chains import (
    ChainError,
    ChainExpr,
    Finite,
    Int,
    LexProd,
    Nat,
    NatStar,
    Rat,
    Real,
    Rev,
    Sum,
    Tagged,
    check_element,
)


class DSLError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_ATOMS = {"N": Nat(), "Z": Int(), "Q": Rat(), "R": Real()}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            raise DSLError(f"expected {s!r}", self.pos)
        self.pos += len(s)

    def expr(self) -> ChainExpr:
        parts = [self.prod()]
        while self.peek() == "+":
            self.pos += 1
            parts.append(self.prod())
        return _nest(Sum, parts)

    def prod(self) -> ChainExpr:
        parts = [self.term()]
        while self.peek() in ("x", "×"):
            self.pos += 1
            parts.append(self.term())
        return _nest(LexProd, parts)

    def term(self) -> ChainExpr:
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if self.text.startswith("rev", self.pos):
            self.pos += 3
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Rev(e)
        if c == "N":
            self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos] == "*":
                self.pos += 1
                return NatStar()
            return Nat()
        if c in _ATOMS:
            self.pos += 1
            return _ATOMS[c]
        if c.isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Finite(int(self.text[start:self.pos]))
        if not c:
            raise DSLError("unexpected end of input", self.pos)
        raise DSLError(f"unexpected character {c!r}", self.pos)


def _nest(cls, parts):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(p, out)
    return out


def parse_chain(text: str) -> ChainExpr:
    p = _Parser(text)
    e = p.expr()
    p.skip()
    if p.pos != len(text):
        raise DSLError(f"trailing input {text[p.pos:]!r}", p.pos)
    return e


def format_chain(e: ChainExpr) -> str:
    return _fmt(e, 0)


def _fmt(e: ChainExpr, level: int) -> str:
    # level 0: any; 1: inside a product operand; 2: left operand needing an atom
    if isinstance(e, Finite):
        return str(e.k)
    if isinstance(e, Nat):
        return "N"
    if isinstance(e, NatStar):
        return "N*"
    if isinstance(e, Int):
        return "Z"
    if isinstance(e, Rat):
        return "Q"
    if isinstance(e, Real):
        return "R"
    if isinstance(e, Rev):
        return f"rev({_fmt(e.inner, 0)})"
    if isinstance(e, Sum):
        s = f"{_fmt_left(e.left, Sum)} + {_fmt(e.right, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(e, LexProd):
        s = f"{_fmt_left(e.left, LexProd)} x {_fmt(e.right, 1)}"
        return s if level <= 1 else f"({s})"
    raise ChainError(f"not a chain term: {e!r}")


def _fmt_left(e, op) -> str:
    if op is Sum:
        return _fmt(e, 1) if not isinstance(e, Sum) else f"({_fmt(e, 0)})"
    return _fmt(e, 2)


# --------------------------------------------------------------------------
# elements


def format_element(e: ChainExpr, x) -> str:
    check_element(e, x)
    return _fmt_el(e, x)


def _fmt_el(e, x) -> str:
    if isinstance(e, Sum):
        return f"{x.side}:{_fmt_el(e.left if x.side == 'L' else e.right, x.value)}"
    if isinstance(e, LexProd):
        return f"({_fmt_el(e.left, x[0])},{_fmt_el(e.right, x[1])})"
    if isinstance(e, Rev):
        return _fmt_el(e.inner, x)
    if isinstance(e, Rat):
        q = Fraction(x)
        return f"{q.numerator}/{q.denominator}"
    return str(x)


def parse_element(e: ChainExpr, text: str):
    p = _ElParser(text)
    x = p.element(e)
    p.skip()
    if p.pos != len(text):
        raise DSLError(f"trailing input {text[p.pos:]!r}", p.pos)
    try:
        check_element(e, x)
    except ChainError as exc:
        raise DSLError(str(exc), 0) from exc
    return x


class _ElParser(_Parser):
    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits.lstrip("+-"):
            raise DSLError("expected an integer", start)
        return int(digits)

    def element(self, e):
        if isinstance(e, Sum):
            side = self.peek()
            if side not in ("L", "R"):
                raise DSLError("expected 'L:' or 'R:'", self.pos)
            self.pos += 1
            self.expect(":")
            return Tagged(side, self.element(e.left if side == "L" else e.right))
        if isinstance(e, LexProd):
            self.expect("(")
            a = self.element(e.left)
            self.expect(",")
            b = self.element(e.right)
            self.expect(")")
            return (a, b)
        if isinstance(e, Rev):
            return self.element(e.inner)
        if isinstance(e, Real):
            raise DSLError("R has no constructible elements", self.pos)
        n = self.integer()
        if isinstance(e, Rat):
            if self.peek() == "/":
                self.pos += 1
                d = self.integer()
                if d == 0:
                    raise DSLError("zero denominator", self.pos)
                return Fraction(n, d)
            return Fraction(n)
        return n
