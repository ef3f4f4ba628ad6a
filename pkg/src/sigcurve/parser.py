"""Polynomial expression parsing and canonical serialization.

Grammar (whitespace insignificant, implicit multiplication allowed):

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*'? factor)*
    factor   := base ('^' uint)*
    base     := rational | var | '(' expr ')'
    rational := uint ('/' uint)?
    var      := name from the ring

Serialization writes ``c*x^i*y^j`` terms in descending grlex order and
round-trips exactly through ``parse``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .poly import SparsePoly, grlex_key

CURVE_RING = ("x", "y")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def _advance(self, n: int) -> None:
        for ch in self.text[self.pos : self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self._advance(1)
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take(self) -> str:
        ch = self.peek()
        if ch:
            self._advance(1)
        return ch

    def take_uint(self) -> int:
        ch = self.peek()
        if not ch.isdigit():
            raise self.error("expected a digit")
        digits = []
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            digits.append(self.text[self.pos])
            self._advance(1)
        return int("".join(digits))

    def take_name(self) -> str:
        ch = self.peek()
        if not (ch.isalpha() or ch == "_"):
            raise self.error("expected a variable name")
        chars = []
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            chars.append(self.text[self.pos])
            self._advance(1)
        return "".join(chars)


def parse(text: str, ring: tuple[str, ...] = CURVE_RING) -> SparsePoly:
    """Parse an expression into a polynomial over the given ring."""
    tok = _Tokenizer(text)
    if tok.peek() == "":
        raise tok.error("empty expression")
    p = _expr(tok, ring)
    if tok.peek() != "":
        raise tok.error(f"unexpected {tok.peek()!r}")
    return p


def _expr(tok: _Tokenizer, ring) -> SparsePoly:
    negate = False
    while tok.peek() in ("+", "-"):
        if tok.take() == "-":
            negate = not negate
    acc = _term(tok, ring)
    if negate:
        acc = -acc
    while tok.peek() in ("+", "-"):
        op = tok.take()
        t = _term(tok, ring)
        acc = acc - t if op == "-" else acc + t
    return acc


def _term(tok: _Tokenizer, ring) -> SparsePoly:
    acc = _factor(tok, ring)
    while True:
        ch = tok.peek()
        if ch == "*":
            tok.take()
            acc = acc * _factor(tok, ring)
        elif ch == "/":
            tok.take()
            d = tok.take_uint()
            if d == 0:
                raise tok.error("division by zero")
            acc = acc.scale(Fraction(1, d))
        elif ch and (ch.isdigit() or ch.isalpha() or ch in "(_"):
            acc = acc * _factor(tok, ring)  # implicit multiplication
        else:
            return acc


def _factor(tok: _Tokenizer, ring) -> SparsePoly:
    base = _base(tok, ring)
    while tok.peek() == "^":
        tok.take()
        base = base ** tok.take_uint()
    return base


def _base(tok: _Tokenizer, ring) -> SparsePoly:
    ch = tok.peek()
    if ch == "(":
        tok.take()
        p = _expr(tok, ring)
        if tok.peek() != ")":
            raise tok.error("expected ')'")
        tok.take()
        return p
    if ch == "-":
        tok.take()
        return -_factor(tok, ring)
    if ch.isdigit():
        return SparsePoly.const(ring, tok.take_uint())
    if ch.isalpha() or ch == "_":
        name = tok.take_name()
        if name not in ring:
            raise tok.error(f"unknown variable {name!r} (allowed: {', '.join(ring)})")
        return SparsePoly.var(ring, name)
    raise tok.error(f"unexpected {ch!r}" if ch else "unexpected end of input")


def serialize(p: SparsePoly) -> str:
    """Canonical text form: terms in descending grlex order."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for e, c in p.sorted_terms(grlex_key):
        factors = []
        for name, k in zip(p.ring, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if not factors:
            body = _frac_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_frac_str(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _frac_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"
