"""Text grammar for polynomials, maps and field elements.

Polynomials: integer or ``a/b`` coefficients, variables ``z0 .. z<n>``,
operators ``+ - * / ^`` and parentheses.  Over ``CYC(p)`` the symbol ``w``
stands for the chosen primitive p-th root of unity.  Division is by
constants only, except in chart mode where whole expressions may be
divided (used for affine-chart input such as ``(z0+1)/(z0-1)``).

Maps are written ``[c0; c1; ...; cn]``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .fields import Cyclotomic, Field, FieldElem
from .poly import (HomPoly, PolyError, _add_terms, _mul_terms, _scale_terms,
                   mono_degree, unpack, var_mono)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
            if text is not None:
                message += f": {text[:pos]}<HERE>{text[pos:]}"
        super().__init__(message)


_TOKEN = re.compile(r"\s*(?:(\d+)|(z)(\d+)|(w)(?![A-Za-z0-9_])|([-+*/^()])|(\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("var", int(m.group(3)), start))
        elif m.group(4):
            toks.append(("w", None, start))
        elif m.group(5):
            toks.append((m.group(5), None, start))
        else:
            raise ParseError(f"unexpected character {m.group(6)!r}", start, text)
        pos = m.end(0)
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    """Recursive descent over rational functions ``(num, den)`` of term dicts."""

    def __init__(self, text, nvars, field, allow_rational):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.field = field
        self.allow_rational = allow_rational
        self.one = {0: field.one()}

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
        val = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[0]!r}")
        return val

    # values are (num, den) pairs of term dicts
    def _const(self, c):
        return ({0: c} if not self.field.is_zero(c) else {}), self.one

    def _is_const(self, d):
        return all(m == 0 for m in d)

    def _simplify(self, v):
        num, den = v
        if self._is_const(den) and den != self.one:
            c = den.get(0)
            num = _scale_terms(self.field, num, self.field.inv(c))
            den = self.one
        return num, den

    def add(self, a, b, sign):
        f = self.field
        if a[1] == b[1]:
            return _add_terms(f, a[0], b[0], sign), a[1]
        num = _add_terms(f, _mul_terms(f, a[0], b[1]), _mul_terms(f, b[0], a[1]), sign)
        return num, _mul_terms(f, a[1], b[1])

    def mul(self, a, b):
        f = self.field
        return self._simplify((_mul_terms(f, a[0], b[0]), _mul_terms(f, a[1], b[1])))

    def div(self, a, b, tok):
        f = self.field
        if not b[0]:
            self.error("division by zero", tok)
        if not self.allow_rational and not self._is_const(b[0]):
            self.error("division by a non-constant expression", tok)
        return self._simplify((_mul_terms(f, a[0], b[1]), _mul_terms(f, a[1], b[0])))

    def expr(self):
        val = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            val = self.add(val, self.term(), 1 if op == "+" else -1)
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            val = self.mul(val, rhs) if tok[0] == "*" else self.div(val, rhs, tok)
        return val

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            num, den = self.unary()
            f = self.field
            return {m: f.neg(c) for m, c in num.items()}, den
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer", tok)
            k = tok[1]
            num, den = self.one, self.one
            for _ in range(k):
                num, den = self.mul((num, den), base)
            return num, den
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            return self._const(self.field.from_int(tok[1]))
        if kind == "var":
            if tok[1] >= self.nvars:
                self.error(f"unknown variable z{tok[1]}", tok)
            return {var_mono(tok[1], self.nvars): self.field.one()}, self.one
        if kind == "w":
            if not isinstance(self.field, Cyclotomic):
                self.error(f"'w' needs a cyclotomic field, not {self.field}", tok)
            return self._const(self.field.gen())
        if kind == "(":
            val = self.expr()
            if self.peek()[0] != ")":
                self.error("expected ')'")
            self.take()
            return val
        self.error(f"unexpected token {kind!r}", tok)


def parse_terms(text: str, nvars: int, field: Field, allow_rational: bool = False):
    """Parse into ``(num, den)`` term dicts (not necessarily homogeneous)."""
    return _Parser(text, nvars, field, allow_rational).parse()


def parse_poly(text: str, nvars: int, field: Field) -> HomPoly:
    num, den = parse_terms(text, nvars, field)
    assert den == {0: field.one()}
    try:
        return HomPoly(field, nvars, num)
    except PolyError as exc:
        raise ParseError(f"{exc} in {text!r}") from None


def parse_scalar(text: str, field: Field) -> FieldElem:
    num, _ = parse_terms(text, 1, field)
    if any(m != 0 for m in num):
        raise ParseError(f"{text!r} is not a constant")
    return FieldElem(field, num.get(0, field.zero()))


def split_components(text: str) -> list:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"map must be written [c0; c1; ...], got {text!r}")
    parts = [p.strip() for p in s[1:-1].split(";")]
    if any(not p for p in parts):
        raise ParseError(f"empty component in {text!r}")
    return parts


def parse_components(text: str, field: Field, nvars: int | None = None) -> list:
    parts = split_components(text)
    nv = nvars if nvars is not None else len(parts)
    return [parse_poly(p, nv, field) for p in parts]


# ---------------------------------------------------------------------------
# formatting

def _signed_coeff(field: Field, c):
    """(negative?, magnitude string) for a nonzero coefficient payload."""
    if field.kind == "Q":
        return c < 0, field.format(-c if c < 0 else c)
    if field.kind == "CYC":
        nz = [x for x in c if x != 0]
        if len(nz) == 1:
            neg = nz[0] < 0
            return neg, field.format(field.neg(c) if neg else c)
        return False, f"({field.format(c)})"
    return False, field.format(c)


def format_poly(p: HomPoly, names: Sequence[str] | None = None) -> str:
    if p.is_zero():
        return "0"
    n = p.nvars
    names = names or [f"z{i}" for i in range(n)]
    out = []
    for m in sorted(p.terms, reverse=True):
        neg, mag = _signed_coeff(p.field, p.terms[m])
        exps = unpack(m, n)
        mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}"
                        for i, e in enumerate(exps) if e)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_components(polys: Sequence[HomPoly]) -> str:
    return "[" + "; ".join(format_poly(p) for p in polys) + "]"


def terms_degree(terms: dict) -> int:
    return max((mono_degree(m) for m in terms), default=-1)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError:
        raise ParseError(f"not a rational number: {text!r}") from None
