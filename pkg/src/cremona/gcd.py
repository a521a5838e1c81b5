"""Multivariate GCD of homogeneous polynomials.

Recursive primitive-part scheme: split off monomial content, view the
polynomials as univariate in a main variable over the ring of the others,
take contents recursively and run a subresultant remainder sequence on the
primitive parts.  Everything stays homogeneous along the way, so the
kernels of :mod:`cremona.poly` are reused unchanged.
"""

from __future__ import annotations

from typing import Sequence

from .poly import HomPoly, NotDivisible, PolyError, exact_div, mono_min, mul, var_mono


def _one(p: HomPoly) -> HomPoly:
    return HomPoly.const(p.field, p.nvars, 1)


def _coeff_x(p: HomPoly, x: int, k: int) -> HomPoly:
    return p.split_in(x).get(k) or HomPoly.zero(p.field, p.nvars)


def prem(a: HomPoly, b: HomPoly, x: int) -> HomPoly:
    """Pseudo-remainder of ``a`` by ``b`` as polynomials in ``z_x``."""
    db = b.degree_in(x)
    lcb = _coeff_x(b, x, db)
    r = a
    e = a.degree_in(x) - db + 1
    while not r.is_zero():
        dr = r.degree_in(x)
        if dr < db:
            break
        lcr = _coeff_x(r, x, dr)
        r = mul(lcb, r) - mul(lcr.mul_monomial(var_mono(x, a.nvars, dr - db)), b)
        e -= 1
    if e > 0 and not r.is_zero():
        r = mul(lcb ** e, r)
    return r


def content(p: HomPoly, x: int) -> HomPoly:
    return _gcd_list(list(p.split_in(x).values()))


def _gcd_list(ps: Sequence[HomPoly]) -> HomPoly:
    ps = sorted((p for p in ps if not p.is_zero()), key=len)
    if not ps:
        raise PolyError("gcd of zero polynomials")
    g = ps[0]
    for p in ps[1:]:
        if g.degree == 0:
            break
        g = _gcd(g, p)
    return g if g.degree else _one(g)


def _gcd(a: HomPoly, b: HomPoly) -> HomPoly:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree == 0 or b.degree == 0:
        return _one(a)
    nv = a.nvars
    ma, mb = a.monomial_content(), b.monomial_content()
    mg = mono_min(ma, mb, nv)
    if ma:
        a = a.div_monomial(ma)
    if mb:
        b = b.div_monomial(mb)
    g = _gcd_primitive(a, b)
    return g.mul_monomial(mg) if mg else g


def _try_divide(a: HomPoly, b: HomPoly):
    if b.degree is None or a.degree < b.degree:
        return None
    try:
        return exact_div(a, b)
    except NotDivisible:
        return None


def _gcd_primitive(a: HomPoly, b: HomPoly) -> HomPoly:
    """gcd of polynomials free of monomial factors."""
    if a.degree == 0 or b.degree == 0:
        return _one(a)
    if len(b) > len(a):
        a, b = b, a
    if _try_divide(a, b) is not None:
        return b
    va, vb = a.variables(), b.variables()
    # a variable missing from one side cannot occur in the gcd
    for x in sorted(va - vb):
        return _gcd(content(a, x), b)
    for x in sorted(vb - va):
        return _gcd(a, content(b, x))
    x = min(va, key=lambda i: (max(a.degree_in(i), b.degree_in(i)), i))
    ca, cb = content(a, x), content(b, x)
    c = _gcd(ca, cb)
    pa = exact_div(a, ca) if ca.degree else a
    pb = exact_div(b, cb) if cb.degree else b
    g = _subresultant(pa, pb, x)
    return mul(c, g) if c.degree else g


def _subresultant(a: HomPoly, b: HomPoly, x: int) -> HomPoly:
    if a.degree_in(x) < b.degree_in(x):
        a, b = b, a
    one = _one(a)
    g = h = one
    while True:
        delta = a.degree_in(x) - b.degree_in(x)
        r = prem(a, b, x)
        if r.is_zero():
            break
        if r.degree_in(x) == 0:
            return one
        a, b = b, exact_div(r, mul(g, h ** delta))
        g = _coeff_x(a, x, a.degree_in(x))
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))
    cb = content(b, x)
    return exact_div(b, cb) if cb.degree else b


def gcd(a: HomPoly, b: HomPoly) -> HomPoly:
    return gcd_many([a, b])


def gcd_many(ps: Sequence[HomPoly]) -> HomPoly:
    """Monic greatest common divisor (graded-lex leading coefficient 1)."""
    ps = list(ps)
    if not ps:
        raise PolyError("gcd of an empty list")
    first = ps[0]
    for p in ps[1:]:
        first._check(p)
    nz = [p for p in ps if not p.is_zero()]
    if not nz:
        raise PolyError("gcd of an all-zero list")
    nv = first.nvars
    mg = None
    stripped = []
    for p in nz:
        m = p.monomial_content()
        mg = m if mg is None else mono_min(mg, m, nv)
        stripped.append(p.div_monomial(m) if m else p)
    g = _gcd_list(stripped)
    if mg:
        g = g.mul_monomial(mg)
    return g.monic()
