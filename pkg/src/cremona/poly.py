"""Sparse homogeneous polynomials over an exact field.

Monomials are packed into a single ``int``: 16 bits per variable with
``z0`` in the most significant slot.  For monomials of equal total degree,
integer order is then the graded-lexicographic order with z0 > z1 > ... .
Exponents must stay below 2**15 (the top bit of each slot is a guard bit
used for divisibility tests).
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .fields import Field, FieldElem, FieldError

SLOT = 16
SLOT_MASK = (1 << SLOT) - 1
MAX_EXP = (1 << (SLOT - 1)) - 1


class PolyError(ValueError):
    pass


class NotDivisible(PolyError):
    pass


def pack(exps: Sequence[int]) -> int:
    m = 0
    for e in exps:
        if e < 0 or e > MAX_EXP:
            raise PolyError(f"exponent {e} out of range")
        m = (m << SLOT) | e
    return m


def unpack(m: int, nvars: int) -> tuple:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = m & SLOT_MASK
        m >>= SLOT
    return tuple(out)


def mono_degree(m: int) -> int:
    d = 0
    while m:
        d += m & SLOT_MASK
        m >>= SLOT
    return d


def var_mono(i: int, nvars: int, e: int = 1) -> int:
    return e << (SLOT * (nvars - 1 - i))


def _guard(nvars: int) -> int:
    g = 0
    for _ in range(nvars):
        g = (g << SLOT) | (1 << (SLOT - 1))
    return g


_GUARDS: dict = {}


def mono_divides(d: int, m: int, nvars: int) -> bool:
    g = _GUARDS.get(nvars)
    if g is None:
        g = _GUARDS[nvars] = _guard(nvars)
    return ((m | g) - d) & g == g


def mono_min(a: int, b: int, nvars: int) -> int:
    out = 0
    for i in range(nvars):
        s = SLOT * (nvars - 1 - i)
        out |= min((a >> s) & SLOT_MASK, (b >> s) & SLOT_MASK) << s
    return out


def exp_of(m: int, i: int, nvars: int) -> int:
    return (m >> (SLOT * (nvars - 1 - i))) & SLOT_MASK


# ---------------------------------------------------------------------------
# dict-level kernels

def _normalize_native(field, terms):
    norm = field.normalize
    return {m: c for m, c in ((m, norm(c)) for m, c in terms.items()) if c != 0}


def _add_terms(field, a, b, sign=1):
    out = dict(a)
    if field.native:
        for m, c in b.items():
            v = out.get(m, 0) + c if sign > 0 else out.get(m, 0) - c
            v = field.normalize(v)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return out
    z = field.zero()
    for m, c in b.items():
        v = field.add(out.get(m, z), c) if sign > 0 else field.sub(out.get(m, z), c)
        if field.is_zero(v):
            out.pop(m, None)
        else:
            out[m] = v
    return out


def _mul_terms(field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    if field.native:
        bl = list(b.items())
        for ma, ca in a.items():
            for mb, cb in bl:
                k = ma + mb
                out[k] = get(k, 0) + ca * cb
        return _normalize_native(field, out)
    z = field.zero()
    add, mul = field.add, field.mul
    for ma, ca in a.items():
        for mb, cb in b.items():
            k = ma + mb
            out[k] = add(get(k, z), mul(ca, cb))
    return {m: c for m, c in out.items() if not field.is_zero(c)}


def _scale_terms(field, a, c):
    if field.is_zero(c):
        return {}
    if field.native:
        return _normalize_native(field, {m: v * c for m, v in a.items()})
    return {m: field.mul(v, c) for m, v in a.items()}


# ---------------------------------------------------------------------------

class HomPoly:
    """Homogeneous polynomial in ``nvars`` variables ``z0 .. z{nvars-1}``.

    Treated as immutable.  The zero polynomial has ``degree is None``.
    """

    __slots__ = ("field", "nvars", "terms", "degree", "_hash")

    def __init__(self, field: Field, nvars: int, terms: dict | None = None,
                 *, check: bool = True, degree: int | None = None):
        if nvars < 1:
            raise PolyError("need at least one variable")
        self.field = field
        self.nvars = nvars
        self.terms = terms if terms is not None else {}
        self._hash = None
        if check:
            if field.native:
                self.terms = _normalize_native(field, self.terms)
            else:
                self.terms = {m: c for m, c in self.terms.items() if not field.is_zero(c)}
        if not self.terms:
            self.degree = None
        elif degree is not None and not check:
            self.degree = degree
        else:
            degs = {mono_degree(m) for m in self.terms}
            if len(degs) != 1:
                raise PolyError(f"inhomogeneous polynomial (degrees {sorted(degs)})")
            self.degree = degs.pop()

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field: Field, nvars: int) -> "HomPoly":
        return cls(field, nvars, {}, check=False)

    @classmethod
    def const(cls, field: Field, nvars: int, c=1) -> "HomPoly":
        c = field.coerce(c) if not isinstance(c, FieldElem) else c.value
        return cls(field, nvars, {0: c})

    @classmethod
    def var(cls, field: Field, nvars: int, i: int) -> "HomPoly":
        if not 0 <= i < nvars:
            raise PolyError(f"unknown variable z{i}")
        return cls(field, nvars, {var_mono(i, nvars): field.one()}, check=False, degree=1)

    @classmethod
    def from_exponents(cls, field: Field, nvars: int, mapping: dict) -> "HomPoly":
        terms: dict = {}
        for exps, c in mapping.items():
            if len(exps) != nvars:
                raise PolyError("exponent vector length differs from nvars")
            c = c.value if isinstance(c, FieldElem) else field.coerce(c)
            m = pack(exps)
            terms[m] = field.add(terms[m], c) if m in terms else c
        return cls(field, nvars, terms)

    def _new(self, terms, degree=None):
        return HomPoly(self.field, self.nvars, terms, check=False, degree=degree)

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree == 0

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> list:
        """``[(exponent tuple, payload)]`` in descending graded-lex order."""
        return [(unpack(m, self.nvars), self.terms[m])
                for m in sorted(self.terms, reverse=True)]

    def coeff(self, exps) -> FieldElem:
        return FieldElem(self.field, self.terms.get(pack(exps), self.field.zero()))

    def leading_monomial(self) -> int:
        return max(self.terms)

    def leading_coeff(self):
        """Payload of the graded-lex leading coefficient."""
        return self.terms[max(self.terms)]

    def monic(self) -> "HomPoly":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if self.field.is_one(lc):
            return self
        return self._new(_scale_terms(self.field, self.terms, self.field.inv(lc)), self.degree)

    def variables(self) -> set:
        used = 0
        for m in self.terms:
            used |= m
        return {i for i in range(self.nvars) if exp_of(used, i, self.nvars)}

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(exp_of(m, i, self.nvars) for m in self.terms)

    def split_in(self, i: int) -> dict:
        """``{k: c_k}`` with ``self = sum z_i**k * c_k`` and ``c_k`` free of z_i."""
        s = SLOT * (self.nvars - 1 - i)
        groups: dict = {}
        for m, c in self.terms.items():
            k = (m >> s) & SLOT_MASK
            groups.setdefault(k, {})[m - (k << s)] = c
        return {k: self._new(t, None if self.degree is None else self.degree - k)
                for k, t in groups.items()}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "HomPoly"):
        if not isinstance(other, HomPoly):
            raise TypeError(f"expected HomPoly, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise PolyError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
        if other.field != self.field:
            raise FieldError(f"descriptor mismatch: {self.field} vs {other.field}")

    def _coerce_scalar(self, c):
        if isinstance(c, FieldElem):
            if c.field != self.field:
                raise FieldError(f"descriptor mismatch: {self.field} vs {c.field}")
            return c.value
        return self.field.coerce(c)

    def __add__(self, other):
        if not isinstance(other, HomPoly):
            other = HomPoly.const(self.field, self.nvars, self._coerce_scalar(other)) \
                if not isinstance(other, FieldElem) else HomPoly.const(self.field, self.nvars, other)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise PolyError(f"adding degree {self.degree} and {other.degree}")
        return self._new(_add_terms(self.field, self.terms, other.terms), self.degree)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        f = self.field
        return self._new({m: f.neg(c) for m, c in self.terms.items()}, self.degree)

    def __mul__(self, other):
        if isinstance(other, HomPoly):
            return mul(self, other)
        c = self._coerce_scalar(other)
        return self._new(_scale_terms(self.field, self.terms, c), self.degree)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power of a polynomial")
        result = HomPoly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __truediv__(self, other):
        if isinstance(other, HomPoly):
            return exact_div(self, other)
        c = self._coerce_scalar(other)
        return self * self.field.inv(c)

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        return (self.nvars == other.nvars and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def mul_monomial(self, m: int) -> "HomPoly":
        return self._new({k + m: c for k, c in self.terms.items()},
                         None if self.degree is None else self.degree + mono_degree(m))

    def monomial_content(self) -> int:
        """Largest monomial dividing every term (packed); 0 for the zero poly."""
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return 0
        for m in it:
            g = mono_min(g, m, self.nvars)
            if g == 0:
                break
        return g

    def div_monomial(self, d: int) -> "HomPoly":
        for m in self.terms:
            if not mono_divides(d, m, self.nvars):
                raise NotDivisible("monomial does not divide polynomial")
        return self._new({m - d: c for m, c in self.terms.items()},
                         None if self.degree is None else self.degree - mono_degree(d))

    def diff(self, i: int) -> "HomPoly":
        f = self.field
        s = SLOT * (self.nvars - 1 - i)
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & SLOT_MASK
            if e:
                v = f.mul(c, f.from_int(e))
                if not f.is_zero(v):
                    out[m - (1 << s)] = v
        return self._new(out, None if not out else self.degree - 1)

    def embed(self, nvars: int) -> "HomPoly":
        """Same polynomial viewed in ``nvars >= self.nvars`` variables; the new
        variables are appended after the existing ones."""
        if nvars < self.nvars:
            raise PolyError("cannot embed into fewer variables")
        shift = SLOT * (nvars - self.nvars)
        return HomPoly(self.field, nvars, {m << shift: c for m, c in self.terms.items()},
                       check=False, degree=self.degree)

    def drop_last(self) -> "HomPoly":
        """Inverse of :meth:`embed` by one variable; the last variable must not occur."""
        if self.degree_in(self.nvars - 1) > 0:
            raise PolyError(f"z{self.nvars - 1} occurs")
        return HomPoly(self.field, self.nvars - 1, {m >> SLOT: c for m, c in self.terms.items()},
                       check=False, degree=self.degree)

    def map_coeffs(self, field: Field, fn) -> "HomPoly":
        return HomPoly(field, self.nvars, {m: fn(c) for m, c in self.terms.items()})

    def substitute(self, images: Sequence["HomPoly"]) -> "HomPoly":
        return substitute(self, images)

    def __call__(self, *point):
        return eval_point(self, point)

    def format(self, names: Sequence[str] | None = None) -> str:
        from .parse import format_poly
        return format_poly(self, names)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"HomPoly({self.field}, {self.nvars}, {self.format()!r})"


# ---------------------------------------------------------------------------
# module-level operations

def mul(a: HomPoly, b: HomPoly) -> HomPoly:
    a._check(b)
    if not a.terms or not b.terms:
        return HomPoly.zero(a.field, a.nvars)
    return HomPoly(a.field, a.nvars, _mul_terms(a.field, a.terms, b.terms),
                   check=False, degree=a.degree + b.degree)


def exact_div(a: HomPoly, b: HomPoly) -> HomPoly:
    """Quotient ``a / b``; raises :class:`NotDivisible` unless exact."""
    a._check(b)
    if not b.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a.terms:
        return a
    if a.degree < b.degree:
        raise NotDivisible("divisor has larger degree")
    f, nv = a.field, a.nvars
    if len(b.terms) == 1:
        (mb, cb), = b.terms.items()
        q = a.div_monomial(mb)
        return q if f.is_one(cb) else q * f.inv(cb)
    lm = max(b.terms)
    inv_lc = f.inv(b.terms[lm])
    rest = [(m, c) for m, c in b.terms.items() if m != lm]
    r = dict(a.terms)
    heap = [-m for m in r]
    heapq.heapify(heap)
    q: dict = {}
    native = f.native
    norm = f.normalize
    while heap:
        m = -heapq.heappop(heap)
        c = r.pop(m, None)
        if c is None or f.is_zero(c):
            continue
        if not mono_divides(lm, m, nv):
            raise NotDivisible("polynomial division is not exact")
        qm = m - lm
        qc = f.mul(c, inv_lc)
        q[qm] = qc
        for mb, cb in rest:
            t = qm + mb
            old = r.get(t)
            if old is None:
                heapq.heappush(heap, -t)
                r[t] = norm(-qc * cb) if native else f.neg(f.mul(qc, cb))
            else:
                r[t] = norm(old - qc * cb) if native else f.sub(old, f.mul(qc, cb))
    return HomPoly(f, nv, q, check=False, degree=a.degree - b.degree)


def divides(b: HomPoly, a: HomPoly) -> bool:
    try:
        exact_div(a, b)
    except NotDivisible:
        return False
    return True


def substitute(p: HomPoly, images: Sequence[HomPoly]) -> HomPoly:
    """``p(images[0], ..., images[-1])``; images share arity, field and degree."""
    if len(images) != p.nvars:
        raise PolyError(f"need {p.nvars} images, got {len(images)}")
    first = images[0]
    nv, f = first.nvars, first.field
    degs = set()
    for im in images:
        if im.nvars != nv:
            raise PolyError("images have different arity")
        if im.field != f:
            raise FieldError("images have different fields")
        if im.degree is not None:
            degs.add(im.degree)
    if f != p.field:
        raise FieldError(f"descriptor mismatch: {p.field} vs {f}")
    if len(degs) > 1:
        raise PolyError(f"images have unequal degrees {sorted(degs)}")
    e = degs.pop() if degs else 0
    if not p.terms:
        return HomPoly.zero(f, nv)
    out_deg = p.degree * e

    if all(len(im.terms) <= 1 for im in images):
        return _substitute_monomial(p, images, nv, f, out_deg)

    n = p.nvars
    one = HomPoly.const(f, nv, 1)
    powers = [[one] for _ in range(n)]

    def power(i, k):
        pw = powers[i]
        while len(pw) <= k:
            pw.append(mul(pw[-1], images[i]))
        return pw[k]

    memo: dict = {}

    def suffix(i, m):
        # product over variables i.. of images**exponent, m = packed suffix
        if i == n - 1:
            return power(i, m & SLOT_MASK)
        key = (i, m)
        got = memo.get(key)
        if got is None:
            s = SLOT * (n - 1 - i)
            k = m >> s
            rest = suffix(i + 1, m & ((1 << s) - 1))
            got = rest if k == 0 else mul(power(i, k), rest)
            memo[key] = got
        return got

    acc: dict = {}
    for m, c in p.terms.items():
        prod = suffix(0, m)
        if not prod.terms:
            continue
        acc = _add_terms(f, acc, _scale_terms(f, prod.terms, c))
    return HomPoly(f, nv, acc, check=False, degree=out_deg)


def _substitute_monomial(p, images, nv, f, out_deg):
    n = p.nvars
    ims = []
    for im in images:
        if im.terms:
            (m, c), = im.terms.items()
            ims.append((m, c))
        else:
            ims.append(None)
    acc: dict = {}
    native = f.native
    for m, c in p.terms.items():
        exps = unpack(m, n)
        mono, coef = 0, c
        dead = False
        for i, k in enumerate(exps):
            if k:
                if ims[i] is None:
                    dead = True
                    break
                mi, ci = ims[i]
                mono += k * mi
                coef = coef * ci ** k if native else f.mul(coef, f.pow(ci, k))
        if dead:
            continue
        if mono in acc:
            acc[mono] = acc[mono] + coef if native else f.add(acc[mono], coef)
        else:
            acc[mono] = coef
    return HomPoly(f, nv, acc, check=True) if acc else HomPoly.zero(f, nv)


def eval_point(p: HomPoly, point: Sequence) -> FieldElem:
    """Exact value of ``p`` at ``point`` (FieldElem, int or Fraction entries)."""
    if len(point) != p.nvars:
        raise PolyError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    f = p.field
    vals = [p._coerce_scalar(x) for x in point]
    return FieldElem(f, eval_payload(p, vals))


def eval_payload(p: HomPoly, vals: Sequence):
    f, n = p.field, p.nvars
    acc = f.zero()
    cache: dict = {}
    for m, c in p.terms.items():
        t = c
        for i in range(n):
            k = (m >> (SLOT * (n - 1 - i))) & SLOT_MASK
            if k:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = f.pow(vals[i], k)
                t = f.mul(t, pw)
        acc = f.add(acc, t)
    return acc


def linear_form(field: Field, coeffs: Iterable, nvars: int | None = None) -> HomPoly:
    coeffs = list(coeffs)
    nv = nvars or len(coeffs)
    terms = {var_mono(i, nv): field.coerce(c) if not isinstance(c, FieldElem) else c.value
             for i, c in enumerate(coeffs)}
    return HomPoly(field, nv, terms)


def variables(field: Field, nvars: int) -> list:
    return [HomPoly.var(field, nvars, i) for i in range(nvars)]


def monomial(field: Field, exps: Sequence[int], c=1) -> HomPoly:
    return HomPoly.from_exponents(field, len(exps), {tuple(exps): c})


def zn_split(p: HomPoly) -> tuple:
    """``p = z_last * high + low`` with ``high``/``low`` free of the last variable."""
    n = p.nvars - 1
    if p.degree_in(n) > 1:
        raise PolyError(f"z{n}-degree of {p} exceeds 1")
    parts = p.split_in(n)
    zero = HomPoly.zero(p.field, p.nvars)
    return parts.get(1, zero), parts.get(0, zero)
