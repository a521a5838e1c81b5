"""Exact coefficient fields: the rationals, prime fields GF(p) and cyclotomic
fields Q(zeta_p).

A field object owns the arithmetic on raw payloads; polynomial code works on
payloads directly and only wraps them in :class:`FieldElem` at the API edge.

Payload conventions
-------------------
* ``Q``        -- ``int`` when integral, otherwise a reduced ``Fraction``.
* ``GF(p)``    -- least non-negative residue, an ``int``.
* ``CYC(p)``   -- tuple of ``p - 1`` rational payloads, the coefficients of
  ``1, w, ..., w**(p-2)`` modulo ``1 + w + ... + w**(p-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def _nq(x):
    """Canonical rational payload."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _q_str(x) -> str:
    x = _nq(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


class Field:
    """Base class.  Subclasses are frozen dataclasses, so fields compare and
    hash by value."""

    kind = ""
    # True when payloads support the native ``+ - *`` operators and only
    # need :meth:`normalize` afterwards.
    native = False

    def normalize(self, x):
        return x

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def div(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError("division by zero in " + str(self))
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_one(self, a) -> bool:
        return a == self.one()

    def format(self, a) -> str:
        raise NotImplementedError

    def sqrt(self, a):
        """A square root of ``a`` in the field, or ``None``."""
        raise NotImplementedError

    def elem(self, value) -> "FieldElem":
        """Wrap an ``int``/``Fraction``/payload as a :class:`FieldElem`."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldError(f"descriptor mismatch: {value.field} vs {self}")
            return value
        return FieldElem(self, self.coerce(value))

    def coerce(self, value):
        if isinstance(value, bool):
            raise TypeError("bool is not a field value")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        if isinstance(value, FieldElem) and value.field == self:
            return value.value
        if isinstance(value, tuple) and self.kind == "CYC" and len(value) == self.p - 1:
            return tuple(_nq(x) for x in value)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    # reduction into a prime field F_q, used by the finite-field oracles
    def reduce_mod(self, a, q: int, root: int | None = None) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(Field):
    kind = "Q"
    native = True

    def __str__(self):
        return "Q"

    def normalize(self, x):
        return _nq(x)

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k):
        return k

    def from_fraction(self, q):
        return _nq(q)

    def add(self, a, b):
        return _nq(a + b)

    def sub(self, a, b):
        return _nq(a - b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return _nq(a * b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return _nq(Fraction(1) / a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return _nq(Fraction(a) / b)

    def is_zero(self, a):
        return a == 0

    def format(self, a):
        return _q_str(a)

    def sqrt(self, a):
        a = Fraction(a)
        if a < 0:
            return None
        rn, rd = isqrt(a.numerator), isqrt(a.denominator)
        if rn * rn == a.numerator and rd * rd == a.denominator:
            return _nq(Fraction(rn, rd))
        return None

    def reduce_mod(self, a, q, root=None):
        a = Fraction(a)
        if a.denominator % q == 0:
            raise FieldError(f"prime {q} divides a denominator")
        return a.numerator * pow(a.denominator, -1, q) % q


QQ = Rationals()


@dataclass(frozen=True)
class PrimeField(Field):
    p: int
    native = True

    def __post_init__(self):
        if not (isinstance(self.p, int) and is_prime(self.p) and self.p < 2**31):
            raise FieldError(f"GF({self.p}): modulus must be a prime below 2^31")

    @property
    def kind(self):
        return "GF"

    def __str__(self):
        return f"GF({self.p})"

    def normalize(self, x):
        return x % self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k):
        return k % self.p

    def from_fraction(self, q):
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in GF({self.p})")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def format(self, a):
        return str(a)

    def sqrt(self, a):
        return _tonelli(a % self.p, self.p)

    def reduce_mod(self, a, q, root=None):
        if q != self.p:
            raise FieldError(f"cannot reduce GF({self.p}) modulo {q}")
        return a


def _tonelli(a: int, p: int):
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class Cyclotomic(Field):
    """Q(w) with w a primitive p-th root of unity, p an odd prime."""

    p: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and self.p > 2 and is_prime(self.p)):
            raise FieldError(f"CYC({self.p}): p must be an odd prime")

    @property
    def kind(self):
        return "CYC"

    def __str__(self):
        return f"CYC({self.p})"

    @property
    def _m(self):
        return self.p - 1

    def zero(self):
        return (0,) * (self.p - 1)

    def one(self):
        return (1,) + (0,) * (self.p - 2)

    def gen(self):
        return (0, 1) + (0,) * (self.p - 3)

    def from_int(self, k):
        return (k,) + (0,) * (self.p - 2)

    def from_fraction(self, q):
        return (_nq(q),) + (0,) * (self.p - 2)

    def _reduce(self, c):
        # c has length p, coefficients of 1..w^(p-1) modulo w^p - 1
        top = c[-1]
        return tuple(_nq(x - top) for x in c[:-1])

    def add(self, a, b):
        return tuple(_nq(x + y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(_nq(x - y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        p = self.p
        c = [0] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        c[(i + j) % p] += x * y
        return self._reduce(c)

    def _conjugate(self, a, k):
        p = self.p
        c = [0] * p
        for i, x in enumerate(a):
            if x:
                c[i * k % p] += x
        return self._reduce(c)

    def norm(self, a):
        """Field norm down to Q, together with the product of the
        non-trivial conjugates."""
        rest = self.one()
        for k in range(2, self.p):
            rest = self.mul(rest, self._conjugate(a, k))
        n = self.mul(a, rest)
        assert all(x == 0 for x in n[1:]), "norm is not rational"
        return n[0], rest

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self}")
        n, rest = self.norm(a)
        s = Fraction(1) / n
        return tuple(_nq(x * s) for x in rest)

    def is_zero(self, a):
        return not any(a)

    def format(self, a):
        parts = []
        for i, x in enumerate(a):
            if x == 0:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                body = _q_str(abs(Fraction(x)))
            elif abs(x) == 1:
                body = mono
            else:
                body = f"{_q_str(abs(Fraction(x)))}*{mono}"
            sign = "-" if x < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def rational_part(self, a):
        """``a`` as a rational if it lies in Q, else ``None``."""
        if any(a[1:]):
            return None
        return a[0]

    def sqrt(self, a):
        # only elements of the form r * w^k with r a rational square
        if self.is_zero(a):
            return a
        w = self.gen()
        winv = self.inv(w)
        cur = a
        for k in range(self.p):
            r = self.rational_part(cur)
            if r is not None:
                s = QQ.sqrt(r)
                if s is None:
                    return None
                # w^k = (w^(k(p+1)/2))^2
                return self.mul(self.from_fraction(Fraction(s)),
                                self.pow(w, k * (self.p + 1) // 2 % self.p))
            cur = self.mul(cur, winv)
        return None

    def reduce_mod(self, a, q, root=None):
        if root is None:
            raise FieldError(f"{self} needs a p-th root of unity mod {q}")
        acc = 0
        rk = 1
        for x in a:
            acc = (acc + QQ.reduce_mod(x, q) * rk) % q
            rk = rk * root % q
        return acc


@dataclass(frozen=True)
class FieldElem:
    """An element of a field, carrying its descriptor."""

    field: Field
    value: object

    def _other(self, b):
        if isinstance(b, FieldElem):
            if b.field != self.field:
                raise FieldError(f"descriptor mismatch: {self.field} vs {b.field}")
            return b.value
        return self.field.coerce(b)

    def __add__(self, b):
        return FieldElem(self.field, self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElem(self.field, self.field.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return FieldElem(self.field, self.field.sub(self._other(b), self.value))

    def __mul__(self, b):
        return FieldElem(self.field, self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElem(self.field, self.field.div(self.value, self._other(b)))

    def __rtruediv__(self, b):
        return FieldElem(self.field, self.field.div(self._other(b), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.pow(self.value, k))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, b):
        if isinstance(b, FieldElem):
            return self.field == b.field and self.value == b.value
        try:
            return self.value == self.field.coerce(b)
        except (TypeError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldElem({self.field}, {self})"


def arith(op: str, a: FieldElem, b: FieldElem) -> FieldElem:
    """``op`` is one of add, sub, mul, div."""
    if a.field != b.field:
        raise FieldError(f"descriptor mismatch: {a.field} vs {b.field}")
    try:
        fn = {"add": a.field.add, "sub": a.field.sub,
              "mul": a.field.mul, "div": a.field.div}[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return FieldElem(a.field, fn(a.value, b.value))


def root_of_unity(field: Field) -> FieldElem:
    if not isinstance(field, Cyclotomic):
        raise FieldError(f"{field} has no designated root of unity")
    return FieldElem(field, field.gen())


_FIELD_RE = re.compile(r"^\s*(?:(Q)|(GF|CYC)\s*\(\s*(\d+)\s*\))\s*$", re.I)


def parse_field(text: str) -> Field:
    """``Q``, ``GF(p)`` or ``CYC(p)``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"bad field selector {text!r}; expected Q, GF(p) or CYC(p)")
    if m.group(1):
        return QQ
    p = int(m.group(3))
    return PrimeField(p) if m.group(2).upper() == "GF" else Cyclotomic(p)
