"""Rational self-maps of projective space, points, and linear maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import QQ, Field, FieldElem, FieldError
from .gcd import gcd_many
from .parse import ParseError, format_components, parse_components, parse_terms, split_components
from .poly import SLOT, HomPoly, PolyError, exact_div, mono_degree, substitute, var_mono


class MapError(ValueError):
    pass


class BasePointError(MapError):
    """All components vanish at the given point."""


class SingularMatrix(MapError):
    pass


def _canonical_scale(comps):
    for c in comps:
        if not c.is_zero():
            lc = c.leading_coeff()
            f = c.field
            if f.is_one(lc):
                return comps
            s = f.inv(lc)
            return [p * FieldElem(f, s) for p in comps]
    raise MapError("all components are zero")


class RatMap:
    """``(phi_0 : ... : phi_n)`` in normalized form: the components share a
    degree, have no common factor, and the graded-lex leading coefficient
    of the first nonzero component is 1."""

    __slots__ = ("components", "n", "field", "degree", "_det")

    def __init__(self, components: Sequence[HomPoly], *, normalized: bool = False):
        comps = list(components)
        if len(comps) < 2:
            raise MapError("a self-map of P^n needs n+1 >= 2 components")
        nv = comps[0].nvars
        if nv != len(comps):
            raise MapError(f"{len(comps)} components in {nv} variables")
        for c in comps[1:]:
            comps[0]._check(c)
        degs = {c.degree for c in comps if not c.is_zero()}
        if not degs:
            raise MapError("all components are zero")
        if len(degs) > 1:
            raise MapError(f"components have unequal degrees {sorted(degs)}")
        if not normalized:
            g = gcd_many(comps)
            if g.degree:
                comps = [exact_div(c, g) for c in comps]
            comps = _canonical_scale(comps)
        d = next(c.degree for c in comps if not c.is_zero())
        if d < 1:
            raise MapError("map is constant after cancelling common factors")
        self.components = tuple(comps)
        self.n = len(comps) - 1
        self.field = comps[0].field
        self.degree = d
        self._det = None

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "RatMap":
        return cls([HomPoly.var(field, n + 1, i) for i in range(n + 1)], normalized=True)

    @classmethod
    def parse(cls, text: str, field: Field = QQ) -> "RatMap":
        return cls(parse_components(text, field))

    def __eq__(self, other):
        if not isinstance(other, RatMap):
            return NotImplemented
        return self.field == other.field and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __matmul__(self, other: "RatMap") -> "RatMap":
        return compose(self, other)

    def __pow__(self, k: int) -> "RatMap":
        if k < 0:
            raise MapError("negative powers need an explicit inverse")
        out = RatMap.identity(self.n, self.field)
        for _ in range(k):
            out = compose(out, self)
        return out

    def is_identity(self) -> bool:
        return self == RatMap.identity(self.n, self.field)

    def is_linear(self) -> bool:
        return self.degree == 1

    def is_invertible_linear(self) -> bool:
        if self.degree != 1:
            return False
        if self._det is None:
            self._det = not self.field.is_zero(_det(self.field, _rows_of(self)))
        return self._det

    def apply_point(self, point) -> "ProjPoint":
        return apply_point(self, point)

    def format(self) -> str:
        return format_components(self.components)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RatMap({self.format()})"


def new_normalized(components: Sequence[HomPoly]) -> RatMap:
    return RatMap(components)


def raw_compose(f: RatMap, g: RatMap) -> list:
    """Components of f(g(z)) before cancelling common factors."""
    if f.n != g.n:
        raise MapError(f"dimension mismatch: P^{f.n} vs P^{g.n}")
    if f.field != g.field:
        raise FieldError(f"descriptor mismatch: {f.field} vs {g.field}")
    return [substitute(c, g.components) for c in f.components]


def compose(f: RatMap, g: RatMap) -> RatMap:
    """``f o g``: z -> f(g(z))."""
    comps = raw_compose(f, g)
    if f.is_invertible_linear() or g.is_invertible_linear():
        # composing with an automorphism cannot create a common factor
        return RatMap(_canonical_scale(comps), normalized=True)
    return RatMap(comps)


def compose_with_raw_degree(f: RatMap, g: RatMap) -> tuple:
    comps = raw_compose(f, g)
    raw = next(c.degree for c in comps if not c.is_zero())
    return RatMap(comps), raw


def compose_all(maps: Sequence[RatMap]) -> RatMap:
    it = iter(maps)
    out = next(it)
    for m in it:
        out = compose(out, m)
    return out


def equals(f: RatMap, g: RatMap) -> bool:
    return f == g


def cross_equal(f: RatMap, g: RatMap) -> bool:
    """Independent equality test: all f_i g_j - f_j g_i vanish."""
    if f.n != g.n or f.field != g.field:
        return False
    a, b = f.components, g.components
    for i in range(f.n + 1):
        for j in range(i + 1, f.n + 1):
            lhs = a[i] * b[j]
            rhs = a[j] * b[i]
            if lhs.is_zero() and rhs.is_zero():
                continue
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class ProjPoint:
    field: Field
    coords: tuple

    @classmethod
    def make(cls, field: Field, coords) -> "ProjPoint":
        vals = [c.value if isinstance(c, FieldElem) else field.coerce(c) for c in coords]
        for v in vals:
            if not field.is_zero(v):
                s = field.inv(v)
                return cls(field, tuple(field.mul(x, s) for x in vals))
        raise MapError("the zero vector is not a projective point")

    def __str__(self):
        return "(" + ":".join(self.field.format(c) for c in self.coords) + ")"


def apply_point(f: RatMap, point) -> ProjPoint:
    if not isinstance(point, ProjPoint):
        point = ProjPoint.make(f.field, point)
    if point.field != f.field:
        raise FieldError(f"descriptor mismatch: {point.field} vs {f.field}")
    if len(point.coords) != f.n + 1:
        raise MapError("point and map live in different dimensions")
    from .poly import eval_payload
    vals = [eval_payload(c, point.coords) for c in f.components]
    if all(f.field.is_zero(v) for v in vals):
        raise BasePointError(f"{point} is a base point of {f}")
    return ProjPoint.make(f.field, vals)


# ---------------------------------------------------------------------------
# affine charts

def _homogenize(terms: dict, n: int) -> tuple:
    """Terms over z0..z_{n-1} (packed in n slots) -> homogeneous in n+1 slots."""
    if not terms:
        raise MapError("zero polynomial in chart input")
    d = max(mono_degree(m) for m in terms)
    return {(m << SLOT) + (d - mono_degree(m)): c for m, c in terms.items()}, d


def from_affine_chart(exprs: Sequence, field: Field = QQ) -> RatMap:
    """Projective map whose restriction to the chart z_n = 1 is given by
    ``exprs``: n strings (``"(z0+1)/(z0-1)"``) or ``(num, den)`` term dicts
    over ``z0 .. z_{n-1}``."""
    n = len(exprs)
    if n < 1:
        raise MapError("empty chart map")
    parts = []
    for e in exprs:
        if isinstance(e, str):
            num, den = parse_terms(e, n, field, allow_rational=True)
        else:
            num, den = e
        if not den:
            raise MapError("zero denominator")
        if not num:
            hn, a = {}, None
        else:
            hn, a = _homogenize(num, n)
        hd, b = _homogenize(den, n)
        parts.append((hn, a, hd, b))
    nv = n + 1
    nums = [HomPoly(field, nv, hn) if hn else HomPoly.zero(field, nv) for hn, _, _, _ in parts]
    dens = [HomPoly(field, nv, hd) for _, _, hd, _ in parts]
    total = sum(b for *_, b in parts)
    # X_i = N_i z_n^{c_i} prod_{j != i} D_j,  X_n = z_n^{c_n} prod_j D_j
    raw_deg = [(a if a is not None else 0) + total - b for _, a, _, b in parts]
    target = max(raw_deg + [total])
    comps = []
    for i in range(n):
        if nums[i].is_zero():
            comps.append(HomPoly.zero(field, nv))
            continue
        p = nums[i]
        for j in range(n):
            if j != i:
                p = p * dens[j]
        comps.append(p.mul_monomial(var_mono(n, nv, target - raw_deg[i])))
    last = HomPoly.const(field, nv, 1)
    for d in dens:
        last = last * d
    comps.append(last.mul_monomial(var_mono(n, nv, target - total)))
    return RatMap(comps)


def parse_map(text: str, field: Field = QQ, chart: bool = False) -> RatMap:
    if chart:
        return from_affine_chart(split_components(text), field)
    return RatMap.parse(text, field)


# ---------------------------------------------------------------------------
# linear maps

def _rows_of(f: RatMap) -> list:
    nv = f.n + 1
    z = f.field.zero()
    return [[c.terms.get(var_mono(j, nv), z) for j in range(nv)] for c in f.components]


def _det(field: Field, rows) -> object:
    m = [list(r) for r in rows]
    size = len(m)
    det = field.one()
    for col in range(size):
        piv = next((r for r in range(col, size) if not field.is_zero(m[r][col])), None)
        if piv is None:
            return field.zero()
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = field.neg(det)
        det = field.mul(det, m[col][col])
        inv = field.inv(m[col][col])
        for r in range(col + 1, size):
            if not field.is_zero(m[r][col]):
                factor = field.mul(m[r][col], inv)
                m[r] = [field.sub(x, field.mul(factor, y)) for x, y in zip(m[r], m[col])]
    return det


class LinearMap:
    """Invertible (n+1)x(n+1) matrix up to a nonzero scalar; the first
    nonzero entry (row-major) of the stored representative is 1."""

    __slots__ = ("field", "rows")

    def __init__(self, rows, field: Field = QQ, *, check: bool = True):
        vals = [[x.value if isinstance(x, FieldElem) else field.coerce(x) for x in r] for r in rows]
        size = len(vals)
        if size < 2 or any(len(r) != size for r in vals):
            raise MapError("need a square matrix of size >= 2")
        if check and field.is_zero(_det(field, vals)):
            raise SingularMatrix("matrix is singular")
        flat = [x for r in vals for x in r]
        lead = next(x for x in flat if not field.is_zero(x))
        if not field.is_one(lead):
            s = field.inv(lead)
            vals = [[field.mul(x, s) for x in r] for r in vals]
        self.field = field
        self.rows = tuple(tuple(r) for r in vals)

    @property
    def size(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def entry(self, i, j) -> FieldElem:
        return FieldElem(self.field, self.rows[i][j])

    def det(self) -> FieldElem:
        return FieldElem(self.field, _det(self.field, self.rows))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        f = self.field
        if other.field != f:
            raise FieldError("descriptor mismatch")
        k = self.size
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = f.zero()
                for t in range(k):
                    acc = f.add(acc, f.mul(self.rows[i][t], other.rows[t][j]))
                row.append(acc)
            out.append(row)
        return LinearMap(out, f, check=False)

    def transpose(self) -> "LinearMap":
        return LinearMap([list(c) for c in zip(*self.rows)], self.field, check=False)

    def inverse(self) -> "LinearMap":
        return inverse(self)

    def dual(self) -> "LinearMap":
        return dual(self)

    def to_ratmap(self) -> RatMap:
        f, k = self.field, self.size
        comps = [HomPoly(f, k, {var_mono(j, k): self.rows[i][j] for j in range(k)})
                 for i in range(k)]
        return RatMap(_canonical_scale(comps), normalized=True)

    @classmethod
    def from_ratmap(cls, f: RatMap) -> "LinearMap":
        if f.degree != 1:
            raise MapError(f"degree {f.degree} map is not linear")
        return cls(_rows_of(f), f.field)

    @classmethod
    def diagonal(cls, entries, field: Field = QQ) -> "LinearMap":
        k = len(entries)
        z = 0
        rows = [[entries[i] if i == j else z for j in range(k)] for i in range(k)]
        return cls(rows, field)

    def is_diagonal(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(self.field.format(x) for x in r) + "]"
                               for r in self.rows) + "]"

    def __repr__(self):
        return f"LinearMap({self})"


def inverse(m: LinearMap) -> LinearMap:
    """Gauss-Jordan elimination over the coefficient field."""
    f, k = m.field, m.size
    a = [list(r) + [f.one() if i == j else f.zero() for j in range(k)]
         for i, r in enumerate(m.rows)]
    for col in range(k):
        piv = next((r for r in range(col, k) if not f.is_zero(a[r][col])), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = f.inv(a[col][col])
        a[col] = [f.mul(x, inv) for x in a[col]]
        for r in range(k):
            if r != col and not f.is_zero(a[r][col]):
                factor = a[r][col]
                a[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return LinearMap([r[k:] for r in a], f, check=False)


def dual(m: LinearMap) -> LinearMap:
    """``g -> (g^T)^{-1}``."""
    return inverse(m.transpose())


def linear_bridge(x):
    """LinearMap <-> degree-1 RatMap."""
    if isinstance(x, LinearMap):
        return x.to_ratmap()
    if isinstance(x, RatMap):
        return LinearMap.from_ratmap(x)
    raise TypeError(f"expected LinearMap or RatMap, got {type(x).__name__}")


__all__ = [
    "BasePointError", "LinearMap", "MapError", "ParseError", "PolyError", "ProjPoint",
    "RatMap", "SingularMatrix", "apply_point", "compose", "compose_all",
    "compose_with_raw_degree", "cross_equal", "dual", "equals", "from_affine_chart",
    "inverse", "linear_bridge", "new_normalized", "parse_map", "raw_compose",
]
