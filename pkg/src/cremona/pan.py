"""Maps of the shape (Q R_0 : ... : Q R_{n-1} : P), their birationality
criterion, hypersurface-contracting maps, and finite-field oracles.

The oracles reduce a map modulo a small prime, evaluate it on every point
of P^n(F_p) with numpy, and compare canonical image points.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction
from math import gcd
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .fields import QQ, Cyclotomic, Field, FieldError, PrimeField, is_prime
from .gcd import gcd_many
from .poly import HomPoly, PolyError, exact_div, unpack, zn_split
from .ratmap import LinearMap, MapError, RatMap, SingularMatrix, compose


class PanError(ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class OracleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# specs

@dataclass
class PanSpec:
    """P, Q in z_0..z_n; R_0..R_{n-1} in z_0..z_{n-1}."""

    n: int
    d: int
    l: int
    P: HomPoly
    Q: HomPoly
    R: tuple

    @classmethod
    def make(cls, P: HomPoly, Q: HomPoly, R: Sequence[HomPoly]) -> "PanSpec":
        n = P.nvars - 1
        spec = cls(n, P.degree if P.degree is not None else -1,
                   Q.degree if Q.degree is not None else -1, P, Q, tuple(R))
        spec.check()
        return spec

    def problems(self) -> list:
        out = []
        n, P, Q, R = self.n, self.P, self.Q, self.R
        if n < 1:
            out.append("n must be at least 1")
        if P.nvars != n + 1 or Q.nvars != n + 1:
            out.append(f"P and Q must be in {n + 1} variables")
        if len(R) != n:
            out.append(f"need {n} polynomials R_i, got {len(R)}")
        if P.is_zero() or P.degree != self.d:
            out.append(f"P must be nonzero of degree d = {self.d}")
        if Q.is_zero() or Q.degree != self.l:
            out.append(f"Q must be nonzero of degree l = {self.l}")
        if not self.d >= self.l + 1 >= 2:
            out.append(f"need d >= l+1 >= 2, got d = {self.d}, l = {self.l}")
        for i, r in enumerate(R):
            if r.nvars != n:
                out.append(f"R_{i} must be in z0..z{n - 1}")
            elif not r.is_zero() and r.degree != self.d - self.l:
                out.append(f"R_{i} must have degree d-l = {self.d - self.l}")
        if R and all(r.is_zero() for r in R):
            out.append("all R_i are zero")
        if out:
            return out
        try:
            p1, _ = zn_split(P)
        except PolyError:
            out.append(f"deg_z{n}(P) > 1")
            p1 = None
        try:
            q1, _ = zn_split(Q)
        except PolyError:
            out.append(f"deg_z{n}(Q) > 1")
            q1 = None
        if p1 is not None and q1 is not None and p1.is_zero() and q1.is_zero():
            out.append("(P_{d-1}, Q_{l-1}) = (0, 0)")
        g = gcd_many([P, Q])
        if g.degree:
            out.append(f"gcd(P, Q) = {g} is not 1")
        return out

    def check(self):
        probs = self.problems()
        if probs:
            raise PanError(probs)

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "l": self.l, "P": str(self.P), "Q": str(self.Q),
                "R": [str(r) for r in self.R]}


@dataclass
class BlowdownSpec:
    n: int
    q: HomPoly
    h: HomPoly
    d: int
    P: HomPoly
    seed: int
    tries: int = 1

    @property
    def l(self):
        return self.q.degree

    def to_dict(self) -> dict:
        return {"n": self.n, "q": str(self.q), "l": self.l, "h": str(self.h), "d": self.d,
                "P": str(self.P), "seed": self.seed, "tries": self.tries}


def build_psi(spec: PanSpec) -> RatMap:
    spec.check()
    nv = spec.n + 1
    return RatMap([spec.Q * r.embed(nv) for r in spec.R] + [spec.P])


def build_psi_tilde(spec: PanSpec) -> RatMap:
    spec.check()
    return RatMap(list(spec.R))


# ---------------------------------------------------------------------------
# finite-field evaluation

def _root_mod(field: Field, p: int):
    if isinstance(field, Cyclotomic):
        q = field.p
        if (p - 1) % q:
            raise OracleError(f"F_{p} has no primitive {q}-th root of unity")
        for g in range(2, p):
            r = pow(g, (p - 1) // q, p)
            if r != 1:
                return r
    return None


def reduce_poly(poly: HomPoly, p: int):
    """(exponent matrix, coefficient vector) of ``poly`` modulo ``p``."""
    f = poly.field
    if isinstance(f, PrimeField) and f.p != p:
        raise OracleError(f"cannot reduce a GF({f.p}) polynomial modulo {p}")
    root = _root_mod(f, p)
    exps, coeffs = [], []
    for m, c in poly.terms.items():
        try:
            v = f.reduce_mod(c, p, root)
        except FieldError as exc:
            raise OracleError(f"bad prime {p}: {exc}") from None
        exps.append(unpack(m, poly.nvars))
        coeffs.append(v)
    return (np.array(exps, dtype=np.int64).reshape(len(exps), poly.nvars),
            np.array(coeffs, dtype=np.int64))


def projective_points(n: int, p: int) -> np.ndarray:
    """All points of P^n(F_p), first nonzero coordinate 1, shape (N, n+1)."""
    if not is_prime(p):
        raise OracleError(f"{p} is not prime")
    blocks = []
    for lead in range(n + 1):
        tail = n - lead
        grid = np.array(list(itertools.product(range(p), repeat=tail)), dtype=np.int64)
        grid = grid.reshape(p ** tail, tail)
        block = np.zeros((p ** tail, n + 1), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks)


def _powers(pts: np.ndarray, maxdeg: int, p: int) -> np.ndarray:
    """pw[k, :, i] = pts[:, i]**k mod p."""
    pw = np.empty((maxdeg + 1,) + pts.shape, dtype=np.int64)
    pw[0] = 1
    for k in range(1, maxdeg + 1):
        pw[k] = pw[k - 1] * pts % p
    return pw


def eval_mod(poly_red, pw: np.ndarray, p: int) -> np.ndarray:
    exps, coeffs = poly_red
    npts = pw.shape[1]
    acc = np.zeros(npts, dtype=np.int64)
    for e, c in zip(exps, coeffs):
        t = np.full(npts, int(c), dtype=np.int64)
        for i, k in enumerate(e):
            if k:
                t = t * pw[k, :, i] % p
        acc = (acc + t) % p
    return acc


def canonicalize(vals: np.ndarray, p: int) -> tuple:
    """Scale rows so the first nonzero entry is 1; (rows, is_base_point)."""
    npts, k = vals.shape
    nz = vals != 0
    base = ~nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = vals[np.arange(npts), first]
    inv = np.array([pow(int(x), -1, p) if x else 0 for x in range(p)], dtype=np.int64)
    out = vals * inv[lead][:, None] % p
    return out, base


def _keys(rows: np.ndarray, p: int) -> np.ndarray:
    k = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        k = k * p + rows[:, j]
    return k


def integral_scale(polys: Sequence[HomPoly]) -> list:
    """Rescale rational polynomials jointly to coprime integer coefficients
    (harmless for projective data); other fields pass through."""
    polys = list(polys)
    if not polys or polys[0].field is not QQ:
        return polys
    den, num = 1, 0
    for c in polys:
        for v in c.terms.values():
            v = Fraction(v)
            den = den * v.denominator // gcd(den, v.denominator)
    for c in polys:
        for v in c.terms.values():
            num = gcd(num, int(Fraction(v) * den))
    s = Fraction(den, num or 1)
    if s == 1:
        return polys
    return [c * s for c in polys]


@dataclass
class Reduction:
    """A map evaluated on all of P^n(F_p)."""

    p: int
    points: np.ndarray
    images: np.ndarray
    base: np.ndarray
    keys: np.ndarray
    counts: dict = dc_field(default_factory=dict)


def reduce_map(f: RatMap, p: int, points: np.ndarray | None = None) -> Reduction:
    reds = [reduce_poly(c, p) for c in integral_scale(f.components)]
    pts = projective_points(f.n, p) if points is None else points
    pw = _powers(pts, f.degree, p)
    vals = np.stack([eval_mod(r, pw, p) for r in reds], axis=1)
    imgs, base = canonicalize(vals, p)
    keys = _keys(imgs, p)
    keys[base] = -1
    uniq, cnt = np.unique(keys[~base], return_counts=True)
    return Reduction(p, pts, imgs, base, keys, dict(zip(uniq.tolist(), cnt.tolist())))


def jacobian_nonzero(f: RatMap, p: int, pts: np.ndarray) -> np.ndarray:
    """Mask of points where the (n+1)x(n+1) Jacobian determinant is nonzero mod p."""
    k = f.n + 1
    pw = _powers(pts, max(f.degree - 1, 0), p)
    jac = np.zeros((pts.shape[0], k, k), dtype=np.int64)
    for i, comp in enumerate(integral_scale(f.components)):
        for j in range(k):
            dij = comp.diff(j)
            if dij.is_zero():
                continue
            jac[:, i, j] = eval_mod(reduce_poly(dij, p), pw, p)
    return _det_mod(jac, p) != 0


def _det_mod(m: np.ndarray, p: int) -> np.ndarray:
    m = m.copy() % p
    npts, k, _ = m.shape
    det = np.ones(npts, dtype=np.int64)
    inv = np.array([pow(int(x), -1, p) if x else 0 for x in range(p)], dtype=np.int64)
    rows = np.arange(npts)
    for col in range(k):
        sub = m[:, col:, col]
        has = (sub != 0).any(axis=1)
        piv = np.argmax(sub != 0, axis=1) + col
        det[~has] = 0
        swap = piv != col
        tmp = m[rows, piv].copy()
        m[rows, piv] = m[:, col]
        m[:, col] = tmp
        det = np.where(swap, (-det) % p, det)
        pv = m[:, col, col]
        det = det * pv % p
        pinv = inv[pv]
        for r in range(col + 1, k):
            factor = m[:, r, col] * pinv % p
            m[:, r] = (m[:, r] - factor[:, None] * m[:, col]) % p
    return det


def generic_fiber_size(f: RatMap, primes: int | Sequence[int] = 7, trials: int = 24,
                       seed: int = 0) -> dict:
    """Sizes of F_p-rational fibers over images of random étale points.

    Only étale points are counted in a fiber: two distinct étale points never
    share an image under a birational map, so every sample of a birational map
    (with good reduction) is exactly 1, and a larger sample is a witness.
    ``size`` is the mode over all trials, ``max`` the largest sample.
    """
    primes = [primes] if isinstance(primes, int) else list(primes)
    rng = random.Random(seed)
    per_prime = []
    all_sizes = []
    for p in primes:
        red = reduce_map(f, p)
        etale = ~red.base & jacobian_nonzero(f, p, red.points)
        cand = np.flatnonzero(etale)
        if cand.size == 0:
            per_prime.append({"prime": p, "sizes": [], "degenerate": True})
            continue
        uniq, cnt = np.unique(red.keys[cand], return_counts=True)
        fiber = dict(zip(uniq.tolist(), cnt.tolist()))
        picks = [int(cand[rng.randrange(cand.size)]) for _ in range(trials)]
        sizes = [fiber[int(red.keys[i])] for i in picks]
        entry = {"prime": p, "sizes": sizes, "modal": Counter(sizes).most_common(1)[0][0],
                 "max": max(sizes)}
        big = next((i for i, s in zip(picks, sizes) if s == entry["max"] and s > 1), None)
        if big is not None:
            same = cand[red.keys[cand] == red.keys[big]]
            entry["witness"] = {"image": red.images[big].tolist(),
                                "fiber": red.points[same].tolist()}
        per_prime.append(entry)
        all_sizes += sizes
    if not all_sizes:
        raise OracleError("every point hit the base locus or the ramification locus")
    return {"size": Counter(all_sizes).most_common(1)[0][0], "max": max(all_sizes),
            "primes": per_prime}


def contraction_check(f: RatMap, q: HomPoly, p: int) -> dict:
    """Do all F_p-points of {q = 0} off the base locus map to one point?"""
    if q.nvars != f.n + 1:
        raise OracleError("hypersurface and map live in different dimensions")
    q = integral_scale([q])[0]
    exps, coeffs = reduce_poly(q, p)
    lead = q.terms[q.leading_monomial()]
    if q.field.reduce_mod(lead, p, _root_mod(q.field, p)) == 0:
        raise OracleError(f"bad prime {p}: it divides the leading coefficient of {q}")
    pts = projective_points(f.n, p)
    on = eval_mod((exps, coeffs), _powers(pts, q.degree, p), p) == 0
    red = reduce_map(f, p, pts[on])
    usable = ~red.base
    if not usable.any():
        raise OracleError(f"no usable points of {{{q} = 0}} over F_{p}")
    imgs = {tuple(row) for row in red.images[usable].tolist()}
    rep = {"prime": p, "points_on_hypersurface": int(on.sum()),
           "base_points": int(red.base.sum()), "usable": int(usable.sum()),
           "distinct_images": len(imgs), "pass": len(imgs) == 1}
    if len(imgs) == 1:
        rep["image"] = list(next(iter(imgs)))
    else:
        rep["sample_images"] = sorted(imgs)[:4]
    return rep


# ---------------------------------------------------------------------------
# birationality criterion

def psi_shape(g: RatMap):
    """Split ``g`` as (Q R_0 : ... : Q R_{m-1} : P) ready for the criterion, or None.

    Q is the gcd of the first m components; the R_i must avoid the last variable.
    """
    m = g.n
    if m < 2:
        return None
    first = [c for c in g.components[:m]]
    if all(c.is_zero() for c in first):
        return None
    Q = gcd_many(first)
    if not Q.degree:
        return None
    R = []
    for c in first:
        r = exact_div(c, Q) if not c.is_zero() else HomPoly.zero(g.field, m + 1)
        if r.degree_in(m) > 0:
            return None
        R.append(r.drop_last())
    P = g.components[m]
    if P.is_zero():
        return None
    try:
        return PanSpec.make(P, Q, R)
    except PanError:
        return None


def _linear_verdict(g: RatMap):
    try:
        LinearMap.from_ratmap(g)
        return "birational", {"step": "linear", "reason": "invertible matrix"}
    except SingularMatrix:
        return "not_birational", {"step": "linear", "reason": "singular matrix"}


def _decide(g: RatMap, trail: list, primes, trials, seed, depth=0):
    trail.append({"step": "examine", "depth": depth, "n": g.n, "degree": g.degree,
                  "map": g.format()})
    if g.degree == 1:
        verdict, step = _linear_verdict(g)
        trail.append(step)
        return verdict, "exact", None
    if g.degree <= 4 and compose(g, g).is_identity():
        trail.append({"step": "involution", "reason": "g o g = id"})
        return "birational", "exact", None
    shape = psi_shape(g)
    if shape is not None:
        trail.append({"step": "reduce", "reason": "map has the Psi shape; recurse on R",
                      "spec": shape.to_dict()})
        return _decide(build_psi_tilde(shape), trail, primes, trials, seed, depth + 1)
    if g.n == 1:
        # on P^1 a normalized map of degree k has k preimages generically
        trail.append({"step": "p1_degree", "reason": f"degree {g.degree} map of P^1"})
        wit = None
        try:
            rep = generic_fiber_size(g, primes, trials, seed)
            for e in rep["primes"]:
                if "witness" in e:
                    wit = dict(e["witness"], prime=e["prime"])
                    break
        except OracleError:
            pass
        return "not_birational", "exact", wit
    rep = generic_fiber_size(g, primes, trials, seed)
    biggest = [e.get("max") for e in rep["primes"]]
    trail.append({"step": "fiber_oracle", "max_etale_fiber_by_prime": dict(zip(
        [e["prime"] for e in rep["primes"]], biggest))})
    if all(x == 1 for x in biggest):
        return "birational", "probabilistic", None
    if all(x is not None and x > 1 for x in biggest):
        wit = next(e["witness"] for e in rep["primes"] if "witness" in e)
        wit = dict(wit, prime=next(e["prime"] for e in rep["primes"] if "witness" in e))
        return "not_birational", "witnessed", wit
    return "undetermined", "inconsistent", None


def birationality_criterion(spec: PanSpec, primes: Sequence[int] = (7, 11, 13),
                            trials: int = 24, seed: int = 0) -> dict:
    """Verdict for Psi_{P,Q,R}, obtained from the verdict for the map R."""
    spec.check()
    trail = [{"step": "pan", "reason": "Psi is birational iff (R_0 : ... : R_{n-1}) is",
              "spec": spec.to_dict()}]
    if spec.n == 1:
        # R is a single constant: the tilde map is the identity of a point
        trail.append({"step": "point", "reason": "P^0 target"})
        return {"verdict": "birational", "tag": "exact", "trail": trail}
    try:
        tilde = build_psi_tilde(spec)
    except MapError as exc:
        raise PanError(str(exc)) from None
    verdict, tag, wit = _decide(tilde, trail, list(primes), trials, seed)
    out = {"verdict": verdict, "tag": tag, "trail": trail}
    if wit is not None:
        out["witness"] = wit
    return out


# ---------------------------------------------------------------------------
# blow-down construction

def _random_form(rng: random.Random, field: Field, nvars: int, deg: int, used: int,
                 density: float = 0.6, span: int = 5) -> HomPoly:
    """Random form of degree ``deg`` in the first ``used`` of ``nvars`` variables."""
    terms = {}
    for exps in _compositions(deg, used):
        if rng.random() < density:
            c = rng.randint(1, span) * rng.choice((1, -1))
            terms[tuple(exps) + (0,) * (nvars - used)] = c
    if not terms:
        exps = [0] * nvars
        exps[rng.randrange(used)] = deg
        terms[tuple(exps)] = 1
    return HomPoly.from_exponents(field, nvars, terms)


def _compositions(deg: int, k: int):
    if k == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _compositions(deg - first, k - 1):
            yield (first,) + rest


def random_hypersurface(rng: random.Random, n: int, l: int, field: Field = QQ) -> HomPoly:
    """q = z_n A + B with deg_{z_n} q <= 1 (multiplicity >= l-1 at (0:...:0:1))."""
    nv = n + 1
    zn = HomPoly.var(field, nv, n)
    while True:
        q = _random_form(rng, field, nv, l, n)
        if l > 1:
            q = zn * _random_form(rng, field, nv, l - 1, n) + q
        if not q.is_zero():
            return q


def blowdown_build(q: HomPoly, d: int | None = None, seed: int = 0, max_tries: int = 100,
                   span: int = 5):
    """Seeded choice of h and P; returns (BlowdownSpec, Psi) with Psi contracting {q = 0}."""
    field = q.field
    n = q.nvars - 1
    if q.is_zero() or not q.degree:
        raise PanError("hypersurface degree l must be at least 1")
    l = q.degree
    if q.degree_in(n) > 1:
        raise PanError(f"deg_z{n}(q) = {q.degree_in(n)} > 1: multiplicity at (0:...:0:1) "
                       f"is below l-1")
    d = l + 1 if d is None else d
    if d < l + 1:
        raise PanError(f"need d >= l+1 = {l + 1}, got {d}")
    if n < 2:
        raise PanError("need n >= 2")
    rng = random.Random(seed)
    nv = n + 1
    zn = HomPoly.var(field, nv, n)
    last = None
    for attempt in range(1, max_tries + 1):
        h = _random_form(rng, field, nv, 1, n, density=0.8, span=span)
        p_hi = _random_form(rng, field, nv, d - 1, n, span=span)
        p_lo = _random_form(rng, field, nv, d, n, span=span)
        P = zn * p_hi + p_lo
        if p_hi.is_zero():
            last = "P_{d-1} = 0"
            continue
        g = gcd_many([P, h * q])
        if g.degree:
            last = f"gcd(P, h q) = {g}"
            continue
        Q = h ** (d - l - 1) * q
        R = [HomPoly.var(field, n, i) for i in range(n)]
        spec = PanSpec.make(P, Q, R)
        psi = build_psi(spec)
        if psi.degree != d:
            last = f"degree dropped to {psi.degree}"
            continue
        return BlowdownSpec(n, q, h, d, P, seed, attempt), psi
    raise PanError(f"retry budget of {max_tries} exhausted; last failure: {last}")


# ---------------------------------------------------------------------------
# random instances for oracle comparisons

def to_prime_field(poly: HomPoly, p: int) -> HomPoly:
    """Reduction of ``poly`` to a polynomial over GF(p)."""
    gf = PrimeField(p)
    root = _root_mod(poly.field, p)
    terms = {}
    for m, c in poly.terms.items():
        try:
            v = poly.field.reduce_mod(c, p, root)
        except FieldError as exc:
            raise OracleError(f"bad prime {p}: {exc}") from None
        if v:
            terms[m] = v
    return HomPoly(gf, poly.nvars, terms, check=False,
                   degree=poly.degree if terms else None)


def good_reduction(polys: Sequence[HomPoly], primes: Sequence[int]) -> bool:
    """Components keep their degree and stay coprime modulo every prime."""
    for p in primes:
        try:
            red = [to_prime_field(c, p) for c in integral_scale(polys)]
        except OracleError:
            return False
        if any(r.is_zero() != c.is_zero() for r, c in zip(red, polys)):
            return False
        nz = [r for r in red if not r.is_zero()]
        if gcd_many(nz).degree:
            return False
    return True


def _invertible(rng, field, k, span=3, primes=()):
    while True:
        rows = [[rng.randint(-span, span) for _ in range(k)] for _ in range(k)]
        try:
            lin = LinearMap(rows, field)
        except SingularMatrix:
            continue
        det = lin.det()
        if primes and field is QQ and any(det.value.numerator % p == 0 for p in primes):
            continue
        return lin


def _apply_linear(comps, lin: LinearMap):
    """Components of (comps) o lin, as polynomials."""
    f = lin.field
    k = lin.size
    images = [HomPoly(f, k, {1 << (16 * (k - 1 - j)): lin.rows[i][j]
                             for j in range(k) if not f.is_zero(lin.rows[i][j])})
              for i in range(k)]
    return [c.substitute(images) for c in comps]


def _lin_after(lin: LinearMap, comps):
    f = lin.field
    out = []
    for row in lin.rows:
        acc = HomPoly.zero(f, comps[0].nvars)
        for c, x in zip(comps, row):
            if not f.is_zero(x):
                acc = acc + c * f.elem(x)
        out.append(acc)
    return out


FAMILIES = ("linear", "p1_quadratic", "p1_common_factor", "cremona", "squares",
            "nested_linear", "nested_quadratic")


ORACLE_PRIMES = (7, 11, 13)


def random_R(rng: random.Random, family: str, field: Field = QQ,
             primes: Sequence[int] = ORACLE_PRIMES) -> list:
    """R_0..R_{n-1} for one of the oracle-friendly families (n = len(result)).

    Building blocks are redrawn until they have good reduction at ``primes``.
    """
    if family == "linear":
        k = rng.choice((2, 3))
        return _invertible(rng, field, k, primes=primes).to_ratmap().components
    if family == "p1_quadratic":
        while True:
            a = _random_form(rng, field, 2, 2, 2, density=0.9)
            b = _random_form(rng, field, 2, 2, 2, density=0.9)
            if not gcd_many([a, b]).degree and good_reduction([a, b], primes):
                return [a, b]
    if family == "p1_common_factor":
        lf = _random_form(rng, field, 2, 1, 2, density=1.0)
        inner = _invertible(rng, field, 2, primes=primes).to_ratmap().components
        return [lf * c for c in inner]
    if family == "cremona":
        from .constructions import sigma
        s = list(sigma(2, field).components)
        comps = _apply_linear(s, _invertible(rng, field, 3, primes=primes))
        return _lin_after(_invertible(rng, field, 3, primes=primes), comps)
    if family == "squares":
        z = [HomPoly.var(field, 3, i) for i in range(3)]
        return _apply_linear([v * v for v in z], _invertible(rng, field, 3, primes=primes))
    if family in ("nested_linear", "nested_quadratic"):
        inner = "linear" if family == "nested_linear" else "p1_quadratic"
        if inner == "linear":
            r = _invertible(rng, field, 2, primes=primes).to_ratmap().components
        else:
            r = random_R(rng, "p1_quadratic", field, primes)
        spec = random_panspec(rng, r, field, l=1, primes=primes)
        return list(build_psi(spec).components)
    raise PanError(f"unknown family {family!r}")


def _spec_survives(spec: PanSpec, primes) -> bool:
    for p in primes:
        try:
            P, Q = (integral_scale([x])[0] for x in (spec.P, spec.Q))
            R = integral_scale(spec.R)
            red = PanSpec(spec.n, spec.d, spec.l, to_prime_field(P, p),
                          to_prime_field(Q, p), tuple(to_prime_field(r, p) for r in R))
        except OracleError:
            return False
        if red.problems():
            return False
    return True


def random_panspec(rng: random.Random, R: Sequence[HomPoly], field: Field = QQ,
                   l: int | None = None, max_d: int = 4, max_tries: int = 200,
                   primes: Sequence[int] = ORACLE_PRIMES) -> PanSpec:
    """Random P, Q around the given R (R_i in n variables), with the PanSpec
    invariants holding both over the field and modulo each of ``primes``."""
    n = len(R)
    nv = n + 1
    e = next(r.degree for r in R if not r.is_zero())
    if l is None:
        l = rng.randint(1, max(1, max_d - e))
    d = l + e
    zn = HomPoly.var(field, nv, n)
    for _ in range(max_tries):
        p_hi = _random_form(rng, field, nv, d - 1, n, span=4)
        P = zn * p_hi + _random_form(rng, field, nv, d, n, span=4)
        q_hi = _random_form(rng, field, nv, l - 1, n, span=4) if rng.random() < 0.7 else None
        Q = _random_form(rng, field, nv, l, n, span=4)
        if q_hi is not None:
            Q = zn * q_hi + Q
        if Q.is_zero() or P.is_zero():
            continue
        spec = PanSpec(n, d, l, P, Q, tuple(R))
        if spec.problems():
            continue
        if build_psi(spec).degree != d:
            continue
        if primes and not _spec_survives(spec, primes):
            continue
        return spec
    raise PanError("could not draw a valid spec")


__all__ = [
    "BlowdownSpec", "FAMILIES", "ORACLE_PRIMES", "OracleError", "PanError", "PanSpec", "Reduction",
    "birationality_criterion", "blowdown_build", "build_psi", "build_psi_tilde",
    "canonicalize", "contraction_check", "eval_mod", "generic_fiber_size", "good_reduction",
    "jacobian_nonzero", "projective_points", "psi_shape", "random_R", "random_hypersurface",
    "random_panspec", "reduce_map", "reduce_poly", "to_prime_field", "zn_split",
]
