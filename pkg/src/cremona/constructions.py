"""Catalog of explicit maps with their decompositions, and the registry of
named identities between them.

Maps given in the affine chart z_n = 1 are stored in projective form.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

from .fields import QQ, Cyclotomic, Field
from .ratmap import (LinearMap, MapError, RatMap, compose, compose_all,
                     compose_with_raw_degree, from_affine_chart)
from .words import Alphabet, GroupWord, birkhoff_check, commutator, conjugate, evaluate, \
    make_generator

MAX_N = 6


class ConstructionError(ValueError):
    pass


def _check_n(n: int, lo: int = 2, max_n: int | None = None):
    hi = MAX_N if max_n is None else max_n
    if not isinstance(n, int) or n < lo or n > hi:
        raise ConstructionError(f"n = {n} outside the supported range {lo}..{hi}")


def _proj(comps: Sequence[str], field: Field = QQ) -> RatMap:
    return RatMap.parse("[" + "; ".join(comps) + "]", field)


def _z(i):
    return f"z{i}"


# ---------------------------------------------------------------------------
# builders returning plain maps

def sigma(n: int, field: Field = QQ) -> RatMap:
    comps = ["*".join(_z(k) for k in range(n + 1) if k != i) for i in range(n + 1)]
    return _proj(comps, field)


def varsigma(n: int, field: Field = QQ) -> RatMap:
    m = n - 1
    comps = [f"z{i}*z{m}" for i in range(m)] + [f"z{m}*z{n}", f"z{n}^2"]
    return _proj(comps, field)


def varsigma_inverse(n: int, field: Field = QQ) -> RatMap:
    m = n - 1
    return from_affine_chart([f"z{i}/z{m}" for i in range(m)] + [f"z{m}"], field)


def varsigma_letters(n: int, field: Field = QQ) -> tuple:
    a1 = [f"z{i} - z1" for i in range(2, n + 1)] + ["z1", "z1 - z0"]
    a2 = [f"z{n-1} + z{n}", f"z{n}"] + [_z(i) for i in range(n - 1)]
    a3 = [f"z{i} + z{n}" for i in range(n - 1)] + [f"z{n-1} - z{n}", f"z{n}"]
    return tuple(_proj(c, field) for c in (a1, a2, a3))


def h_subgroup(n: int, alpha: Sequence, k: int, field: Field = QQ) -> RatMap:
    """Chart map (a_0 z_0 z_{n-1}^k, ..., a_{n-2} z_{n-2} z_{n-1}^k, a_{n-1} z_{n-1})."""
    if len(alpha) != n:
        raise ConstructionError(f"need {n} scalars, got {len(alpha)}")
    m = n - 1
    if k >= 0:
        exprs = [f"z{i}*z{m}^{k}" for i in range(m)]
    else:
        exprs = [f"z{i}/z{m}^{-k}" for i in range(m)]
    base = from_affine_chart(exprs + [f"z{m}"], field)
    return compose(chart_diag(alpha, field), base)


def psi(n: int, field: Field = QQ) -> RatMap:
    return from_affine_chart([f"(z{i}+1)/(z{i}-1)" for i in range(n)], field)


def psi_letters(n: int, field: Field = QQ) -> tuple:
    a1 = [f"z{i} + z{n}" for i in range(n)] + [f"z{n}"]
    a2 = [f"z{i} - z{n}" for i in range(n)] + [f"2*z{n}"]
    return _proj(a1, field), _proj(a2, field)


def minus_id(n: int, field: Field = QQ) -> RatMap:
    return _proj([f"-z{i}" for i in range(n)] + [f"z{n}"], field)


def tame_target(n: int, field: Field = QQ) -> RatMap:
    comps = [f"z0*z{n} + z1^2"] + [f"z{i}*z{n}" for i in range(1, n)] + [f"z{n}^2"]
    return _proj(comps, field)


def tame_letters(n: int, field: Field = QQ) -> tuple:
    rest = [_z(i) for i in range(3, n + 1)]
    g1 = ["z2 - z1 + z0", "2*z1 - z0"] + rest + ["z1 - z0"]
    g2 = ["z0 + z2", "z0", "z1"] + rest
    g3 = ["-z1", "z0 + z2 - 3*z1", "z0"] + rest
    g4 = [f"z1 - z{n}", f"-2*z{n} - z0", f"2*z{n} - z1"] + [f"-z{i}" for i in range(2, n)]
    return tuple(_proj(c, field) for c in (g1, g2, g3, g4))


def tau(n: int, i: int, field: Field = QQ) -> RatMap:
    if not 0 <= i < n - 1:
        raise ConstructionError(f"tau needs 0 <= i < n-1 = {n - 1}, got {i}")
    perm = list(range(n + 1))
    perm[i], perm[n - 1] = perm[n - 1], perm[i]
    return _proj([_z(k) for k in perm], field)


def eta(n: int, field: Field = QQ) -> RatMap:
    return from_affine_chart([_z(i) for i in range(n - 1)] + [f"1/z{n-1}"], field)


def h_n(n: int, field: Field = QQ) -> RatMap:
    return from_affine_chart(["z0/(z0-1)"] + [f"(z0-z{i})/(z0-1)" for i in range(1, n)], field)


def diag(alpha: Sequence, field: Field = QQ) -> RatMap:
    """Projective diagonal map (a_0 z_0 : ... : a_n z_n)."""
    return LinearMap.diagonal(list(alpha), field).to_ratmap()


def chart_diag(alpha: Sequence, field: Field = QQ) -> RatMap:
    """Chart diagonal map (a_0 z_0, ..., a_{n-1} z_{n-1})."""
    return diag(list(alpha) + [1], field)


def g_p(n: int, field: Cyclotomic) -> RatMap:
    return _proj([f"w*z{i}" for i in range(n)] + [f"z{n}"], field)


def h_p(n: int, field: Cyclotomic) -> RatMap:
    return _proj([f"w*z{i}" for i in range(n - 1)] + [f"z{n-1}", f"z{n}"], field)


def translation(n: int, field: Field = QQ) -> RatMap:
    return _proj(["z0"] + [f"z{i} + z{n}" for i in range(1, n)] + [f"z{n}"], field)


def commutator_pair(n: int, field: Field = QQ) -> tuple:
    a = _proj(["z0"] + [f"3*z{i}" for i in range(1, n)] + [f"z{n}"], field)
    b = _proj(["2*z0"] + [f"z{i} + z{n}" for i in range(1, n)] + [f"2*z{n}"], field)
    return a, b


def chart_translation(n: int, field: Field = QQ) -> RatMap:
    """(z_0+1, ..., z_{n-2}+1, z_{n-1}) in the chart; commutes with eta."""
    return _proj([f"z{i} + z{n}" for i in range(n - 1)] + [f"z{n-1}", f"z{n}"], field)


def pencil_generator(n: int, a, b, c, d, field: Field = QQ) -> RatMap:
    """(a z_0 + b z_1 : c z_0 + d z_1 : z_2 : ... : z_n)."""
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    rows[0][0], rows[0][1], rows[1][0], rows[1][1] = a, b, c, d
    for i in range(2, n + 1):
        rows[i][i] = 1
    return LinearMap(rows, field).to_ratmap()


# ---------------------------------------------------------------------------
# named constructions

@dataclass
class NamedConstruction:
    name: str
    n: int
    map: RatMap
    params: dict = dc_field(default_factory=dict)
    decomposition: GroupWord | None = None
    alphabet: Alphabet | None = None
    inverse: RatMap | None = None

    @property
    def degree(self):
        return self.map.degree


def _sigma_alphabet(n, field, letters: dict) -> Alphabet:
    alpha = Alphabet(n, field, sigma_name="s")
    alpha.add(make_generator("s", sigma(n, field), sigma(n, field), verify=False))
    for name, f in letters.items():
        alpha.bind(name, f)
    return alpha


def _need(params, key, name):
    if key not in params or params[key] is None:
        raise ConstructionError(f"{name} needs parameter {key!r}")
    return params[key]


def build(name: str, n: int, field: Field | None = None, max_n: int | None = None,
          **params) -> NamedConstruction:
    """Build a catalog map; decompositions are checked against the map."""
    _check_n(n, max_n=max_n)
    fld = field or QQ
    out = None
    if name == "sigma":
        s = sigma(n, fld)
        out = NamedConstruction(name, n, s, {}, GroupWord.of("s"),
                                _sigma_alphabet(n, fld, {}), s)
    elif name == "varsigma":
        a1, a2, a3 = varsigma_letters(n, fld)
        alpha = _sigma_alphabet(n, fld, {"a1": a1, "a2": a2, "a3": a3})
        word = GroupWord.of("a1", "s", "a2", "s", "a3")
        out = NamedConstruction(name, n, varsigma(n, fld), {}, word, alpha,
                                evaluate(word.inverse(), alpha))
    elif name == "psi":
        a1, a2 = psi_letters(n, fld)
        alpha = _sigma_alphabet(n, fld, {"a1": a1, "a2": a2})
        f = psi(n, fld)
        out = NamedConstruction(name, n, f, {}, GroupWord.of("a1", "s", "a2"), alpha, f)
    elif name == "minus_id":
        f = minus_id(n, fld)
        out = NamedConstruction(name, n, f, {}, inverse=f)
    elif name == "tame":
        _check_n(n, 3, max_n)
        g = tame_letters(n, fld)
        alpha = _sigma_alphabet(n, fld, {f"g{i+1}": x for i, x in enumerate(g)})
        word = GroupWord.of("g1", "s", "g2", "s", "g3", "s", "g2", "s", "g4")
        out = NamedConstruction(name, n, tame_target(n, fld), {}, word, alpha,
                                evaluate(word.inverse(), alpha))
    elif name == "tau":
        i = _need(params, "i", name)
        f = tau(n, i, fld)
        out = NamedConstruction(name, n, f, {"i": i}, inverse=f)
    elif name == "eta":
        f = eta(n, fld)
        out = NamedConstruction(name, n, f, {}, inverse=f)
    elif name in ("h", "h_n"):
        f = h_n(n, fld)
        out = NamedConstruction("h_n", n, f, {}, inverse=LinearMap.from_ratmap(f).inverse().to_ratmap())
    elif name in ("diag", "chart_diag"):
        alpha = _need(params, "alpha", name)
        f = diag(alpha, fld) if name == "diag" else chart_diag(alpha, fld)
        if len(f.components) != n + 1:
            raise ConstructionError(f"alpha has the wrong length for n = {n}")
        out = NamedConstruction(name, n, f, {"alpha": [str(a) for a in alpha]},
                                inverse=LinearMap.from_ratmap(f).inverse().to_ratmap())
    elif name in ("g_p", "h_p"):
        p = _need(params, "p", name)
        cf = Cyclotomic(p)
        f = g_p(n, cf) if name == "g_p" else h_p(n, cf)
        out = NamedConstruction(name, n, f, {"p": p},
                                inverse=LinearMap.from_ratmap(f).inverse().to_ratmap())
    elif name in ("translation", "t"):
        f = translation(n, fld)
        a, b = commutator_pair(n, fld)
        alpha = Alphabet(n, fld)
        alpha.bind("a", a)
        alpha.bind("b", b)
        out = NamedConstruction("translation", n, f, {}, GroupWord.of("a", "b", ("a", -1), ("b", -1)),
                                alpha, LinearMap.from_ratmap(f).inverse().to_ratmap())
    elif name == "h_subgroup":
        alpha = _need(params, "alpha", name)
        k = int(params.get("k", 1))
        f = h_subgroup(n, alpha, k, fld)
        out = NamedConstruction(name, n, f, {"alpha": [str(a) for a in alpha], "k": k})
    elif name == "pencil_generator":
        coeffs = [_need(params, key, name) for key in ("a", "b", "c", "d")]
        f = pencil_generator(n, *coeffs, field=fld)
        out = NamedConstruction(name, n, f, {k: str(v) for k, v in zip("abcd", coeffs)},
                                inverse=LinearMap.from_ratmap(f).inverse().to_ratmap())
    else:
        raise ConstructionError(f"unknown construction {name!r}")
    if out.decomposition is not None and evaluate(out.decomposition, out.alphabet) != out.map:
        raise ConstructionError(f"{name}: decomposition does not evaluate to the map")
    return out


NAMES = ("sigma", "varsigma", "psi", "minus_id", "tame", "tau", "eta", "h_n", "diag",
         "chart_diag", "g_p", "h_p", "translation", "h_subgroup", "pencil_generator")


# ---------------------------------------------------------------------------
# identity registry

def random_scalars(rng: random.Random, k: int) -> list:
    out = []
    for _ in range(k):
        num = rng.randint(1, 9) * rng.choice((1, -1))
        out.append(Fraction(num, rng.randint(1, 9)))
    return out


def _witness(lhs: RatMap, rhs: RatMap) -> dict:
    diff = [i for i, (a, b) in enumerate(zip(lhs.components, rhs.components)) if a != b]
    return {"lhs": lhs.format(), "rhs": rhs.format(), "differing_components": diff}


class _Check:
    def __init__(self):
        self.ok = True
        self.witness = None
        self.info = {}

    def expect(self, lhs, rhs, label, equal=True):
        if (lhs == rhs) != equal and self.ok:
            self.ok = False
            w = _witness(lhs, rhs)
            w["relation"] = label
            self.witness = w
        elif (lhs == rhs) != equal:
            self.ok = False

    def require(self, cond, label, **details):
        if not cond and self.ok:
            self.ok = False
            self.witness = {"relation": label, **details}
        elif not cond:
            self.ok = False


def _ck_sigma_involution(n, params, c):
    s = sigma(n)
    sq, raw = compose_with_raw_degree(s, s)
    c.info["raw_degree"] = raw
    c.expect(sq, RatMap.identity(n), "sigma o sigma = id")
    c.require(s.degree == n, "deg sigma = n", degree=s.degree)


def _ck_varsigma(n, params, c):
    nc = build("varsigma", n)
    c.require(nc.map.degree == 2, "deg varsigma = 2", degree=nc.map.degree)
    c.expect(evaluate(nc.decomposition, nc.alphabet), nc.map, "varsigma = a1 s a2 s a3")


def _ck_psi(n, params, c):
    nc = build("psi", n)
    c.expect(evaluate(nc.decomposition, nc.alphabet), nc.map, "psi = a1 s a2")
    c.expect(compose(nc.map, nc.map), RatMap.identity(n), "psi o psi = id")
    c.expect(conjugate(minus_id(n), nc.map, nc.inverse), sigma(n), "psi (-id) psi^-1 = sigma")


def _ck_tame(n, params, c):
    nc = build("tame", n)
    c.require(nc.map.degree == 2, "deg = 2", degree=nc.map.degree)
    c.expect(evaluate(nc.decomposition, nc.alphabet), nc.map, "g1 s g2 s g3 s g2 s g4")


def _ck_diag_sigma(n, params, c):
    rng = random.Random(params.get("seed", 0))
    s = sigma(n)
    for _ in range(params.get("trials", 20)):
        alpha = random_scalars(rng, n + 1)
        d = diag(alpha)
        d2 = diag([a * a for a in alpha])
        dm2 = diag([1 / (a * a) for a in alpha])
        lhs = conjugate(s, d)
        c.expect(lhs, compose(d2, s), f"d s d^-1 = d^2 s at alpha={list(map(str, alpha))}")
        c.expect(lhs, compose(s, dm2), f"d s d^-1 = s d^-2 at alpha={list(map(str, alpha))}")
        if not c.ok:
            return


def _ck_eta_diag(n, params, c):
    rng = random.Random(params.get("seed", 0))
    e = eta(n)
    for _ in range(params.get("trials", 20)):
        alpha = random_scalars(rng, n)
        beta = alpha[:-1] + [1 / alpha[-1]]
        c.expect(compose(chart_diag(beta), e), compose(e, chart_diag(alpha)),
                 f"d_beta eta = eta d_alpha at alpha={list(map(str, alpha))}")
        if not c.ok:
            return


def _ck_sigma_tau_eta(n, params, c):
    e = eta(n)
    maps = []
    for i in range(n - 1):
        t = tau(n, i)
        maps += [t, e, t]
    maps.append(e)
    c.expect(compose_all(maps), sigma(n), "sigma = prod (tau_i eta tau_i) eta")


def _ck_hn_order_three(n, params, c):
    h = h_n(n)
    c.require(h.degree == 1, "h_n is linear", degree=h.degree)
    hs = compose(h, sigma(n))
    c.expect(hs ** 3, RatMap.identity(n), "(h_n sigma)^3 = id")


def _ck_hn_dual(n, params, c):
    hv = LinearMap.from_ratmap(h_n(n)).dual().to_ratmap()
    hs = compose(hv, sigma(n))
    c.expect(hs ** 3, RatMap.identity(n), "(h_n^dual sigma)^3 != id", equal=False)


def _ck_translation(n, params, c):
    a, b = commutator_pair(n)
    c.expect(commutator(a, b), translation(n), "t = [a, b]")


def _ck_birkhoff(n, params, c):
    p = _need(params, "p", "birkhoff_triple")
    cf = Cyclotomic(p)
    vs = build("varsigma", n, cf)
    a = make_generator("varsigma", vs.map, vs.inverse, verify=False)
    rep = birkhoff_check(a, g_p(n, cf), h_p(n, cf), p, require_root=True)
    c.info["relations"] = {k: rep[k] for k in
                           ("commutator_ab_is_c", "a_commutes_c", "b_commutes_c", "c_order_p")}
    failed = [k for k, v in c.info["relations"].items() if not v]
    c.require(not failed, "birkhoff relations", failed=failed)


@dataclass(frozen=True)
class Identity:
    name: str
    fn: Callable
    min_n: int = 2
    defaults: dict = dc_field(default_factory=dict)


REGISTRY = {ident.name: ident for ident in [
    Identity("sigma_involution", _ck_sigma_involution),
    Identity("varsigma_decomposition", _ck_varsigma),
    Identity("psi_decomposition_and_conjugacy", _ck_psi),
    Identity("tame_decomposition", _ck_tame, min_n=3),
    Identity("diag_sigma_relation", _ck_diag_sigma, defaults={"trials": 20, "seed": 0}),
    Identity("eta_diag_relation", _ck_eta_diag, defaults={"trials": 20, "seed": 0}),
    Identity("sigma_tau_eta_product", _ck_sigma_tau_eta),
    Identity("hn_sigma_order_three", _ck_hn_order_three),
    Identity("hn_dual_sigma_not_order_three", _ck_hn_dual),
    Identity("translation_commutator", _ck_translation),
    Identity("birkhoff_triple", _ck_birkhoff, defaults={"p": 3}),
]}


def verify_identity(name: str, n: int, params: dict | None = None, *,
                    max_n: int | None = None) -> dict:
    """Run one registry check; failures carry the differing components."""
    try:
        ident = REGISTRY[name]
    except KeyError:
        raise ConstructionError(f"unknown identity {name!r}") from None
    _check_n(n, ident.min_n, max_n)
    full = dict(ident.defaults)
    full.update(params or {})
    c = _Check()
    t0 = time.perf_counter()
    ident.fn(n, full, c)
    millis = (time.perf_counter() - t0) * 1000.0
    rep = {"check": name, "n": n, "params": full, "pass": c.ok, "millis": round(millis, 3)}
    if c.info:
        rep["info"] = c.info
    if c.witness is not None:
        rep["witness"] = c.witness
    return rep


def verify_suite(n_range: Sequence[int], primes: Sequence[int] = (3, 5), seed: int = 0,
                 checks: Sequence[str] | None = None, max_n: int | None = None) -> list:
    """Every registry entry for every n where it is defined, in a fixed order."""
    names = list(checks) if checks else list(REGISTRY)
    for nm in names:
        if nm not in REGISTRY:
            raise ConstructionError(f"unknown identity {nm!r}")
    reports = []
    for n in sorted(set(n_range)):
        for nm in names:
            ident = REGISTRY[nm]
            if n < ident.min_n:
                continue
            if nm == "birkhoff_triple":
                for p in primes:
                    reports.append(verify_identity(nm, n, {"p": p}, max_n=max_n))
            elif "seed" in ident.defaults:
                reports.append(verify_identity(nm, n, {"seed": seed}, max_n=max_n))
            else:
                reports.append(verify_identity(nm, n, max_n=max_n))
    return reports


__all__ = [
    "ConstructionError", "Identity", "MAX_N", "NAMES", "NamedConstruction", "REGISTRY",
    "build", "chart_diag", "chart_translation", "commutator_pair", "diag", "eta", "g_p",
    "h_n", "h_p", "h_subgroup", "minus_id", "pencil_generator", "psi", "psi_letters",
    "random_scalars", "sigma", "tame_letters", "tame_target", "tau", "translation",
    "varsigma", "varsigma_inverse", "varsigma_letters", "verify_identity", "verify_suite",
]
