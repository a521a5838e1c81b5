"""Words in generic pencil-preserving automorphisms and the standard
involution, represented as 2x2 matrices of polynomials in the generator
parameters (action on the pencil z_0 = t z_1).

A word acts trivially exactly when its matrix is scalar; the entries
b, c and a - d therefore cut out the locus R_M of parameters where the
word becomes the identity.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import QQ
from .poly import HomPoly, eval_point
from .ratmap import RatMap, compose_all


class FreenessError(ValueError):
    pass


class BudgetExceeded(FreenessError):
    pass


PARAM_NAMES = ("alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class MobiusPolyMatrix:
    """[[a, b], [c, d]] up to a scalar polynomial factor."""

    a: HomPoly
    b: HomPoly
    c: HomPoly
    d: HomPoly

    def __matmul__(self, o: "MobiusPolyMatrix") -> "MobiusPolyMatrix":
        return MobiusPolyMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                                self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def adjugate(self) -> "MobiusPolyMatrix":
        return MobiusPolyMatrix(self.d, -self.b, -self.c, self.a)

    def det(self) -> HomPoly:
        return self.a * self.d - self.b * self.c

    def rm_generators(self) -> list:
        """Nonzero polynomials among b, c, a - d."""
        return [p for p in (self.b, self.c, self.a - self.d) if not p.is_zero()]

    def is_scalar(self) -> bool:
        return not self.rm_generators()

    def degree(self):
        return next((p.degree for p in self.entries if not p.is_zero()), None)

    def at(self, values: Sequence) -> tuple:
        """Entries evaluated at a parameter point."""
        return tuple(Fraction(eval_point(p, values).value) if not p.is_zero() else Fraction(0)
                     for p in self.entries)

    def format(self) -> str:
        return "[[{}, {}], [{}, {}]]".format(*self.entries)


def _param(k: int, i: int, j: int) -> HomPoly:
    return HomPoly.var(QQ, 4 * (k + 1), 4 * i + j)


def param_names(k: int) -> list:
    return [f"{nm}{i}" for i in range(k + 1) for nm in PARAM_NAMES]


def representation_matrices(k: int) -> dict:
    """Letter -> matrix for s (the involution), g_i and g_i^-1 (adjugate)."""
    if k < 0:
        raise FreenessError("k must be >= 0")
    nv = 4 * (k + 1)
    one = HomPoly.const(QQ, nv, 1)
    zero = HomPoly.zero(QQ, nv)
    out = {("s", 1): MobiusPolyMatrix(zero, one, one, zero)}
    for i in range(k + 1):
        g = MobiusPolyMatrix(*(_param(k, i, j) for j in range(4)))
        out[(f"g{i}", 1)] = g
        out[(f"g{i}", -1)] = g.adjugate()
    return out


def identity_matrix(k: int) -> MobiusPolyMatrix:
    nv = 4 * (k + 1)
    one = HomPoly.const(QQ, nv, 1)
    zero = HomPoly.zero(QQ, nv)
    return MobiusPolyMatrix(one, zero, zero, one)


# ---------------------------------------------------------------------------
# words

_TOKEN = re.compile(r"^(s|[gh]\d+)(\^(-?1))?$")


def parse_free_word(text: str) -> tuple:
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise FreenessError(f"bad letter {tok!r}")
        e = int(m.group(3) or 1)
        letters.append((m.group(1), 1 if m.group(1) == "s" else e))
    return tuple(letters)


def format_word(w: Sequence) -> str:
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w) or "1"


def free_reduce(w: Iterable) -> tuple:
    """Cancel x x^-1 and s s."""
    out: list = []
    for g, e in w:
        if g == "s":
            e = 1
        if out and out[-1][0] == g and (out[-1][1] == -e or g == "s"):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def expand_subgroup_word(w: Sequence) -> tuple:
    """h_i -> g_i s and h_i^-1 -> s g_i^-1."""
    out = []
    for g, e in w:
        if not g.startswith("h"):
            raise FreenessError(f"subgroup words use letters h_i, got {g}")
        i = g[1:]
        out += [(f"g{i}", 1), ("s", 1)] if e == 1 else [("s", 1), (f"g{i}", -1)]
    return tuple(out)


def evaluate_word_matrix(w: Sequence, alphabet: dict, k: int | None = None) -> MobiusPolyMatrix:
    """Ordered product of the letter matrices (the empty word gives the identity)."""
    if k is None:
        k = max((int(g[1:]) for g, _ in alphabet if g != "s"), default=0)
    out = identity_matrix(k)
    for letter in w:
        try:
            m = alphabet[letter]
        except KeyError:
            raise FreenessError(f"unbound letter {format_word([letter])}") from None
        out = out @ m
    return out


def _reduced_words(letters: Sequence, max_len: int, involutive=("s",)):
    """DFS over nonempty freely reduced words, yielding (word, parent word)."""
    def ok(prev, nxt):
        if prev is None:
            return True
        if prev[0] == nxt[0]:
            return prev[0] not in involutive and prev[1] == nxt[1]
        return True

    stack = [((), None)]
    while stack:
        w, last = stack.pop()
        if w:
            yield w
        if len(w) == max_len:
            continue
        for x in reversed(letters):
            if ok(last, x):
                stack.append((w + (x,), x))


# ---------------------------------------------------------------------------
# certificates

def _certify(words_iter, k, expand, max_words, max_seconds, subgroup):
    alphabet = representation_matrices(k)
    cache: dict = {(): identity_matrix(k)}
    entries = []
    names = param_names(k)
    t0 = time.perf_counter()
    complete = True
    for w in words_iter:
        if (max_words is not None and len(entries) >= max_words) or \
                (max_seconds is not None and time.perf_counter() - t0 > max_seconds):
            complete = False
            break
        # the parent prefix is always visited first in DFS order
        parent = cache[w[:-1]]
        m = parent @ (_subgroup_letter(alphabet, w[-1], k) if subgroup else alphabet[w[-1]])
        cache[w] = m
        expanded = expand(w)
        rm = m.rm_generators()
        entries.append({
            "word": format_word(w),
            "expanded": format_word(expanded) if subgroup else None,
            "length": len(w),
            "entry_degrees": [p.degree for p in m.entries],
            "status": "non-scalar" if rm else "scalar",
            "rm_generators": len(rm),
            "rm_locus": [p.format(names) for p in rm],
        })
    return entries, complete


def _subgroup_letter(alphabet, letter, k):
    g, e = letter
    i = g[1:]
    if e == 1:
        return alphabet[(f"g{i}", 1)] @ alphabet[("s", 1)]
    return alphabet[("s", 1)] @ alphabet[(f"g{i}", -1)]


def certify_free_product(max_len: int, k: int = 0, max_words: int | None = None,
                         max_seconds: float | None = None) -> dict:
    """Every nonempty reduced word of length <= max_len over {g_i^(+-1), s}
    must have a non-scalar polynomial matrix."""
    if max_len < 1:
        raise FreenessError("max_len must be >= 1")
    letters = [("s", 1)] + [(f"g{i}", e) for i in range(k + 1) for e in (1, -1)]
    entries, complete = _certify(_reduced_words(letters, max_len), k, lambda w: w,
                                 max_words, max_seconds, subgroup=False)
    return _summary("free_product", max_len, k, entries, complete)


def certify_free_subgroup(max_len: int, k: int = 0, max_words: int | None = None,
                          max_seconds: float | None = None) -> dict:
    """Same certificate for reduced words in h_i = g_i s and their inverses."""
    if max_len < 1:
        raise FreenessError("max_len must be >= 1")
    letters = [(f"h{i}", e) for i in range(k + 1) for e in (1, -1)]
    entries, complete = _certify(_reduced_words(letters, max_len, involutive=()), k,
                                 expand_subgroup_word, max_words, max_seconds, subgroup=True)
    return _summary("free_subgroup", max_len, k, entries, complete)


def _summary(kind, max_len, k, entries, complete):
    scalar = [e["word"] for e in entries if e["status"] == "scalar"]
    return {"certificate": kind, "max_len": max_len, "k": k, "words": len(entries),
            "complete": complete, "scalar_words": scalar,
            "pass": complete and not scalar, "entries": entries}


def word_matrix(text: str, k: int | None = None) -> MobiusPolyMatrix:
    w = parse_free_word(text)
    if any(g.startswith("h") for g, _ in w):
        w = expand_subgroup_word(w)
    kk = max((int(g[1:]) for g, _ in w if g != "s"), default=0) if k is None else k
    return evaluate_word_matrix(w, representation_matrices(kk), kk)


def on_locus(m: MobiusPolyMatrix, values: Sequence) -> bool:
    """Do all R_M generators vanish at the parameter point?"""
    return all(eval_point(p, values).value == 0 for p in m.rm_generators())


# ---------------------------------------------------------------------------
# cross-check against projective composition

def word_ratmap(w: Sequence, params: dict, n: int) -> RatMap:
    """The word as a birational map of P^n, with g_i the pencil generator
    (a z_0 + b z_1 : c z_0 + d z_1 : z_2 : ... : z_n) for params[i] = (a, b, c, d)."""
    from .constructions import pencil_generator, sigma
    from .words import inverse_of
    s = sigma(n)
    gens = {}
    for i, (a, b, c, d) in params.items():
        g = pencil_generator(n, a, b, c, d)
        gens[(f"g{i}", 1)] = g
        gens[(f"g{i}", -1)] = inverse_of(g)
    maps = [s if g == "s" else gens[(g, e)] for g, e in w]
    return compose_all(maps) if maps else RatMap.identity(n)


def pencil_action_matches(w: Sequence, params: dict, n: int, samples: Sequence) -> bool:
    """Compare the map's action on t = z_0/z_1 with the evaluated matrix."""
    k = max(params)
    m = evaluate_word_matrix(w, representation_matrices(k), k)
    vals = []
    for i in range(k + 1):
        vals += [Fraction(x) for x in params[i]]
    a, b, c, d = m.at(vals)
    f = word_ratmap(w, params, n)
    for pt in samples:
        try:
            img = f.apply_point(pt)
        except Exception:
            continue
        t = Fraction(pt[0], pt[1])
        num, den = a * t + b, c * t + d
        y0, y1 = (Fraction(x) for x in img.coords[:2])
        if num * y1 != den * y0:
            return False
    return True


__all__ = [
    "BudgetExceeded", "FreenessError", "MobiusPolyMatrix", "certify_free_product",
    "certify_free_subgroup", "evaluate_word_matrix", "expand_subgroup_word", "format_word",
    "free_reduce", "identity_matrix", "on_locus", "param_names", "parse_free_word",
    "pencil_action_matches", "representation_matrices", "word_matrix", "word_ratmap",
]
