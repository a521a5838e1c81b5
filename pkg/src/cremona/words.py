"""Words over named generators, their evaluation to rational maps,
commutators and conjugates, the Birkhoff relation check, and rewriting a
word as a product of conjugates of the standard involution."""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .fields import Cyclotomic, Field, PrimeField
from .ratmap import LinearMap, MapError, RatMap, SingularMatrix, compose


class WordError(ValueError):
    pass


class InverseUnavailable(WordError):
    pass


class RewriteUnsupported(WordError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    map: RatMap
    inverse: RatMap
    # L = prod_j E_j diag(D_j) E_j^{-1}, each E_j an eigenbasis; optional
    factorization: tuple = ()

    @property
    def involutive(self) -> bool:
        return self.map == self.inverse

    @property
    def linear(self) -> LinearMap | None:
        if self.map.degree != 1:
            return None
        return LinearMap.from_ratmap(self.map)


def make_generator(name: str, f, inverse: RatMap | None = None, *,
                   factorization: Sequence = (), verify: bool = True) -> Generator:
    """Linear maps get their inverse computed; an involution may omit it."""
    if isinstance(f, LinearMap):
        f = f.to_ratmap()
    if inverse is None:
        inverse = inverse_of(f)
    elif verify:
        ident = RatMap.identity(f.n, f.field)
        if compose(f, inverse) != ident or compose(inverse, f) != ident:
            raise WordError(f"{name}: supplied inverse does not invert the map")
    fact = []
    for basis, diag in factorization:
        basis = basis if isinstance(basis, LinearMap) else LinearMap(basis, f.field)
        fact.append((basis, tuple(f.field.coerce(x) if not isinstance(x, (tuple,)) else x
                                  for x in diag)))
    if fact:
        prod = None
        for basis, diag in fact:
            piece = basis @ LinearMap.diagonal(list(diag), f.field) @ basis.inverse()
            prod = piece if prod is None else prod @ piece
        if f.degree != 1 or prod != LinearMap.from_ratmap(f):
            raise WordError(f"{name}: factorization does not multiply out to the letter")
    return Generator(name, f, inverse, tuple(fact))


def inverse_of(f: RatMap) -> RatMap:
    if f.degree == 1:
        try:
            return LinearMap.from_ratmap(f).inverse().to_ratmap()
        except SingularMatrix:
            raise InverseUnavailable("singular linear map") from None
    if compose(f, f).is_identity():
        return f
    raise InverseUnavailable(f"no inverse known for the degree-{f.degree} map {f}")


class Alphabet:
    """Named generators of one dimension over one field."""

    def __init__(self, n: int, field: Field, generators: Iterable[Generator] = (),
                 sigma_name: str | None = None):
        self.n = n
        self.field = field
        self.generators: dict = {}
        self.sigma_name = sigma_name
        for g in generators:
            self.add(g)

    def add(self, g: Generator) -> Generator:
        if g.map.n != self.n or g.map.field != self.field:
            raise WordError(f"generator {g.name} lives on P^{g.map.n} over {g.map.field}")
        self.generators[g.name] = g
        return g

    def bind(self, name: str, f, inverse: RatMap | None = None, **kw) -> Generator:
        return self.add(make_generator(name, f, inverse, **kw))

    def __getitem__(self, name) -> Generator:
        try:
            return self.generators[name]
        except KeyError:
            raise WordError(f"unbound generator {name!r}") from None

    def __contains__(self, name):
        return name in self.generators

    def copy(self) -> "Alphabet":
        return Alphabet(self.n, self.field, self.generators.values(), self.sigma_name)

    def is_sigma(self, name: str) -> bool:
        if name == self.sigma_name:
            return True
        from .constructions import sigma
        return self[name].map == sigma(self.n, self.field)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupWord:
    letters: tuple = ()

    @classmethod
    def of(cls, *letters) -> "GroupWord":
        out = []
        for x in letters:
            out.append((x, 1) if isinstance(x, str) else (x[0], x[1]))
        return cls(tuple(out))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __str__(self):
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in self.letters)


_LETTER = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\^(-?1))?$")


def parse_word(text: str) -> GroupWord:
    """Whitespace-separated letters with optional ``^-1``; ``1`` or an empty
    string is the empty word."""
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _LETTER.match(tok)
        if not m:
            raise WordError(f"bad letter {tok!r}")
        letters.append((m.group(1), int(m.group(3) or 1)))
    return GroupWord(tuple(letters))


_BINDING = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\^-1)?\s*=\s*(.+)$")


def parse_bindings(lines: Iterable[str], field: Field, chart: bool = False) -> dict:
    """``name = [map]`` lines (``#`` comments allowed); ``name^-1 = [map]``
    supplies an inverse. Returns name -> (map, inverse or None)."""
    from .ratmap import parse_map
    maps: dict = {}
    invs: dict = {}
    for k, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BINDING.match(line)
        if not m:
            raise WordError(f"line {k}: expected 'name = [map]', got {line!r}")
        name, is_inv, text = m.groups()
        (invs if is_inv else maps)[name] = parse_map(text.strip(), field, chart=chart)
    extra = set(invs) - set(maps)
    if extra:
        raise WordError(f"inverse given for unbound letter(s) {sorted(extra)}")
    return {nm: (f, invs.get(nm)) for nm, f in maps.items()}


def alphabet_from_bindings(bindings: dict, field: Field, n: int | None = None,
                           sigma_name: str | None = "s") -> Alphabet:
    """Alphabet of the bound maps; ``sigma_name`` is bound to the standard
    involution unless the bindings already use it."""
    dims = {f.n for f, _ in bindings.values()}
    if n is not None:
        dims.add(n)
    if len(dims) > 1:
        raise WordError(f"letters live in different dimensions {sorted(dims)}")
    if not dims:
        raise WordError("cannot infer n from an empty alphabet")
    n = dims.pop()
    alpha = Alphabet(n, field, sigma_name=sigma_name if sigma_name not in bindings else None)
    if sigma_name and sigma_name not in bindings:
        from .constructions import sigma
        s = sigma(n, field)
        alpha.add(Generator(sigma_name, s, s))
    for nm, (f, inv) in bindings.items():
        alpha.bind(nm, f, inv)
    return alpha


def reduce(w: GroupWord, alphabet: Alphabet) -> GroupWord:
    stack: list = []
    for name, e in w.letters:
        gen = alphabet[name]
        if gen.involutive:
            e = 1
        if stack:
            top_name, top_e = stack[-1]
            if top_name == name and (top_e == -e or gen.involutive):
                stack.pop()
                continue
        stack.append((name, e))
    return GroupWord(tuple(stack))


def evaluate(w: GroupWord, alphabet: Alphabet) -> RatMap:
    """Left-to-right composition: ``x1 x2 ... xk -> x1 o x2 o ... o xk``."""
    out = None
    for name, e in w.letters:
        gen = alphabet[name]
        f = gen.map if e == 1 else gen.inverse
        out = f if out is None else compose(out, f)
    return out if out is not None else RatMap.identity(alphabet.n, alphabet.field)


# ---------------------------------------------------------------------------

def _with_inverse(x, inv):
    if isinstance(x, Generator):
        return x.map, x.inverse
    if inv is not None:
        return x, inv
    return x, inverse_of(x)


def conjugate(f, by, by_inverse: RatMap | None = None) -> RatMap:
    """``by o f o by^{-1}``."""
    f = f.map if isinstance(f, Generator) else f
    b, binv = _with_inverse(by, by_inverse)
    return compose(compose(b, f), binv)


def commutator(f, g, f_inverse: RatMap | None = None, g_inverse: RatMap | None = None) -> RatMap:
    """``[f, g] = f o g o f^{-1} o g^{-1}``."""
    f, finv = _with_inverse(f, f_inverse)
    g, ginv = _with_inverse(g, g_inverse)
    return compose(compose(compose(f, g), finv), ginv)


def has_primitive_root(field: Field, p: int) -> bool:
    if isinstance(field, Cyclotomic):
        return field.p == p
    if isinstance(field, PrimeField):
        return (field.p - 1) % p == 0
    return p <= 2


def birkhoff_check(a, b, c, p: int, *, require_root: bool = False) -> dict:
    """Truth of [a,b] = c, [a,c] = id, [b,c] = id and c^p = id.

    ``a``, ``b``, ``c`` are Generators or invertible RatMaps (linear maps and
    involutions have known inverses)."""
    a_map, a_inv = _with_inverse(a, None)
    b_map, b_inv = _with_inverse(b, None)
    try:
        c_map, c_inv = _with_inverse(c, None)
    except InverseUnavailable:
        c_map, c_inv = c, None
    field = a_map.field
    if require_root and not has_primitive_root(field, p):
        raise WordError(f"{field} has no primitive {p}-th root of unity")
    ident = RatMap.identity(a_map.n, field)
    report = {"p": p, "field": str(field)}
    report["commutator_ab_is_c"] = commutator(a_map, b_map, a_inv, b_inv) == c_map
    c_pow = c_map ** p
    report["c_order_p"] = c_pow == ident
    if c_inv is None:
        if not report["c_order_p"]:
            raise InverseUnavailable("c has no known inverse")
        c_inv = c_map ** (p - 1)
    report["a_commutes_c"] = commutator(a_map, c_map, a_inv, c_inv) == ident
    report["b_commutes_c"] = commutator(b_map, c_map, b_inv, c_inv) == ident
    report["pass"] = all(report[k] for k in
                         ("commutator_ab_is_c", "a_commutes_c", "b_commutes_c", "c_order_p"))
    return report


# ---------------------------------------------------------------------------
# conjugate-product rewriting

@dataclass
class Rewrite:
    """``evaluate(w) = prod_i (g_i s g_i^{-1})`` with conjugators ``g_i``."""

    pairs: list
    alphabet: Alphabet
    sigma_name: str
    extra: dict = dc_field(default_factory=dict)

    def as_word(self) -> GroupWord:
        out = GroupWord()
        s = GroupWord.of(self.sigma_name)
        for g, _ in self.pairs:
            out = out * g * s * g.inverse()
        return out


def _diag_sqrt(field: Field, diag: Sequence):
    """gamma with gamma_i^2 proportional to diag_i, or None."""
    base = field.inv(diag[0])
    out = []
    for x in diag:
        r = field.sqrt(field.mul(x, base))
        if r is None:
            return None
        out.append(r)
    return out


def conjugate_product_rewrite(w: GroupWord, alphabet: Alphabet) -> Rewrite:
    """Express ``w`` as a product of conjugates of the standard involution.

    Letters must be the involution itself, diagonal linear maps whose
    entry ratios have square roots in the field, or linear maps carrying a
    verified factorization into diagonalizable pieces; anything else raises
    :class:`RewriteUnsupported`.
    """
    f = alphabet.field
    ext = alphabet.copy()
    sname = alphabet.sigma_name or next(
        (k for k in alphabet.generators if alphabet.is_sigma(k)), None)
    if sname is None:
        from .constructions import sigma
        sname = "s"
        while sname in ext:
            sname += "_"
        ext.add(make_generator(sname, sigma(alphabet.n, f)))
    ext.sigma_name = sname
    empty = GroupWord()
    counter = [0]

    def fresh(prefix, lin: LinearMap) -> str:
        counter[0] += 1
        name = f"{prefix}{counter[0]}"
        while name in ext:
            counter[0] += 1
            name = f"{prefix}{counter[0]}"
        ext.add(make_generator(name, lin))
        return name

    def sqrt_diag_letter(diag, label):
        gamma = _diag_sqrt(f, diag)
        if gamma is None:
            raise RewriteUnsupported(f"{label}: diagonal entries have no square roots in {f}")
        return fresh("r", LinearMap.diagonal(gamma, f))

    def linear_pieces(name, e):
        """(basis letter or None, diagonal entries) pieces whose product is the letter."""
        gen = alphabet[name]
        lin = gen.linear
        if lin is None:
            raise RewriteUnsupported(f"letter {name} is neither linear nor the involution")
        if e == -1:
            lin = lin.inverse()
        if lin.is_diagonal():
            return [(None, [lin.rows[i][i] for i in range(lin.size)])]
        if not gen.factorization:
            raise RewriteUnsupported(
                f"letter {name} is not diagonal and carries no diagonalizable factorization")
        pieces = []
        for basis, diag in gen.factorization:
            pieces.append((basis, list(diag)))
        if e == -1:
            pieces = [(b, [f.inv(x) for x in d]) for b, d in reversed(pieces)]
        return pieces

    pairs = []
    letters = list(w.letters)
    i = 0
    while i < len(letters):
        name, e = letters[i]
        if ext.is_sigma(name) if name in ext else False:
            pairs.append((empty, sname))
            i += 1
            continue
        pieces = linear_pieces(name, e)
        nxt = letters[i + 1] if i + 1 < len(letters) else None
        if (len(pieces) == 1 and pieces[0][0] is None and nxt is not None
                and nxt[0] in ext and ext.is_sigma(nxt[0])):
            # d_beta s = d_gamma s d_gamma^{-1} when beta = gamma^2
            r = sqrt_diag_letter(pieces[0][1], name)
            pairs.append((GroupWord.of(r), sname))
            i += 2
            continue
        for basis, diag in pieces:
            r = sqrt_diag_letter(diag, name)
            if basis is None:
                # d_beta = (d_gamma s d_gamma^{-1}) s
                pairs.append((GroupWord.of(r), sname))
                pairs.append((empty, sname))
            else:
                b = fresh("e", basis)
                pairs.append((GroupWord.of(b, r), sname))
                pairs.append((GroupWord.of(b), sname))
        i += 1

    result = Rewrite(pairs, ext, sname)
    if evaluate(result.as_word(), ext) != evaluate(w, alphabet):
        raise WordError("rewrite failed to re-verify")  # pragma: no cover
    return result


def letters_of(w: GroupWord) -> list:
    return [g for g, _ in w.letters]


__all__ = [
    "Alphabet", "Generator", "GroupWord", "InverseUnavailable", "MapError", "Rewrite",
    "RewriteUnsupported", "WordError", "birkhoff_check", "commutator", "conjugate",
    "conjugate_product_rewrite", "evaluate", "has_primitive_root", "inverse_of",
    "alphabet_from_bindings", "make_generator", "parse_bindings", "parse_word", "reduce",
]
