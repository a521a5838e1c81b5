"""Command-line front end. Every report is one JSON object per line on
stdout; exit status is 0 when all requested checks pass, 1 when one fails
and 2 on usage or parse errors."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .constructions import REGISTRY, ConstructionError, verify_suite
from .fields import FieldError, FieldElem, QQ, parse_field
from .freeness import FreenessError, certify_free_product, certify_free_subgroup
from .pan import (OracleError, PanError, PanSpec, birationality_criterion, blowdown_build,
                  build_psi, build_psi_tilde, contraction_check, generic_fiber_size)
from .parse import ParseError, parse_components, parse_poly, split_components
from .poly import PolyError
from .ratmap import MapError, compose_with_raw_degree, parse_map
from .words import (WordError, alphabet_from_bindings, evaluate, parse_bindings, parse_word,
                    reduce)

USAGE_ERRORS = (ParseError, FieldError, PolyError, MapError, WordError, ConstructionError,
                PanError, OracleError, FreenessError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message} (see --help)")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FieldElem):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


class Reporter:
    def __init__(self, out, quiet=False):
        self.out = out
        self.quiet = quiet
        self.ok = True

    def emit(self, rec: dict, counts=True):
        if counts and rec.get("pass") is False:
            self.ok = False
        if not self.quiet:
            self.out.write(json.dumps(rec, default=_jsonable, separators=(", ", ": ")) + "\n")


# ---------------------------------------------------------------------------
# argument helpers

def int_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "..." in part or ".." in part:
            lo, hi = part.replace("...", "..").split("..")
            out += range(int(lo), int(hi) + 1)
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _field(text):
    try:
        return parse_field(text)
    except FieldError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("common options")
    g.add_argument("--field", type=_field, default=QQ, help="Q, GF(p) or CYC(p)")
    g.add_argument("--seed", type=_nonneg, default=0)
    g.add_argument("--prime", type=int_list, default=None, help="comma-separated primes")
    g.add_argument("--max-len", type=int, default=None)
    g.add_argument("--json", action="store_true", help="JSON lines output (the default)")
    g.add_argument("--quiet", action="store_true", help="no report lines, exit status only")
    g.add_argument("--timing", action="store_true", help="include wall-clock millis")


def _sub(subs, name, help_):
    p = subs.add_parser(name, help=help_)
    _common(p)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cremona", description="Exact computations with birational maps of P^n.")
    subs = ap.add_subparsers(dest="cmd", parser_class=_Parser, required=True)

    p = _sub(subs, "verify", "run the identity registry")
    p.add_argument("--n", type=int_list, required=True)
    p.add_argument("--all", action="store_true")
    p.add_argument("--check", action="append", choices=sorted(REGISTRY))
    p.set_defaults(func=cmd_verify)

    p = _sub(subs, "compose", "compose maps left to right (f1 o f2 o ...)")
    p.add_argument("--map", action="append", required=True)
    p.add_argument("--chart", action="store_true", help="maps given as num/den chart components")
    p.add_argument("--expect", help="expected map, or 'id'")
    p.set_defaults(func=cmd_compose)

    p = _sub(subs, "degree", "normalize a map and report its degree")
    p.add_argument("--map", required=True)
    p.add_argument("--chart", action="store_true")
    p.add_argument("--expect", type=int)
    p.set_defaults(func=cmd_degree)

    p = _sub(subs, "word", "evaluate a group word")
    p.add_argument("--word", required=True)
    p.add_argument("--alphabet", help="file of 'name = [map]' lines")
    p.add_argument("--bind", action="append", default=[], metavar="NAME=[MAP]")
    p.add_argument("--n", type=int, help="dimension when no map fixes it")
    p.add_argument("--expect", help="expected map, or 'id'")
    p.set_defaults(func=cmd_word)

    p = _sub(subs, "fiber", "generic fiber size oracle for a map")
    p.add_argument("--map", required=True)
    p.add_argument("--chart", action="store_true")
    p.add_argument("--trials", type=int, default=24)
    p.add_argument("--expect", type=int)
    p.set_defaults(func=cmd_fiber)

    p = _sub(subs, "freeness", "free-product certificate for generic pencil generators")
    p.add_argument("--gens", type=_nonneg, default=0, help="highest generator index k")
    p.add_argument("--subgroup", action="store_true", help="words in h_i = g_i s")
    p.add_argument("--max-words", type=int)
    p.set_defaults(func=cmd_freeness)

    pan = subs.add_parser("pan", help="Psi_{P,Q,R} construction")
    psubs = pan.add_subparsers(dest="pan_cmd", parser_class=_Parser, required=True)
    for name, fn, help_ in [("build", cmd_pan_build, "build Psi and its tilde map"),
                            ("check", cmd_pan_check, "birationality criterion"),
                            ("fiber", cmd_pan_fiber, "fiber oracle on Psi")]:
        p = _sub(psubs, name, help_)
        p.add_argument("--P", required=True)
        p.add_argument("--Q", required=True)
        p.add_argument("--R", required=True, help="'R_0; ...; R_{n-1}' in z0..z{n-1}")
        if name == "check":
            p.add_argument("--trials", type=int, default=24)
            p.add_argument("--expect", choices=["birational", "not_birational"])
        if name == "fiber":
            p.add_argument("--trials", type=int, default=24)
            p.add_argument("--expect", type=int)
        p.set_defaults(func=fn)
    p = _sub(psubs, "blowdown", "contract a hypersurface to (0:...:0:1)")
    p.add_argument("--q", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--check-prime", type=int_list, default=None)
    p.add_argument("--tries", type=int, default=100)
    p.set_defaults(func=cmd_pan_blowdown)
    return ap


# ---------------------------------------------------------------------------
# commands

def _primes(args, default):
    return args.prime if args.prime else list(default)


def cmd_verify(args, rep: Reporter):
    if not args.all and not args.check:
        raise UsageError("verify: give --all or at least one --check")
    checks = None if args.all else args.check
    for r in verify_suite(args.n, primes=_primes(args, (3, 5)), seed=args.seed, checks=checks):
        if not args.timing:
            r.pop("millis", None)
        rep.emit(r)


def _expected(text, n, field, chart=False):
    if text.strip().lower() in ("id", "identity"):
        from .ratmap import RatMap
        return RatMap.identity(n, field)
    return parse_map(text, field, chart=chart)


def cmd_compose(args, rep: Reporter):
    maps = [parse_map(m, args.field, chart=args.chart) for m in args.map]
    out, raw = maps[0], maps[0].degree
    for g in maps[1:]:
        out, raw = compose_with_raw_degree(out, g)
    rec = {"command": "compose", "maps": len(maps), "map": out.format(), "degree": out.degree,
           "raw_degree": raw, "identity": out.is_identity()}
    if args.expect:
        rec["pass"] = out == _expected(args.expect, out.n, args.field, args.chart)
    rep.emit(rec)


def cmd_degree(args, rep: Reporter):
    f = parse_map(args.map, args.field, chart=args.chart)
    rec = {"command": "degree", "map": f.format(), "n": f.n, "degree": f.degree}
    if args.expect is not None:
        rec["pass"] = f.degree == args.expect
    rep.emit(rec)


def cmd_word(args, rep: Reporter):
    lines = []
    if args.alphabet:
        try:
            with open(args.alphabet, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as e:
            raise UsageError(f"word: cannot read alphabet: {e.strerror}") from None
    lines += args.bind
    bindings = parse_bindings(lines, args.field)
    alpha = alphabet_from_bindings(bindings, args.field, args.n)
    w = parse_word(args.word)
    f = evaluate(w, alpha)
    rec = {"command": "word", "word": str(w) or "1", "reduced": str(reduce(w, alpha)) or "1",
           "n": alpha.n, "map": f.format(), "degree": f.degree, "identity": f.is_identity()}
    if args.expect:
        rec["pass"] = f == _expected(args.expect, alpha.n, args.field)
    rep.emit(rec)


def _fiber_record(f, args):
    res = generic_fiber_size(f, _primes(args, (7,)), trials=args.trials, seed=args.seed)
    rec = {"map": f.format(), "degree": f.degree}
    rec.update(res)
    if args.expect is not None:
        rec["pass"] = res["size"] == args.expect
    return rec


def cmd_fiber(args, rep: Reporter):
    f = parse_map(args.map, args.field, chart=args.chart)
    rec = {"command": "fiber"}
    rec.update(_fiber_record(f, args))
    rep.emit(rec)


def cmd_freeness(args, rep: Reporter):
    L = args.max_len if args.max_len is not None else 6
    fn = certify_free_subgroup if args.subgroup else certify_free_product
    res = fn(L, args.gens, max_words=args.max_words)
    for e in res.pop("entries"):
        e = {k: v for k, v in e.items() if v is not None}
        rep.emit(e, counts=False)
    rep.emit(res)


def _panspec(args) -> PanSpec:
    rtext = args.R.strip()
    if not rtext.startswith("["):
        rtext = f"[{rtext}]"
    n = len(split_components(rtext))
    P = parse_poly(args.P, n + 1, args.field)
    Q = parse_poly(args.Q, n + 1, args.field)
    R = parse_components(rtext, args.field, nvars=n)
    return PanSpec.make(P, Q, R)


def cmd_pan_build(args, rep: Reporter):
    spec = _panspec(args)
    rec = {"command": "pan build", "spec": spec.to_dict(), "psi": build_psi(spec).format()}
    rec["psi_degree"] = build_psi(spec).degree
    try:
        rec["psi_tilde"] = build_psi_tilde(spec).format()
    except MapError as e:
        rec["psi_tilde"] = None
        rec["psi_tilde_error"] = str(e)
    rep.emit(rec)


def cmd_pan_check(args, rep: Reporter):
    spec = _panspec(args)
    res = birationality_criterion(spec, primes=_primes(args, (7, 11, 13)), trials=args.trials,
                                  seed=args.seed)
    rec = {"command": "pan check"}
    rec.update(res)
    if args.expect:
        rec["pass"] = res["verdict"] == args.expect
    else:
        rec["pass"] = res["verdict"] in ("birational", "not_birational")
    rep.emit(rec)


def cmd_pan_fiber(args, rep: Reporter):
    spec = _panspec(args)
    rec = {"command": "pan fiber"}
    rec.update(_fiber_record(build_psi(spec), args))
    rep.emit(rec)


def cmd_pan_blowdown(args, rep: Reporter):
    # the ambient P^n is read off the highest variable index in q
    nvars = 1 + max((int(t) for t in re.findall(r"z(\d+)", args.q)), default=0)
    q = parse_poly(args.q, nvars, args.field)
    primes = (args.check_prime or []) + (args.prime or []) or [7]
    bd, psi = blowdown_build(q, args.d, seed=args.seed, max_tries=args.tries)
    rec = {"command": "pan blowdown", "spec": bd.to_dict(), "psi": psi.format(),
           "degree": psi.degree, "checks": []}
    ok = psi.degree == bd.l + 1 if args.d is None else psi.degree == args.d
    for p in primes:
        c = contraction_check(psi, q, p)
        rec["checks"].append(c)
        ok = ok and c["pass"]
    rec["pass"] = ok
    rep.emit(rec)


# ---------------------------------------------------------------------------

def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)
    rep = Reporter(out, quiet=args.quiet)
    try:
        args.func(args, rep)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2
    except USAGE_ERRORS as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 2
    return 0 if rep.ok else 1


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
