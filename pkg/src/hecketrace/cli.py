"""Command-line front end.

Exit codes: 0 success, 1 failed verification, 2 domain or usage error,
3 unsupported case.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import DomainError, HeckeTraceError
from .heckeops import (
    SlopeVector,
    chi_truncated_ct,
    chihat_truncated_ct,
    constant_term,
    kottwitz_poly,
    newton_truncated_ct,
)
from .polyring import canonical_string, evaluate_numeric
from .repmodel import CharSpec, classify_type, parse_rep, regime, speh_alternating_sum, speh_expand
from .spectral import aggregate_trace, load_spectrum
from .symcomb import (
    Permutation,
    distinct_row_entries,
    intersection_composition,
    is_minimal_rep,
    min_coset_reps,
    strict_parts,
    tableau_from_perm,
)
from .traceengine import closed_form_trace, truncated_trace


def parse_parts(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise DomainError(f"expected comma separated integers, got {text!r}") from None
    return strict_parts(parts)


def parse_refinement(text: str) -> list[tuple[int, ...]]:
    return [parse_parts(chunk) for chunk in text.split(";")]


def parse_char(text: str | None) -> CharSpec:
    if not text:
        return CharSpec()
    sym, _, shift = text.partition(";")
    return CharSpec(None if sym in ("", "-") else sym, Fraction(shift or 0))


def levi_lines(fn) -> list[str]:
    lines = []
    for (qexp, blocks), count in sorted(fn.normalized().items(), key=lambda kv: (kv[0][1], kv[0][0])):
        body = " (x) ".join(f"f({m},{a},{s})" for m, a, s in blocks)
        lines.append(f"{count}*q^({qexp}) * {body}")
    return lines or ["0"]


def _levi_output(fn, symbols=()) -> list[str]:
    return levi_lines(fn) + [f"flat: {canonical_string(fn.flatten(symbols))}"]


# subcommand handlers -----------------------------------------------------------

def cmd_satake(a) -> list[str]:
    return [canonical_string(kottwitz_poly(a.n, a.alpha, a.s))]


def cmd_constant_term(a) -> list[str]:
    return _levi_output(constant_term(a.n, a.alpha, a.s, parse_parts(a.parabolic)))


def cmd_truncate(a) -> list[str]:
    levi = parse_parts(a.levi) if a.levi else (a.n,)
    if sum(levi) != a.n:
        raise DomainError(f"Levi {levi} does not partition n = {a.n}")
    refinement = parse_refinement(a.refine) if a.refine else [(1,) * m for m in levi]
    if a.kind == "chi":
        fn = chi_truncated_ct(levi, refinement, a.n, a.alpha, a.s)
    else:
        svec = parse_parts_loose(a.svec) if a.svec else (a.s,)
        if len(svec) != len(levi) or sum(svec) != a.s:
            raise DomainError(f"--svec {svec} must have one entry per Levi block and sum to s = {a.s}")
        fn = chihat_truncated_ct(levi, refinement, svec, a.alpha)
    return _levi_output(fn)


def parse_parts_loose(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise DomainError(f"expected comma separated integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise DomainError(f"negative entry in {text!r}")
    return vals


def cmd_newton_ct(a) -> list[str]:
    lam = SlopeVector.parse(a.lam)
    return _levi_output(newton_truncated_ct(lam, parse_parts(a.parabolic), lam.n, a.alpha, lam.s))


def cmd_min_reps(a) -> list[str]:
    return [w.one_line() for w in min_coset_reps(parse_parts(a.shape), parse_parts(a.type))]


def cmd_tableau(a) -> list[str]:
    w = Permutation(parse_parts_loose(a.perm))
    shape, typ = parse_parts(a.shape), parse_parts(a.type)
    t = tableau_from_perm(w, shape, typ)
    lines = t.render().splitlines()
    lines.append(f"row-semistandard: {'yes' if t.is_row_semistandard() else 'no'}")
    lines.append("distinct entries per row: " + ",".join(str(k) for k in distinct_row_entries(t)))
    if is_minimal_rep(w, shape, typ):
        lines.append("intersection composition: " + ",".join(str(k) for k in intersection_composition(w, shape, typ)))
    else:
        lines.append("intersection composition: none (w is not a minimal representative)")
    return lines


def cmd_speh_expand(a) -> list[str]:
    char = parse_char(a.char)
    rep = speh_alternating_sum(a.x, a.y, char) if a.raw else speh_expand(a.x, a.y, char)
    return [f"{c:+d} {r.text()}" for c, r in rep.terms] or ["0"]


def cmd_classify(a) -> list[str]:
    rep = parse_rep(a.rep)
    kind = classify_type(rep, a.p1, a.p2)
    return [f"{kind} (regime {regime(rep.n, a.p1, a.p2)})"]


def _numeric(value, a) -> list[str]:
    if a.numeric_q is None:
        return []
    symbols = {}
    for item in a.symbol_value or ():
        name, _, v = item.partition("=")
        symbols[name] = complex(v)
    z = evaluate_numeric(value, a.numeric_q, symbols)
    return [f"numeric: {z.real:.12g}{z.imag:+.12g}j"]


def cmd_trace(a) -> list[str]:
    if a.n is not None and a.mode == "closed-form" and a.case in (3, 4) and a.n % 2:
        raise DomainError(f"closed form case {a.case} requires n even, got n={a.n}")
    if not a.lam:
        raise DomainError("trace needs --lambda")
    lam = SlopeVector.parse(a.lam)
    if a.n is not None and a.n != lam.n:
        raise DomainError(f"--n {a.n} disagrees with the slope vector, which lives on GL_{lam.n}")
    if a.mode == "engine":
        if not a.rep:
            raise DomainError("trace engine needs --rep")
        res = truncated_trace(lam, a.alpha, lam.s, parse_rep(a.rep), sign_convention=a.sign_convention)
    else:
        if a.case is None:
            raise DomainError("trace closed-form needs --case")
        res = closed_form_trace(a.case, lam, a.alpha, eps=a.eps, eps1=a.eps1, eps2=a.eps2,
                                r=Fraction(a.r) if a.r is not None else None,
                                sign_convention=a.sign_convention)
    return res.text().splitlines() + _numeric(res.value, a)


def cmd_aggregate(a) -> list[str]:
    try:
        with open(a.spectrum, "rb") as fh:
            spec = load_spectrum(fh)
    except OSError as exc:
        raise DomainError(f"cannot read spectrum file: {exc.strerror}") from None
    return [canonical_string(aggregate_trace(a.alpha, SlopeVector.parse(a.lam), spec))]


def cmd_verify(a) -> tuple[list[str], int]:
    from .verify import ray_sum_report, run_suites

    names = [s.strip() for s in a.suite.split(",")] if a.suite else None
    results = run_suites(names)
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend("  " + d for d in r.detail)
    passed = sum(r.passed for r in results)
    lines.append(f"passed {passed}/{len(results)}, failed {len(results) - passed}")
    if a.ray_sum:
        lines.append("ray-sum diagnostic (informational, not asserted):")
        lines.extend("  " + line for line in ray_sum_report())
    return lines, 0 if passed == len(results) else 1


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hecketrace", description="Exact truncated traces of Kottwitz functions.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("satake", help="Satake polynomial of f_{n alpha s}")
    sp.add_argument("n", type=int)
    sp.add_argument("alpha", type=int)
    sp.add_argument("s", type=int)
    sp.set_defaults(func=cmd_satake)

    sp = sub.add_parser("constant-term", help="constant term along a standard parabolic")
    sp.add_argument("n", type=int)
    sp.add_argument("alpha", type=int)
    sp.add_argument("s", type=int)
    sp.add_argument("--parabolic", required=True)
    sp.set_defaults(func=cmd_constant_term)

    sp = sub.add_parser("truncate", help="chi or chi-hat truncated constant term")
    sp.add_argument("kind", choices=("chi", "chihat"))
    sp.add_argument("n", type=int)
    sp.add_argument("alpha", type=int)
    sp.add_argument("s", type=int)
    sp.add_argument("--levi", help="outer Levi blocks, default n")
    sp.add_argument("--refine", help="per-block refinement, blocks separated by ';' (default: torus)")
    sp.add_argument("--svec", help="chihat only: s_i per Levi block")
    sp.set_defaults(func=cmd_truncate)

    sp = sub.add_parser("newton-ct", help="Newton-truncated constant term")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--parabolic", required=True)
    sp.add_argument("--alpha", type=int, default=1)
    sp.set_defaults(func=cmd_newton_ct)

    sp = sub.add_parser("min-reps", help="minimal double coset representatives")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--type", required=True)
    sp.set_defaults(func=cmd_min_reps)

    sp = sub.add_parser("tableau", help="tableau of a permutation")
    sp.add_argument("--perm", required=True)
    sp.add_argument("--shape", required=True)
    sp.add_argument("--type", required=True)
    sp.set_defaults(func=cmd_tableau)

    sp = sub.add_parser("speh-expand", help="Speh(x, y) as standard modules")
    sp.add_argument("x", type=int)
    sp.add_argument("y", type=int)
    sp.add_argument("--char", help="symbol;shift, e.g. 'z;0'")
    sp.add_argument("--raw", action="store_true", help="alternating sum without collapsing x=1")
    sp.set_defaults(func=cmd_speh_expand)

    sp = sub.add_parser("classify", help="type I / type II classification")
    sp.add_argument("--rep", required=True)
    sp.add_argument("--p1", type=int, required=True)
    sp.add_argument("--p2", type=int, required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("trace", help="truncated trace, engine or closed form")
    sp.add_argument("mode", choices=("engine", "closed-form"))
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--n", type=int, help="rank; checked against --lambda")
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--rep")
    sp.add_argument("--case", type=int)
    sp.add_argument("--eps", default="z")
    sp.add_argument("--eps1", default="z1")
    sp.add_argument("--eps2", default="z2")
    sp.add_argument("--r", help="twist r for cases 5/6 with p1 = p2")
    sp.add_argument("--sign-convention", choices=("statement", "proof"), default="proof")
    sp.add_argument("--numeric-q", type=float, help="also print a numeric value at this q")
    sp.add_argument("--symbol-value", action="append", help="name=value for --numeric-q")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("aggregate", help="global trace of a spectrum file")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.set_defaults(func=cmd_aggregate)

    sp = sub.add_parser("verify", help="run the acceptance suites")
    sp.add_argument("--suite", help="comma separated names, e.g. A1,A7")
    sp.add_argument("--ray-sum", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def _emit(lines: list[str], fmt: str, command: str, code: int, out) -> None:
    if fmt == "json":
        out.write(json.dumps({"command": command, "exit": code, "lines": lines}) + "\n")
    else:
        out.write("".join(line + "\n" for line in lines))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except HeckeTraceError as exc:
        if args.format == "json":
            _emit([f"error: {exc}"], "json", args.command, exc.exit_code, sys.stdout)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    lines, code = result if isinstance(result, tuple) else (result, 0)
    _emit(lines, args.format, args.command, code, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
