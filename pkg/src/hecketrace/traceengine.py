"""Truncated traces ``Tr(C_lambda f_{n a s}, pi)``.

Two independent paths:

* :func:`truncated_trace` reduces to a compact trace on the Levi of
  ``lambda``, runs the geometric lemma on every standard module of the
  representation, drops terms induced from a proper parabolic of a block
  with coprime ``(s_i, p_i)``, and evaluates what is left blockwise.
* :func:`closed_form_trace` evaluates the six explicit two-slope formulas
  exactly as displayed.

A character ``eps`` with ``eps(uniformizer) = q^c`` is the symbol ``z``, so
``q^(c a s)`` is written ``z^(a s)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DomainError, UnsupportedCaseError
from .heckeops import SlopeVector, all_slope_vectors, chihat_torus_poly, kottwitz_poly, reduce_to_levi
from .polyring import LaurentPoly, VarContext, canonical_string, substitute
from .repmodel import (
    CharSpec,
    Speh,
    StandardModule,
    Twist,
    VirtualRep,
    allowed_in_regime,
    classify_type,
    expand,
    geometric_lemma_terms,
    hecke_matrix,
    regime,
    rep_symbols,
    torus_characters,
)

SIGN_CONVENTIONS = ("statement", "proof")


@dataclass(frozen=True)
class TraceResult:
    value: LaurentPoly
    provenance: str  # "engine" or "closed_form"
    sign_convention: str = "proof"

    def text(self) -> str:
        return f"# provenance={self.provenance} sign={self.sign_convention}\n{canonical_string(self.value)}"


# compact traces on a block Levi ----------------------------------------------------

def _evaluate(poly: LaurentPoly, points: Sequence[LaurentPoly]) -> LaurentPoly:
    return substitute(poly, list(points))


def compact_trace_block(blocks, fns: Sequence[tuple[int, int, int]], rep: Sequence[Twist],
                        ctx: VarContext | None = None) -> LaurentPoly:
    """Compact trace of ``(x)_i f_{p_i a s_i}`` against a tensor of twisted blocks.

    Per block: ``(-1)^(p-1) S(chihat f)`` at the Hecke matrix of
    ``delta_B^(1/2) * char`` for Steinberg, the same evaluation with sign
    ``+1`` for the trivial representation (which needs coprime ``(s, p)``).
    """
    blocks = tuple(blocks)
    rep = tuple(rep)
    if len(rep) != len(blocks) or len(fns) != len(blocks):
        raise DomainError(f"{len(rep)} representation blocks for Levi {blocks}")
    if ctx is None:
        ctx = VarContext(0, tuple(sorted({s for b in rep for s in b.char.symbols})))
    total = LaurentPoly.one(ctx)
    for p, (fp, alpha, si), block in zip(blocks, fns, rep):
        if block.m != p or fp != p:
            raise DomainError(f"block {block.text()} does not sit on GL_{p}")
        if block.tag == "St":
            sign = -1 if (p - 1) % 2 else 1
        elif block.tag == "Triv":
            if p > 1 and gcd(si, p) != 1:
                raise UnsupportedCaseError(
                    f"trivial block on GL_{p} with s={si}: the compact trace reduction "
                    "needs gcd(s, p) = 1")
            sign = 1
        else:
            raise DomainError(f"unknown block tag {block.tag!r}")
        poly = chihat_torus_poly(p, alpha, si)
        value = _evaluate(poly, hecke_matrix(torus_characters(block), ctx).entries)
        total = total * value.scale(sign)
    return total


# engine path ----------------------------------------------------------------------

def _context(rep, extra: Sequence[str] = ()) -> VarContext:
    return VarContext(0, tuple(sorted(set(rep_symbols(rep)) | set(extra))))


def _standard_trace(lam: SlopeVector, alpha: int, module: StandardModule, ctx: VarContext) -> LaurentPoly:
    parts, svec = lam.blocks, lam.svec
    fns = [(p, alpha, si) for p, si in zip(parts, svec)]
    total = LaurentPoly.zero(ctx)
    for term in geometric_lemma_terms(module.shape, parts, module.blocks):
        induced = term.properly_induced_blocks()
        if any(gcd(svec[i], parts[i]) == 1 for i in induced):
            continue
        if induced:
            i = induced[0]
            raise UnsupportedCaseError(
                f"block {i + 1} of {lam.text()} (p={parts[i]}, s={svec[i]}) receives a properly "
                f"induced term at w={term.w.one_line()} and gcd(s, p) != 1, so the vanishing "
                "argument does not apply")
        pieces = tuple(piece[0] for piece in term.levi_blocks)
        total = total + compact_trace_block(parts, fns, pieces, ctx)
    return total


def truncated_trace(lam: SlopeVector, alpha: int, s: int, rep, sign_convention: str = "proof",
                    symbols: Sequence[str] = ()) -> TraceResult:
    """``Tr(C_lambda f_{n alpha s}, rep)`` through the geometric lemma."""
    if alpha < 1:
        raise DomainError(f"alpha = {alpha} must be positive")
    if sign_convention not in SIGN_CONVENTIONS:
        raise DomainError(f"sign convention must be one of {SIGN_CONVENTIONS}")
    virtual = rep if isinstance(rep, VirtualRep) else expand(rep)
    ctx = _context(rep, symbols)
    lam.check(lam.n, s)
    out = LaurentPoly.zero(ctx)
    if not len(virtual):
        return TraceResult(out, "engine", sign_convention)
    plan = reduce_to_levi(lam, lam.n, alpha, s)
    for c, module in expand(virtual).terms:
        if module.n != lam.n:
            raise DomainError(f"{module.text()} lives on GL_{module.n}, slope vector on GL_{lam.n}")
        out = out + _standard_trace(lam, alpha, module, ctx).scale(c)
    return TraceResult(plan.prefactor(ctx) * out, "engine", sign_convention)


# closed forms ---------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSlope:
    p1: int
    p2: int
    s1: int
    s2: int

    @property
    def n(self) -> int:
        return self.p1 + self.p2

    @property
    def s(self) -> int:
        return self.s1 + self.s2


def two_slope_data(lam: SlopeVector) -> TwoSlope:
    """Check the standing assumptions: two slopes, coprime ``(s_i, p_i)``."""
    if len(lam.blocks) != 2:
        raise DomainError(f"{lam.text()} does not have exactly two slopes")
    (p1, p2), (s1, s2) = lam.blocks, lam.svec
    if gcd(s1, p1) != 1 or gcd(s2, p2) != 1:
        raise DomainError(f"{lam.text()}: need gcd(s1, p1) = gcd(s2, p2) = 1")
    if not 0 < s1 + s2 < p1 + p2:
        raise DomainError(f"{lam.text()}: need 0 < s < n")
    return TwoSlope(p1, p2, s1, s2)


def valid_two_slope_vectors(n: int) -> list[SlopeVector]:
    out = []
    for s in range(1, n):
        for lam in all_slope_vectors(n, s):
            try:
                two_slope_data(lam)
            except DomainError:
                continue
            out.append(lam)
    return out


def _q_points(ctx: VarContext, start: Fraction, count: int, step: Fraction = Fraction(1)) -> list[LaurentPoly]:
    return [LaurentPoly.q_power(Fraction(start) + k * step, ctx) for k in range(count)]


def _chihat_at(p: int, alpha: int, s: int, points) -> LaurentPoly:
    return _evaluate(chihat_torus_poly(p, alpha, s), points)


def _satake_at(p: int, alpha: int, s: int, points) -> LaurentPoly:
    return _evaluate(kottwitz_poly(p, alpha, s), points)


def _zpow(ctx: VarContext, sym: str, e: int) -> LaurentPoly:
    return LaurentPoly.monomial(ctx, z={sym: e})


def _std(ctx: VarContext, p: int) -> list[LaurentPoly]:
    """``(q^((1-p)/2), q^((3-p)/2), ..., q^((p-1)/2))``."""
    return _q_points(ctx, Fraction(1 - p, 2), p)


def closed_form_trace(case: int, lam: SlopeVector, alpha: int, *, eps: str = "z", eps1: str = "z1",
                      eps2: str = "z2", r=None, sign_convention: str = "proof") -> TraceResult:
    """One of the six displayed formulas.

    Cases: 1 ``St_n(eps)``; 2 ``1_n(eps)``; 3 ``Speh(2, n/2)(eps)``;
    4 ``Speh(n/2, 2)(eps)``; 5 ``Ind(St_p1(eps1) (x) St_p2(eps2))``;
    6 the same with trivial blocks.  For cases 5/6 with ``p1 = p2``,
    passing ``r`` selects ``Ind(St(eps|.|^r) (x) St(eps|.|^-r))``.

    ``sign_convention`` matters for case 1, where the statement has
    ``(-1)^(n-1)`` and the proof chain ``(-1)^n``, and case 6 with
    ``p1 != p2``, where the statement has ``(-1)^n`` and the proof chain
    ``+1``.
    """
    if sign_convention not in SIGN_CONVENTIONS:
        raise DomainError(f"sign convention must be one of {SIGN_CONVENTIONS}")
    if case not in range(1, 7):
        raise DomainError(f"closed form case must be 1..6, got {case}")
    d = two_slope_data(lam)
    n, p1, p2, s1, s2, s = d.n, d.p1, d.p2, d.s1, d.s2, d.s
    if alpha < 1:
        raise DomainError(f"alpha = {alpha} must be positive")
    if case in (3, 4):
        if n % 2:
            raise DomainError(f"closed form case {case} requires n even, got n={n}")
        half = n // 2
        if case == 3 and n < 6:
            raise DomainError(f"closed form case 3 requires n >= 6, got n={n}")
        if case == 4 and n < 4:
            raise DomainError(f"closed form case 4 requires n >= 4, got n={n}")
        if (p1, p2) not in ((half, half), (half + 1, half - 1), (half - 1, half + 1)):
            raise DomainError(f"closed form case {case} requires (p1, p2) = (n/2, n/2) or (n/2 +- 1, n/2 -+ 1)")
    syms = {1: (eps,), 2: (eps,), 3: (eps,), 4: (eps,)}.get(case)
    if syms is None:
        syms = (eps,) if r is not None else (eps1, eps2)
    ctx = VarContext(0, tuple(sorted(set(syms))))
    pref = LaurentPoly.q_power(alpha * (Fraction(s * (n - s), 2) - Fraction(s1 * (p1 - s1), 2)
                                        - Fraction(s2 * (p2 - s2), 2)), ctx)
    a = alpha

    if case == 1:
        sign = (-1) ** (n - 1) if sign_convention == "statement" else (-1) ** n
        f1 = _chihat_at(p1, a, s1, _q_points(ctx, Fraction(1 - n, 2), p1))
        # the second tuple runs in unit steps up to q^((n-1)/2)
        f2 = _chihat_at(p2, a, s2, _q_points(ctx, Fraction(1 - n + 2 * p1, 2), p2))
        value = pref * _zpow(ctx, eps, a * s) * f1 * f2
        return TraceResult(value.scale(sign), "closed_form", sign_convention)

    if case == 2:
        pts1 = [LaurentPoly.q_power((2 * j - 1 - p1) + Fraction(n - (2 * j - 1), 2), ctx) for j in range(1, p1 + 1)]
        pts2 = [LaurentPoly.q_power((2 * j - 1 - p2) + Fraction(n - 1 - 2 * p1 - 2 * (j - 1), 2), ctx)
                for j in range(1, p2 + 1)]
        value = pref * _zpow(ctx, eps, a * s) * _chihat_at(p1, a, s1, pts1) * _chihat_at(p2, a, s2, pts2)
        return TraceResult(value, "closed_form", sign_convention)

    if case == 3:
        y = n // 2
        z = _zpow(ctx, eps, a * s)
        if p1 == p2:
            sign = 1 if y > 3 else -1
            up = _std(ctx, y)
            down = _q_points(ctx, Fraction(-y, 2), y)
            inner = (_satake_at(y, a, s1, up) * _satake_at(y, a, s2, down)
                     + _satake_at(y, a, s2, up) * _satake_at(y, a, s1, down))
            return TraceResult((pref * z * inner).scale(sign), "closed_form", sign_convention)
        inner = (_satake_at(y + 1, a, s1, _q_points(ctx, Fraction(-y - 1, 2), y + 1))
                 * _satake_at(y - 1, a, s2, _q_points(ctx, Fraction(1 - y, 2), y - 1)))
        return TraceResult(pref * z * inner, "closed_form", sign_convention)

    if case == 4:
        x = n // 2
        z = _zpow(ctx, eps, a * s)
        if p1 == p2:
            inner = (_chihat_at(p1, a, s1, _q_points(ctx, Fraction(-1 - x, 2), p1))
                     * _chihat_at(p2, a, s2, _q_points(ctx, Fraction(1 - x, 2), p2)))
            return TraceResult(pref * z * inner, "closed_form", sign_convention)
        inner = (_chihat_at(p1, a, s1, _q_points(ctx, Fraction(-p1, 2), p1))
                 * _chihat_at(p2, a, s2, _q_points(ctx, Fraction(-p2, 2), p2)))
        return TraceResult(-(pref * z * inner), "closed_form", sign_convention)

    # cases 5 and 6
    A1 = _chihat_at(p1, a, s1, _std(ctx, p1))
    A2 = _chihat_at(p2, a, s2, _std(ctx, p2))
    if p1 != p2:
        if r is not None:
            raise DomainError("the |.|^(+-r) twist needs p1 = p2")
        if case == 5 or sign_convention == "statement":
            sign = (-1) ** n
        else:
            sign = 1
        value = pref * _zpow(ctx, eps1, a * s1) * A1 * _zpow(ctx, eps2, a * s2) * A2
        return TraceResult(value.scale(sign), "closed_form", sign_convention)
    if r is not None:
        r = Fraction(r)
        if not -Fraction(1, 2) < r < Fraction(1, 2):
            raise DomainError(f"twist r = {r} must lie in (-1/2, 1/2)")
        # symmetric completion: the second summand carries no extra character factor
        inner = (LaurentPoly.q_power(r * a * (s2 - s1), ctx) + LaurentPoly.q_power(r * a * (s1 - s2), ctx)) * A1 * A2
        return TraceResult(pref * _zpow(ctx, eps, a * s) * inner, "closed_form", sign_convention)
    inner = (_zpow(ctx, eps1, a * s1) * _zpow(ctx, eps2, a * s2)
             + _zpow(ctx, eps2, a * s1) * _zpow(ctx, eps1, a * s2)) * A1 * A2
    return TraceResult(pref * inner, "closed_form", sign_convention)


def closed_form_rep(case: int, lam: SlopeVector, *, eps: str = "z", eps1: str = "z1", eps2: str = "z2", r=None):
    """The representation a closed-form case is about."""
    p1, p2 = lam.blocks
    n = p1 + p2
    if case == 1:
        return Twist("St", n, CharSpec(eps))
    if case == 2:
        return Twist("Triv", n, CharSpec(eps))
    if case == 3:
        return Speh(2, n // 2, CharSpec(eps))
    if case == 4:
        return Speh(n // 2, 2, CharSpec(eps))
    tag = "St" if case == 5 else "Triv"
    if r is not None:
        r = Fraction(r)
        return StandardModule((Twist(tag, p1, CharSpec(eps, r)), Twist(tag, p2, CharSpec(eps, -r))))
    return StandardModule((Twist(tag, p1, CharSpec(eps1)), Twist(tag, p2, CharSpec(eps2))))


def case_applies(case: int, lam: SlopeVector) -> bool:
    """Whether the displayed hypotheses of ``case`` hold for this slope vector."""
    try:
        d = two_slope_data(lam)
    except DomainError:
        return False
    n, half = d.n, d.n // 2
    near = (d.p1, d.p2) in ((half, half), (half + 1, half - 1), (half - 1, half + 1))
    if case in (1, 2, 5, 6):
        return True
    if case == 3:
        return n % 2 == 0 and n >= 6 and near
    if case == 4:
        return n % 2 == 0 and n >= 4 and near
    return False


# vanishing and ray sums ------------------------------------------------------------

def vanishing_predicate(rep, lam: SlopeVector) -> bool:
    """Whether the trace must vanish by the type I / type II dichotomy."""
    d = two_slope_data(lam)
    kind = classify_type(rep, d.p1, d.p2)
    return not allowed_in_regime(kind, regime(d.n, d.p1, d.p2))


@dataclass(frozen=True)
class RaySum:
    total: LaurentPoly
    skipped: tuple[str, ...]
    reference: LaurentPoly | None

    @property
    def agrees(self) -> bool | None:
        if self.reference is None or self.skipped:
            return None
        return self.total == self.reference


def untruncated_reference(n: int, alpha: int, s: int, rep, ctx: VarContext) -> LaurentPoly | None:
    """Full trace of ``f_{n a s}`` when known: 0 on Steinberg, Satake value on ``1_n(eps)``."""
    if isinstance(rep, Twist) and rep.m == n:
        if rep.tag == "St" and n > 1:
            return LaurentPoly.zero(ctx)
        chars = [rep.char.twisted(-Fraction(n + 1 - 2 * i, 2)) for i in range(1, n + 1)]
        return _evaluate(kottwitz_poly(n, alpha, s), hecke_matrix(chars, ctx).entries)
    return None


def ray_sum(n: int, alpha: int, s: int, rep) -> RaySum:
    """Sum of truncated traces over every slope ray, next to the untruncated value."""
    ctx = _context(rep)
    total = LaurentPoly.zero(ctx)
    skipped = []
    for lam in all_slope_vectors(n, s):
        try:
            total = total + truncated_trace(lam, alpha, s, rep).value
        except UnsupportedCaseError:
            skipped.append(lam.text())
    return RaySum(total, tuple(skipped), untruncated_reference(n, alpha, s, rep, ctx))


__all__ = [
    "TraceResult", "compact_trace_block", "truncated_trace", "closed_form_trace", "closed_form_rep",
    "case_applies", "valid_two_slope_vectors", "two_slope_data", "TwoSlope", "vanishing_predicate",
    "ray_sum", "RaySum",
]
