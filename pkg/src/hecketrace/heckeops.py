"""Kottwitz functions at the Satake level and their truncated constant terms.

A function on a block Levi ``GL_{n_1} x ... x GL_{n_k}`` is kept as a formal
sum of terms ``q^e * (f_{n_1 a s_1} (x) ... (x) f_{n_k a s_k})``; flattening
multiplies the block Satake polynomials in consecutive variable ranges.

Sign conventions: an element in the support of ``f_{n a s}`` has
determinant valuation ``-a*s``, and the slope profile of a compact element
is the vector of negated eigenvalue valuations, sorted decreasingly.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError
from .polyring import LaurentPoly, VarContext
from .symcomb import chi_condition, chihat_condition, enumerate_compositions, strict_parts

Block = tuple[int, int, int]  # (size, alpha, s)


def _check_block(n: int, alpha: int, s: int) -> None:
    if n < 1 or alpha < 1 or not 0 <= s <= n:
        raise DomainError(f"f_(n={n}, alpha={alpha}, s={s}) needs n >= 1, alpha >= 1, 0 <= s <= n")


def kottwitz_poly(n: int, alpha: int, s: int, symbols: tuple[str, ...] = ()) -> LaurentPoly:
    """``q^(alpha s (n-s)/2) * sum over |I| = s of prod_{i in I} X_i^alpha``."""
    _check_block(n, alpha, s)
    ctx = VarContext(n, symbols)
    zeros = (0,) * len(symbols)
    qe = Fraction(alpha * s * (n - s), 2)
    terms = {}
    for subset in itertools.combinations(range(n), s):
        x = [0] * n
        for i in subset:
            x[i] = alpha
        terms[(qe, tuple(x), zeros)] = 1
    return LaurentPoly(ctx, terms)


def levi_constant(n: int, s: int, parts: Sequence[int], svec: Sequence[int]) -> Fraction:
    """``s(n-s)/2 - sum s_i (n_i - s_i)/2``."""
    return Fraction(s * (n - s), 2) - sum(Fraction(si * (ni - si), 2) for ni, si in zip(parts, svec))


@dataclass(frozen=True)
class LeviTerm:
    qexp: Fraction
    blocks: tuple[Block, ...]
    coeff: int = 1


@dataclass(frozen=True)
class LeviFunction:
    """Formal sum of tensor products of Kottwitz functions on a block Levi."""

    levi: tuple[int, ...]
    terms: tuple[LeviTerm, ...] = ()
    compact: bool = False

    def is_zero(self) -> bool:
        return not any(c for c in self.normalized().values())

    def normalized(self) -> dict:
        counts: Counter = Counter()
        for t in self.terms:
            counts[(t.qexp, t.blocks)] += t.coeff
        return {k: v for k, v in sorted(counts.items()) if v}

    def same_sum(self, other: "LeviFunction") -> bool:
        return self.levi == other.levi and self.normalized() == other.normalized()

    def flatten(self, symbols: tuple[str, ...] = ()) -> LaurentPoly:
        ctx = VarContext(sum(self.levi), symbols)
        total = LaurentPoly.zero(ctx)
        for t in self.terms:
            total = total + tensor_poly(t.blocks, symbols).scale(t.coeff) * LaurentPoly.q_power(t.qexp, ctx)
        return total

    def is_subsum_of(self, other: "LeviFunction") -> bool:
        mine, theirs = self.normalized(), other.normalized()
        return all(0 < v <= theirs.get(k, 0) for k, v in mine.items())


def tensor_poly(blocks: Sequence[Block], symbols: tuple[str, ...] = ()) -> LaurentPoly:
    """Satake polynomial of ``f_{b_1} (x) ... (x) f_{b_k}`` in consecutive variables."""
    n = sum(b[0] for b in blocks)
    ctx = VarContext(n, symbols)
    result = LaurentPoly.one(ctx)
    offset = 0
    for size, alpha, s in blocks:
        block = kottwitz_poly(size, alpha, s, symbols)
        shifted = {(qe, (0,) * offset + xe + (0,) * (n - offset - size), ze): c
                   for (qe, xe, ze), c in block.items()}
        result = result * LaurentPoly(ctx, shifted)
        offset += size
    return result


def constant_term(n: int, alpha: int, s: int, parabolic) -> LeviFunction:
    """Constant term of ``f_{n alpha s}`` along the standard parabolic ``P``."""
    _check_block(n, alpha, s)
    parts = strict_parts(parabolic, n)
    terms = []
    for svec in enumerate_compositions(s, len(parts), "extended"):
        if any(si > ni for si, ni in zip(svec, parts)):
            continue
        terms.append(LeviTerm(alpha * levi_constant(n, s, parts, svec),
                              tuple((ni, alpha, si) for ni, si in zip(parts, svec))))
    return LeviFunction(parts, tuple(terms))


def _check_refinement(m1: Sequence[int], refinement: Sequence[Sequence[int]]) -> tuple[int, ...]:
    if len(refinement) != len(m1):
        raise DomainError(f"refinement {refinement} has {len(refinement)} groups for {len(m1)} blocks")
    for ni, sub in zip(m1, refinement):
        strict_parts(sub)
        if sum(sub) != ni:
            raise DomainError(f"{tuple(sub)} does not refine the block of size {ni}")
    return tuple(p for sub in refinement for p in sub)


def refine_blockwise(fn: LeviFunction, refinement: Sequence[Sequence[int]]) -> LeviFunction:
    """Apply ``constant_term`` inside every block of ``fn``."""
    m2 = _check_refinement(fn.levi, refinement)
    terms = []
    for t in fn.terms:
        pieces = [constant_term(size, a, s, sub).terms for (size, a, s), sub in zip(t.blocks, refinement)]
        for combo in itertools.product(*pieces):
            terms.append(LeviTerm(t.qexp + sum(c.qexp for c in combo),
                                  tuple(b for c in combo for b in c.blocks), t.coeff))
    return LeviFunction(m2, tuple(terms), fn.compact)


def chi_truncated_ct(m1, refinement: Sequence[Sequence[int]], n: int, alpha: int, s: int) -> LeviFunction:
    """Keep constant-term terms whose slopes strictly decrease inside each M1-block."""
    _check_block(n, alpha, s)
    m1 = strict_parts(m1, n)
    m2 = _check_refinement(m1, refinement)
    groups = [len(sub) for sub in refinement]
    full = constant_term(n, alpha, s, m2)
    kept = tuple(t for t in full.terms if chi_condition([b[2] for b in t.blocks], m2, groups))
    return LeviFunction(m2, kept)


def chihat_truncated_ct(m1, refinement: Sequence[Sequence[int]], svec: Sequence[int], alpha: int) -> LeviFunction:
    """Truncation of ``(x)_i f_{n_i alpha s_i}`` keeping strictly slope-deficient prefixes."""
    m1 = strict_parts(m1)
    _check_refinement(m1, refinement)
    if len(svec) != len(m1):
        raise DomainError(f"s-vector {tuple(svec)} does not match blocks {m1}")
    per_block = []
    for ni, si, sub in zip(m1, svec, refinement):
        _check_block(ni, alpha, si)
        options = []
        for split in enumerate_compositions(si, len(sub), "extended"):
            if any(a > b for a, b in zip(split, sub)):
                continue
            if chihat_condition(split, sub, si):
                options.append((alpha * levi_constant(ni, si, sub, split),
                                tuple((m, alpha, x) for m, x in zip(sub, split))))
        per_block.append(options)
    terms = []
    for combo in itertools.product(*per_block):
        terms.append(LeviTerm(sum((c[0] for c in combo), Fraction(0)),
                              tuple(b for c in combo for b in c[1])))
    return LeviFunction(tuple(p for sub in refinement for p in sub), tuple(terms))


@lru_cache(maxsize=None)
def chihat_torus_poly(p: int, alpha: int, s: int, symbols: tuple[str, ...] = ()) -> LaurentPoly:
    """Satake polynomial of the full-torus truncation of ``f_{p alpha s}`` on ``GL_p``."""
    fn = chihat_truncated_ct((p,), [(1,) * p], (s,), alpha)
    return fn.flatten(symbols)


# slope vectors ----------------------------------------------------------------

@dataclass(frozen=True)
class SlopeVector:
    """Strictly decreasing slopes with multiplicities: ``((l_1, n_1), ..., (l_k, n_k))``."""

    slopes: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        clean = tuple((Fraction(l), int(m)) for l, m in self.slopes)
        object.__setattr__(self, "slopes", clean)
        if not clean:
            raise DomainError("a slope vector needs at least one block")
        for l, m in clean:
            if m < 1:
                raise DomainError(f"block multiplicity {m} must be positive")
            si = l * m
            if si.denominator != 1 or si < 0:
                raise DomainError(f"slope {l} with multiplicity {m} gives non-integral block sum {si}")
        vals = [l for l, _ in clean]
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise DomainError(f"slopes {vals} are not strictly decreasing")

    @classmethod
    def parse(cls, text: str) -> "SlopeVector":
        """``"1/3^3"`` or ``"1^1,0^1"``: slope ``^`` multiplicity, comma separated."""
        slopes = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if "^" not in chunk:
                raise DomainError(f"slope block {chunk!r} must look like slope^multiplicity")
            l, m = chunk.split("^", 1)
            try:
                slopes.append((Fraction(l), int(m)))
            except ValueError:
                raise DomainError(f"cannot read slope block {chunk!r}") from None
        return cls(tuple(slopes))

    @classmethod
    def from_blocks(cls, parts: Sequence[int], svec: Sequence[int]) -> "SlopeVector":
        return cls(tuple((Fraction(si, ni), ni) for ni, si in zip(parts, svec)))

    @property
    def blocks(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.slopes)

    @property
    def svec(self) -> tuple[int, ...]:
        return tuple(int(l * m) for l, m in self.slopes)

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def s(self) -> int:
        return sum(self.svec)

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(l for l, m in self.slopes for _ in range(m))

    def check(self, n: int, s: int) -> None:
        if self.n != n or self.s != s:
            raise DomainError(f"slope vector {self} is for (n={self.n}, s={self.s}), not (n={n}, s={s})")

    def text(self) -> str:
        return ",".join(f"{l}^{m}" for l, m in self.slopes)

    def __str__(self) -> str:
        return self.text()


def all_slope_vectors(n: int, s: int) -> list[SlopeVector]:
    """Every admissible slope vector with block sizes summing to ``n`` and block sums to ``s``."""
    out = []
    for k in range(1, n + 1):
        for parts in enumerate_compositions(n, k, "strict"):
            for svec in enumerate_compositions(s, k, "extended"):
                if any(si > ni for si, ni in zip(svec, parts)):
                    continue
                slopes = [Fraction(si, ni) for si, ni in zip(svec, parts)]
                if all(a > b for a, b in zip(slopes, slopes[1:])):
                    out.append(SlopeVector.from_blocks(parts, svec))
    return out


def _on_ray(profile: Sequence[Fraction], target: Sequence[Fraction]) -> bool:
    """``profile == c * target`` for some ``c > 0``."""
    if all(t == 0 for t in target):
        return all(p == 0 for p in profile)
    ratios = {p / t for p, t in zip(profile, target) if t != 0}
    if len(ratios) != 1:
        return False
    c = ratios.pop()
    return c > 0 and all(p == c * t for p, t in zip(profile, target))


def newton_truncated_ct(lam: SlopeVector, parabolic, n: int, alpha: int, s: int) -> LeviFunction:
    """``C_c^M C_lam chi^G_M f^(P)`` as a compact-flagged function on ``M``.

    Each term of the chi-truncated constant term is supported on compact
    elements whose slope profile is ``alpha * ((s'_j / m_j)^{m_j})``; a term
    survives exactly when that profile lies on the ray through ``lam``.
    """
    lam.check(n, s)
    parts = strict_parts(parabolic, n)
    chi = chi_truncated_ct((n,), [parts], n, alpha, s)
    target = lam.vector()
    kept = []
    for t in chi.terms:
        profile = [Fraction(alpha * b[2], b[0]) for b in t.blocks for _ in range(b[0])]
        if _on_ray(profile, target):
            kept.append(t)
    return LeviFunction(parts, tuple(kept), compact=True)


def compact_constant_term(n: int, alpha: int, s: int, parabolic, compact_levi=None) -> LeviFunction:
    """``C_c^{M'} f^(P)``: terms whose slopes are constant inside each block of ``M'``.

    ``M'`` defaults to ``GL_n`` and must be refined by ``P``.
    """
    parts = strict_parts(parabolic, n)
    outer = strict_parts(compact_levi or (n,), n)
    groups, idx = [], 0
    for size in outer:
        start = idx
        tot = 0
        while tot < size:
            if idx >= len(parts):
                raise DomainError(f"{parts} does not refine {outer}")
            tot += parts[idx]
            idx += 1
        if tot != size:
            raise DomainError(f"{parts} does not refine {outer}")
        groups.append(range(start, idx))
    full = constant_term(n, alpha, s, parts)
    kept = []
    for t in full.terms:
        ok = all(len({Fraction(t.blocks[j][2], t.blocks[j][0]) for j in g}) == 1 for g in groups)
        if ok:
            kept.append(t)
    return LeviFunction(parts, tuple(kept), compact=True)


@dataclass(frozen=True)
class ReductionPlan:
    """Right-hand side of the reduction of a truncated trace to a compact Levi trace."""

    prefactor_qexp: Fraction
    blocks: tuple[int, ...]
    functions: tuple[Block, ...]
    compact: bool = True
    jacquet_levi: tuple[int, ...] = field(default=())
    jacquet_twist: Fraction = Fraction(-1, 2)

    def prefactor(self, ctx: VarContext) -> LaurentPoly:
        return LaurentPoly.q_power(self.prefactor_qexp, ctx)


def reduce_to_levi(lam: SlopeVector, n: int, alpha: int, s: int) -> ReductionPlan:
    lam.check(n, s)
    parts, svec = lam.blocks, lam.svec
    return ReductionPlan(
        prefactor_qexp=alpha * levi_constant(n, s, parts, svec),
        blocks=parts,
        functions=tuple((p, alpha, si) for p, si in zip(parts, svec)),
        jacquet_levi=parts,
    )


def iwahori_predicate(result) -> bool:
    """Whether a truncated trace came out nonzero (then the input has Iwahori fixed vectors)."""
    value = getattr(result, "value", result)
    return not value.is_zero()

