"""Exact multivariate Laurent polynomials in q, X_1..X_n and character symbols.

A polynomial is a finite map from exponent vectors ``(q_exp, x_exps, z_exps)``
to nonzero rational coefficients.  ``q_exp`` is an exact :class:`Fraction`
(q^(1/2) and friends appear everywhere), the X and z exponents are integers.
Every value is immutable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ContextError, IncompleteAssignmentError, UsageError

Number = Union[int, Fraction]
Key = tuple  # (Fraction, tuple[int, ...], tuple[int, ...])

_SYMBOL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class VarContext:
    """Declared variables: ``n`` X-variables and an ordered tuple of symbols."""

    n: int = 0
    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ContextError(f"negative variable count {self.n}")
        for s in self.symbols:
            if not _SYMBOL_RE.match(s) or s == "q" or re.match(r"^X\d+$", s):
                raise ContextError(f"invalid character symbol name {s!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ContextError(f"duplicate symbols in {self.symbols}")

    def with_symbols(self, *names: str) -> "VarContext":
        extra = tuple(s for s in names if s not in self.symbols)
        return VarContext(self.n, self.symbols + extra)

    def symbol_index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise ContextError(f"symbol {name!r} not declared in {self.symbols}") from None


def union_context(contexts: Iterable[VarContext], n: int | None = None) -> VarContext:
    """Smallest context containing every given one; symbols sorted by name."""
    contexts = list(contexts)
    names = sorted({s for c in contexts for s in c.symbols})
    if n is None:
        n = max((c.n for c in contexts), default=0)
    return VarContext(n, tuple(names))


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class LaurentPoly:
    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Key, Number] | None = None):
        self.ctx = ctx
        clean: dict = {}
        for key, c in (terms or {}).items():
            qe, xe, ze = key
            if len(xe) != ctx.n or len(ze) != len(ctx.symbols):
                raise ContextError(f"exponent vector {key} does not fit {ctx}")
            c = _frac(c)
            if c:
                k = (Fraction(qe), tuple(xe), tuple(ze))
                clean[k] = clean.get(k, 0) + c
                if not clean[k]:
                    del clean[k]
        self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> "LaurentPoly":
        return cls(ctx)

    @classmethod
    def const(cls, c: Number, ctx: VarContext) -> "LaurentPoly":
        return cls(ctx, {(Fraction(0), (0,) * ctx.n, (0,) * len(ctx.symbols)): c})

    @classmethod
    def one(cls, ctx: VarContext) -> "LaurentPoly":
        return cls.const(1, ctx)

    @classmethod
    def monomial(cls, ctx: VarContext, coeff: Number = 1, q: Number = 0,
                 x: Mapping[int, int] | Sequence[int] | None = None,
                 z: Mapping[str, int] | None = None) -> "LaurentPoly":
        """``x`` maps 1-based variable indices to exponents (or is a full vector)."""
        xe = [0] * ctx.n
        if isinstance(x, Mapping):
            for i, e in x.items():
                if not 1 <= i <= ctx.n:
                    raise ContextError(f"X{i} not declared (n={ctx.n})")
                xe[i - 1] = e
        elif x is not None:
            if len(x) != ctx.n:
                raise ContextError(f"exponent vector of length {len(x)} in n={ctx.n}")
            xe = list(x)
        ze = [0] * len(ctx.symbols)
        for name, e in (z or {}).items():
            ze[ctx.symbol_index(name)] = e
        return cls(ctx, {(_frac(q), tuple(xe), tuple(ze)): coeff})

    @classmethod
    def q_power(cls, e: Number, ctx: VarContext) -> "LaurentPoly":
        return cls.monomial(ctx, q=e)

    @classmethod
    def var(cls, i: int, ctx: VarContext) -> "LaurentPoly":
        return cls.monomial(ctx, x={i: 1})

    @classmethod
    def symbol(cls, name: str, ctx: VarContext) -> "LaurentPoly":
        return cls.monomial(ctx, z={name: 1})

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def x_degree(self) -> set[int]:
        return {sum(xe) for (_, xe, _) in self._terms}

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.ctx)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({canonical_string(self)!r})"

    def __str__(self) -> str:
        return canonical_string(self)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ctx != self.ctx:
                raise ContextError(f"context mismatch: {self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other, self.ctx)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ctx, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for (q1, x1, z1), c1 in self._terms.items():
            for (q2, x2, z2), c2 in other._terms.items():
                k = (q1 + q2,
                     tuple(a + b for a, b in zip(x1, x2)),
                     tuple(a + b for a, b in zip(z1, z2)))
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(self.ctx, out)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "LaurentPoly":
        c = _frac(c)
        return LaurentPoly(self.ctx, {k: v * c for k, v in self._terms.items()})

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial; general polynomials are not units."""
        if not self.is_monomial():
            raise UsageError("only monomials are invertible")
        ((qe, xe, ze), c), = self._terms.items()
        return LaurentPoly(self.ctx, {(-qe, tuple(-e for e in xe), tuple(-e for e in ze)): 1 / c})

    def with_context(self, ctx: VarContext) -> "LaurentPoly":
        """Re-embed into a context with at least as many variables and symbols."""
        if ctx.n < self.ctx.n:
            raise ContextError(f"cannot shrink n from {self.ctx.n} to {ctx.n}")
        idx = [ctx.symbol_index(s) for s in self.ctx.symbols]
        out = {}
        for (qe, xe, ze), c in self._terms.items():
            nz = [0] * len(ctx.symbols)
            for i, e in zip(idx, ze):
                nz[i] = e
            out[(qe, xe + (0,) * (ctx.n - self.ctx.n), tuple(nz))] = c
        return LaurentPoly(ctx, out)


def arith(op: str, a: LaurentPoly, b=None) -> LaurentPoly:
    """Dispatch ``add|sub|mul|neg|scale``; ``scale`` takes a number as ``b``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "scale":
        return a.scale(b)
    raise UsageError(f"unknown arithmetic op {op!r}")


def _images(w) -> tuple[int, ...]:
    return tuple(getattr(w, "images", w))


def permute_vars(f: LaurentPoly, w) -> LaurentPoly:
    """Send X_i to X_{w(i)}; q and symbol exponents are untouched."""
    img = _images(w)
    if len(img) != f.ctx.n:
        raise ContextError(f"permutation of size {len(img)} acting on n={f.ctx.n}")
    out = {}
    for (qe, xe, ze), c in f.items():
        new = [0] * f.ctx.n
        for i, e in enumerate(xe):
            new[img[i] - 1] = e
        out[(qe, tuple(new), ze)] = c
    return LaurentPoly(f.ctx, out)


def _monomial_parts(m: LaurentPoly):
    if not m.is_monomial():
        raise UsageError(f"substitution value {m} is not a monomial")
    ((qe, xe, ze), c), = m.items()
    return c, qe, xe, ze


def substitute(f: LaurentPoly, assignment) -> LaurentPoly:
    """Replace X_i by monomials.

    ``assignment`` is either a mapping ``{i: monomial}`` (1-based) or a
    sequence of n monomials.  All values share one target context, which
    must declare every symbol of ``f``.  Unassigned variables with a
    nonzero exponent raise :class:`IncompleteAssignmentError`.
    """
    if isinstance(assignment, Mapping):
        assign = dict(assignment)
    else:
        assign = {i + 1: m for i, m in enumerate(getattr(assignment, "entries", assignment))}
    ctxs = {m.ctx for m in assign.values()}
    if len(ctxs) > 1:
        raise ContextError("substitution values live in different contexts")
    target = ctxs.pop() if ctxs else VarContext(0, f.ctx.symbols)
    zmap = [target.symbol_index(s) for s in f.ctx.symbols]
    parts = {i: _monomial_parts(m) for i, m in assign.items()}
    out: dict = {}
    for (qe, xe, ze), c in f.items():
        coeff = c
        q_total = qe
        x_total = [0] * target.n
        z_total = [0] * len(target.symbols)
        for j, e in zip(zmap, ze):
            z_total[j] += e
        for i, e in enumerate(xe, start=1):
            if not e:
                continue
            if i not in parts:
                raise IncompleteAssignmentError(f"X{i} has no assigned value")
            mc, mq, mx, mz = parts[i]
            coeff *= mc ** e
            q_total += mq * e
            for j, v in enumerate(mx):
                x_total[j] += v * e
            for j, v in enumerate(mz):
                z_total[j] += v * e
        k = (q_total, tuple(x_total), tuple(z_total))
        out[k] = out.get(k, 0) + coeff
    return LaurentPoly(target, out)


def is_symmetric(f: LaurentPoly, blocks: Sequence[int]) -> bool:
    """Invariance under adjacent transpositions inside each block."""
    blocks = list(getattr(blocks, "parts", blocks))
    if sum(blocks) != f.ctx.n:
        raise ContextError(f"blocks {blocks} do not sum to n={f.ctx.n}")
    start = 0
    for b in blocks:
        for i in range(start + 1, start + b):
            img = list(range(1, f.ctx.n + 1))
            img[i - 1], img[i] = img[i], img[i - 1]
            if permute_vars(f, img) != f:
                return False
        start += b
    return True


# canonical text ----------------------------------------------------------

def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def _sort_key(key):
    qe, xe, ze = key
    return (qe, tuple(-e for e in xe), tuple(-e for e in ze))


def canonical_string(f: LaurentPoly) -> str:
    """Deterministic text form.

    Terms are ordered by increasing q-exponent, then with X1 (and then the
    declared symbols) as the leading variables of a lexicographic order, so
    X1 comes before X2.  Zero exponents are omitted; a nonzero exponent is
    always written, e.g. ``q^(1/2)*X1^1 - 2*X2^-1*z^3``.
    """
    if f.is_zero():
        return "0"
    pieces = []
    for key in sorted(f._terms, key=_sort_key):
        c = f._terms[key]
        qe, xe, ze = key
        factors = []
        if qe:
            factors.append(f"q^{_fmt_exp(qe)}")
        factors += [f"X{i}^{e}" for i, e in enumerate(xe, start=1) if e]
        factors += [f"{s}^{e}" for s, e in zip(f.ctx.symbols, ze) if e]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        astr = str(a.numerator) if a.denominator == 1 else f"({a.numerator}/{a.denominator})"
        if not factors:
            body = astr
        elif a == 1:
            body = "*".join(factors)
        else:
            body = astr + "*" + "*".join(factors)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TERM_SPLIT = re.compile(r" ([+-]) ")
_FACTOR_RE = re.compile(r"^(q|X\d+|[A-Za-z][A-Za-z0-9_]*)\^(-?\d+|\((-?\d+)/(\d+)\))$")
_COEFF_RE = re.compile(r"^(\d+|\((\d+)/(\d+)\))$")


def parse_canonical(text: str, ctx: VarContext) -> LaurentPoly:
    """Inverse of :func:`canonical_string` for a known context."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero(ctx)
    parts = _TERM_SPLIT.split(text)
    signed = [("+", parts[0])] + list(zip(parts[1::2], parts[2::2]))
    total = LaurentPoly.zero(ctx)
    for sign, body in signed:
        neg = sign == "-"
        if body.startswith("-"):
            neg, body = not neg, body[1:]
        coeff = Fraction(1)
        q = Fraction(0)
        x: dict[int, int] = {}
        z: dict[str, int] = {}
        for tok in body.split("*"):
            m = _COEFF_RE.match(tok)
            if m:
                coeff = Fraction(int(m.group(2)), int(m.group(3))) if m.group(2) else Fraction(int(m.group(1)))
                continue
            m = _FACTOR_RE.match(tok)
            if not m:
                raise UsageError(f"cannot parse factor {tok!r}")
            name, raw = m.group(1), m.group(2)
            e = Fraction(int(m.group(3)), int(m.group(4))) if m.group(3) else Fraction(int(raw))
            if name == "q":
                q = e
            elif re.match(r"^X\d+$", name):
                x[int(name[1:])] = int(e)
            else:
                z[name] = int(e)
        total = total + LaurentPoly.monomial(ctx, -coeff if neg else coeff, q, x, z)
    return total


def evaluate_numeric(f: LaurentPoly, q: float, symbols: Mapping[str, complex] | None = None) -> complex:
    """Float evaluation at a numeric q (X variables must be absent)."""
    symbols = symbols or {}
    total = 0j
    for (qe, xe, ze), c in f.items():
        if any(xe):
            raise IncompleteAssignmentError("numeric evaluation needs X-free input")
        v = complex(float(c)) * q ** float(qe)
        for s, e in zip(f.ctx.symbols, ze):
            if e:
                if s not in symbols:
                    raise IncompleteAssignmentError(f"no numeric value for symbol {s}")
                v *= symbols[s] ** e
        total += v
    return total
