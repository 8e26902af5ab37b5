"""Spectrum files and the global trace aggregation.

A spectrum file is JSON with fields in this order::

    {"n": 4, "p1": 2, "p2": 2, "s": 2, "ker1": 1,
     "entries": [{"rep": "St(4;z;0)", "cpi": "1", "zeta": "0/1"}]}

``zeta`` is ``"k/m"`` for ``exp(2 pi i k/m)``.  The aggregate is
``ker1 * sum cpi * zeta^alpha * Tr(C_lambda f, rep)``; powers of zeta of
order above 2 stay symbolic as ``zeta_j_m``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import IO, Union

from .errors import DomainError, HeckeTraceError, SpectrumError, UnsupportedCaseError
from .heckeops import SlopeVector
from .polyring import LaurentPoly, VarContext
from .repmodel import RepDescriptor, allowed_in_regime, classify_type, parse_rep, regime, rep_symbols
from .traceengine import truncated_trace

HEADER_FIELDS = ("n", "p1", "p2", "s", "ker1", "entries")
ENTRY_FIELDS = ("rep", "cpi", "zeta")


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(2 pi i k/m)`` with ``0 <= k < m`` and ``gcd(k, m) = 1`` (``0/1`` is 1)."""

    k: int
    m: int

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.k < self.m:
            raise SpectrumError(f"root of unity {self.k}/{self.m} needs m >= 1 and 0 <= k < m")
        g = gcd(self.k, self.m)
        if g != 1:
            object.__setattr__(self, "k", self.k // g)
            object.__setattr__(self, "m", self.m // g)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        try:
            k, m = (int(t) for t in str(text).split("/"))
        except ValueError:
            raise SpectrumError(f"zeta must look like 'k/m', got {text!r}") from None
        return cls(k, m)

    def power(self, e: int) -> "RootOfUnity":
        return RootOfUnity((self.k * e) % self.m, self.m)

    @property
    def symbol(self) -> str | None:
        return None if self.m <= 2 else f"zeta_{self.k}_{self.m}"

    def as_poly(self, ctx: VarContext) -> LaurentPoly:
        if self.m == 1:
            return LaurentPoly.one(ctx)
        if self.m == 2:
            return LaurentPoly.const(-1, ctx)
        return LaurentPoly.symbol(self.symbol, ctx)

    def text(self) -> str:
        return f"{self.k}/{self.m}"


@dataclass(frozen=True)
class SpectrumEntry:
    rep: RepDescriptor
    cpi: Fraction
    zeta: RootOfUnity


@dataclass(frozen=True)
class SpectrumFile:
    n: int
    p1: int
    p2: int
    s: int
    ker1: int
    entries: tuple[SpectrumEntry, ...] = ()

    @property
    def regime(self) -> str:
        return regime(self.n, self.p1, self.p2)


def _int_field(obj: dict, name: str, where: str, minimum: int) -> int:
    v = obj[name]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise SpectrumError(f"{where}: field {name!r} must be an integer >= {minimum}, got {v!r}")
    return v


def _check_fields(obj, expected, where: str) -> None:
    if not isinstance(obj, dict):
        raise SpectrumError(f"{where}: expected an object")
    missing = [f for f in expected if f not in obj]
    extra = [f for f in obj if f not in expected]
    if missing or extra:
        raise SpectrumError(f"{where}: missing fields {missing}, unexpected fields {extra}")


def parse_spectrum(data: dict) -> SpectrumFile:
    _check_fields(data, HEADER_FIELDS, "header")
    n = _int_field(data, "n", "header", 1)
    p1 = _int_field(data, "p1", "header", 1)
    p2 = _int_field(data, "p2", "header", 1)
    s = _int_field(data, "s", "header", 1)
    ker1 = _int_field(data, "ker1", "header", 1)
    if p1 + p2 != n:
        raise SpectrumError(f"header: p1 + p2 = {p1 + p2} differs from n = {n}")
    if s >= n:
        raise SpectrumError(f"header: need 0 < s < n, got s = {s}")
    if not isinstance(data["entries"], list):
        raise SpectrumError("header: 'entries' must be a list")
    reg = regime(n, p1, p2)
    entries = []
    for idx, raw in enumerate(data["entries"]):
        where = f"entry {idx}"
        _check_fields(raw, ENTRY_FIELDS, where)
        try:
            rep = parse_rep(str(raw["rep"]))
            cpi = Fraction(str(raw["cpi"]))
        except (HeckeTraceError, ValueError, ZeroDivisionError) as exc:
            raise SpectrumError(f"{where}: {exc}") from None
        zeta = RootOfUnity.parse(raw["zeta"])
        if rep.n != n:
            raise SpectrumError(f"{where}: {rep.text()} lives on GL_{rep.n}, header says n = {n}")
        try:
            kind = classify_type(rep, p1, p2)
        except DomainError as exc:
            raise SpectrumError(f"{where}: {exc}") from None
        if not allowed_in_regime(kind, reg):
            listed = "type I" if reg == "TypeI" else "type I or type II"
            raise SpectrumError(f"{where}: {rep.text()} classifies as {kind}, but blocks ({p1}, {p2}) "
                                f"only admit the {listed} list")
        entries.append(SpectrumEntry(rep, cpi, zeta))
    return SpectrumFile(n, p1, p2, s, ker1, tuple(entries))


def load_spectrum(source: Union[str, bytes, IO]) -> SpectrumFile:
    """Read and validate a spectrum file from text, bytes or a stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SpectrumError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_spectrum(data)


def serialize(spec: SpectrumFile) -> str:
    obj = {
        "n": spec.n, "p1": spec.p1, "p2": spec.p2, "s": spec.s, "ker1": spec.ker1,
        "entries": [{"rep": e.rep.text(), "cpi": str(e.cpi), "zeta": e.zeta.text()} for e in spec.entries],
    }
    return json.dumps(obj, indent=2) + "\n"


def aggregate_context(alpha: int, spec: SpectrumFile) -> VarContext:
    names = set()
    for e in spec.entries:
        names.update(rep_symbols(e.rep))
        sym = e.zeta.power(alpha).symbol
        if sym:
            names.add(sym)
    return VarContext(0, tuple(sorted(names)))


def aggregate_trace(alpha: int, lam: SlopeVector, spec: SpectrumFile) -> LaurentPoly:
    if lam.blocks != (spec.p1, spec.p2) or lam.s != spec.s:
        raise DomainError(f"slope vector {lam.text()} does not match header blocks ({spec.p1}, {spec.p2}), s = {spec.s}")
    ctx = aggregate_context(alpha, spec)
    total = LaurentPoly.zero(ctx)
    for idx, e in enumerate(spec.entries):
        try:
            tr = truncated_trace(lam, alpha, spec.s, e.rep).value
        except UnsupportedCaseError as exc:
            raise UnsupportedCaseError(f"entry {idx}: {exc}") from None
        total = total + tr.with_context(ctx) * e.zeta.power(alpha).as_poly(ctx) * LaurentPoly.const(e.cpi, ctx)
    return total.scale(spec.ker1)
