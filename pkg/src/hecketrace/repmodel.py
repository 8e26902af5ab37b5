"""Representation descriptors, Jacquet modules and the Speh expansion.

Every representation in scope is built from twisted Steinberg and trivial
blocks ``St_m(eps |.|^e)`` / ``1_m(eps |.|^e)``.  Twists are folded into a
:class:`CharSpec`: an optional symbol naming the unitary unramified ``eps``
(its value at a uniformizer) and a rational shift ``e``.

Canonical one-line forms::

    St(3;z;0)   Triv(2;-;1/2)   Speh(2,3;z;0)
    Ind[St(2;z1;0),St(2;z2;0)]  SSR(2;[2;z1;0],[1;z2;0])
"""
from __future__ import annotations

import itertools
import re
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError
from .polyring import LaurentPoly, VarContext, union_context
from .symcomb import Permutation, inversions, intersection_pieces, min_coset_reps, strict_parts

HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class CharSpec:
    symbol: str | None = None
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "shift", Fraction(self.shift))
        if self.symbol is not None:
            VarContext(0, (self.symbol,))

    def twisted(self, e) -> "CharSpec":
        return CharSpec(self.symbol, self.shift + Fraction(e))

    def text(self) -> str:
        return f"{self.symbol or '-'};{self.shift}"

    @property
    def symbols(self) -> tuple[str, ...]:
        return (self.symbol,) if self.symbol else ()


TRIVIAL_CHAR = CharSpec()


@dataclass(frozen=True, order=True)
class Twist:
    """``St_m(char)`` or ``1_m(char)``."""

    tag: str
    m: int
    char: CharSpec = TRIVIAL_CHAR

    def __post_init__(self):
        if self.tag not in ("St", "Triv"):
            raise DomainError(f"unknown block tag {self.tag!r}")
        if self.m < 1:
            raise DomainError(f"block size {self.m} must be positive")

    @property
    def n(self) -> int:
        return self.m

    def text(self) -> str:
        return f"{self.tag}({self.m};{self.char.text()})"


def Steinberg(m: int, char: CharSpec = TRIVIAL_CHAR) -> Twist:
    return Twist("St", m, char)


def Trivial(m: int, char: CharSpec = TRIVIAL_CHAR) -> Twist:
    return Twist("Triv", m, char)


@dataclass(frozen=True)
class Speh:
    x: int
    y: int
    char: CharSpec = TRIVIAL_CHAR

    def __post_init__(self):
        if self.x < 1 or self.y < 1:
            raise DomainError(f"Speh({self.x},{self.y}) needs x, y >= 1")

    @property
    def n(self) -> int:
        return self.x * self.y

    def text(self) -> str:
        return f"Speh({self.x},{self.y};{self.char.text()})"


@dataclass(frozen=True)
class StandardModule:
    """Normalized induction of a tensor product of twisted blocks."""

    blocks: tuple[Twist, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise DomainError("an induced representation needs at least one block")

    @property
    def n(self) -> int:
        return sum(b.m for b in self.blocks)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b.m for b in self.blocks)

    def text(self) -> str:
        return "Ind[" + ",".join(b.text() for b in self.blocks) + "]"


@dataclass(frozen=True)
class SemiStableRigid:
    """``Ind(Speh(x_1, y)(chi_1) (x) ... (x) Speh(x_k, y)(chi_k))``."""

    y: int
    factors: tuple[tuple[int, CharSpec], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(x), c) for x, c in self.factors))
        if self.y < 1 or not self.factors or any(x < 1 for x, _ in self.factors):
            raise DomainError("semi-stable rigid data needs y >= 1 and positive x_i")
        for _, c in self.factors:
            if not -HALF < c.shift < HALF:
                raise DomainError(f"twist exponent {c.shift} must lie in (-1/2, 1/2)")

    @property
    def n(self) -> int:
        return self.y * sum(x for x, _ in self.factors)

    def text(self) -> str:
        return f"SSR({self.y};" + ",".join(f"[{x};{c.text()}]" for x, c in self.factors) + ")"


RepDescriptor = Union[Twist, Speh, StandardModule, SemiStableRigid]


def rep_symbols(rep) -> tuple[str, ...]:
    if isinstance(rep, VirtualRep):
        return tuple(sorted({s for _, r in rep.terms for s in rep_symbols(r)}))
    if isinstance(rep, Twist) or isinstance(rep, Speh):
        return rep.char.symbols
    if isinstance(rep, StandardModule):
        return tuple(sorted({s for b in rep.blocks for s in b.char.symbols}))
    return tuple(sorted({s for _, c in rep.factors for s in c.symbols}))


# text parsing ------------------------------------------------------------------

_CHAR = r"([A-Za-z][A-Za-z0-9_]*|-);(-?\d+(?:/\d+)?)"
_TWIST_RE = re.compile(rf"^(St|Triv)\((\d+);{_CHAR}\)$")
_SPEH_RE = re.compile(rf"^Speh\((\d+),(\d+);{_CHAR}\)$")
_SSR_RE = re.compile(r"^SSR\((\d+);(.*)\)$")
_FACTOR_RE = re.compile(rf"^\[(\d+);{_CHAR}\]$")


def _char(sym: str, shift: str) -> CharSpec:
    return CharSpec(None if sym == "-" else sym, Fraction(shift))


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def parse_rep(text: str) -> RepDescriptor:
    text = text.strip().replace(" ", "")
    m = _TWIST_RE.match(text)
    if m:
        return Twist(m.group(1), int(m.group(2)), _char(m.group(3), m.group(4)))
    m = _SPEH_RE.match(text)
    if m:
        return Speh(int(m.group(1)), int(m.group(2)), _char(m.group(3), m.group(4)))
    if text.startswith("Ind[") and text.endswith("]"):
        blocks = []
        for piece in _split_top(text[4:-1]):
            b = parse_rep(piece)
            if not isinstance(b, Twist):
                raise DomainError(f"induced blocks must be St/Triv, got {piece!r}")
            blocks.append(b)
        return StandardModule(tuple(blocks))
    m = _SSR_RE.match(text)
    if m:
        factors = []
        for piece in _split_top(m.group(2)):
            fm = _FACTOR_RE.match(piece)
            if not fm:
                raise DomainError(f"cannot read semi-stable rigid factor {piece!r}")
            factors.append((int(fm.group(1)), _char(fm.group(2), fm.group(3))))
        return SemiStableRigid(int(m.group(1)), tuple(factors))
    raise DomainError(f"cannot parse representation {text!r}")


# virtual representations ----------------------------------------------------------

class VirtualRep:
    """Integer combination of descriptors, keyed by canonical text."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[int, RepDescriptor]] = ()):
        merged: OrderedDict = OrderedDict()
        for c, r in terms:
            key = r.text()
            old = merged.get(key, (0, r))[0]
            merged[key] = (old + c, r)
        self._terms = tuple((c, r) for c, r in merged.values() if c)

    @property
    def terms(self) -> tuple[tuple[int, RepDescriptor], ...]:
        return self._terms

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        return VirtualRep(self._terms + other._terms)

    def scale(self, c: int) -> "VirtualRep":
        return VirtualRep((c * a, r) for a, r in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirtualRep):
            return NotImplemented
        return dict((r.text(), c) for c, r in self._terms) == dict((r.text(), c) for c, r in other._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*{r.text()}" for c, r in self._terms)

    def __repr__(self) -> str:
        return f"VirtualRep({self.text()!r})"


def _product(a: VirtualRep, b: VirtualRep) -> VirtualRep:
    terms = []
    for ca, ra in a.terms:
        for cb, rb in b.terms:
            terms.append((ca * cb, StandardModule(_blocks(ra) + _blocks(rb))))
    return VirtualRep(terms)


def _blocks(rep) -> tuple[Twist, ...]:
    if isinstance(rep, Twist):
        return (rep,)
    if isinstance(rep, StandardModule):
        return rep.blocks
    raise DomainError(f"{rep.text()} is not a standard module")


# Hecke matrices -------------------------------------------------------------------

@dataclass(frozen=True)
class HeckeMatrix:
    entries: tuple[LaurentPoly, ...]

    def __post_init__(self):
        for e in self.entries:
            if not e.is_monomial():
                raise DomainError(f"Hecke matrix entry {e} is not a nonzero monomial")

    def __len__(self) -> int:
        return len(self.entries)


def hecke_matrix(chars: Sequence[CharSpec], ctx: VarContext | None = None) -> HeckeMatrix:
    """Entry ``i`` is ``q^(-e_i) * z_i`` for the coordinate character ``eps_i |.|^(e_i)``."""
    if ctx is None:
        ctx = union_context([VarContext(0, c.symbols) for c in chars], n=0)
    entries = []
    for c in chars:
        z = {c.symbol: 1} if c.symbol else {}
        entries.append(LaurentPoly.monomial(ctx, q=-c.shift, z=z))
    return HeckeMatrix(tuple(entries))


def modulus_half_shifts(parts: Sequence[int]) -> list[Fraction]:
    """Exponents of ``delta_P^(1/2)`` on each block: ``(sum after - sum before) / 2``."""
    total = sum(parts)
    out, before = [], 0
    for p in parts:
        after = total - before - p
        out.append(Fraction(after - before, 2))
        before += p
    return out


def torus_characters(block: Twist) -> list[CharSpec]:
    """Coordinate characters of ``delta_B^(1/2) * char`` on ``GL_m``."""
    return [block.char.twisted(e) for e in modulus_half_shifts([1] * block.m)]


def jacquet_twisted(tag: str, n: int, char: CharSpec, parabolic) -> tuple[Twist, ...]:
    """Normalized Jacquet module of ``St_n(char)`` or ``1_n(char)`` along ``P``.

    Steinberg restricts to ``St_M(delta_P^(1/2) char)``, the trivial
    representation to ``1_M(delta_P^(-1/2) char)``.
    """
    parts = strict_parts(parabolic, n)
    if tag not in ("St", "Triv"):
        raise DomainError(f"unknown block tag {tag!r}")
    sign = 1 if tag == "St" else -1
    return tuple(Twist(tag, p, char.twisted(sign * e)) for p, e in zip(parts, modulus_half_shifts(parts)))


# geometric lemma ------------------------------------------------------------------

@dataclass(frozen=True)
class GeometricTerm:
    w: Permutation
    inner: tuple[int, ...]  # composition of P_nu & w P_lam w^-1
    levi_blocks: tuple[tuple[Twist, ...], ...]  # per lam-block, the induced-from pieces

    def properly_induced_blocks(self) -> list[int]:
        return [i for i, pieces in enumerate(self.levi_blocks) if len(pieces) > 1]

    def text(self) -> str:
        body = " (x) ".join("Ind[" + ",".join(t.text() for t in pieces) + "]" for pieces in self.levi_blocks)
        return f"w={self.w.one_line()} inner={self.inner} : {body}"


def geometric_lemma_terms(nu, lam, sigma: Sequence[Twist]) -> list[GeometricTerm]:
    """Semi-simplified ``J_{N_lam}(Ind_{P_nu} sigma)``, one term per minimal ``w``."""
    lam_parts = strict_parts(getattr(lam, "blocks", lam))
    nu_parts = strict_parts(nu)
    sigma = tuple(sigma)
    if tuple(b.m for b in sigma) != nu_parts:
        raise DomainError(f"blocks {[b.text() for b in sigma]} do not match {nu_parts}")
    if sum(lam_parts) != sum(nu_parts):
        raise DomainError(f"shapes {nu_parts} and {lam_parts} have different sizes")
    terms = []
    for w in min_coset_reps(nu_parts, lam_parts):
        pieces = intersection_pieces(w, nu_parts, lam_parts)
        restricted = {}
        for j, block in enumerate(sigma):
            inside = [p for p in pieces if p.nu_block == j]
            parts = [p.size for p in inside]
            for p, t in zip(inside, jacquet_twisted(block.tag, block.m, block.char, parts)):
                restricted[p] = t
        levi = tuple(tuple(restricted[p] for p in pieces if p.lam_block == i) for i in range(len(lam_parts)))
        terms.append(GeometricTerm(w, tuple(p.size for p in pieces), levi))
    return terms


# Speh expansion -------------------------------------------------------------------

def speh_permutations(x: int, y: int) -> list[Permutation]:
    """``{w in S_y : w(i) + x >= i}``."""
    return [Permutation(p) for p in itertools.permutations(range(1, y + 1))
            if all(p[i - 1] + x >= i for i in range(1, y + 1))]


def speh_alternating_sum(x: int, y: int, char: CharSpec = TRIVIAL_CHAR) -> VirtualRep:
    """Determinantal expansion of ``Speh(x, y)(char)`` into standard modules.

    Block ``i`` of the term for ``w`` is ``St_{x+w(i)-i}`` with shift
    ``(x + w(i) + i)/2 - 1`` before the global ``|det|^(-(x+y-1)/2)``; empty
    blocks are dropped.
    """
    if x < 1 or y < 1:
        raise DomainError(f"Speh({x},{y}) needs x, y >= 1")
    terms = []
    for w in speh_permutations(x, y):
        blocks = []
        for i in range(1, y + 1):
            size = x + w(i) - i
            if size == 0:
                continue
            shift = Fraction(x + w(i) + i, 2) - 1 - Fraction(x + y - 1, 2)
            blocks.append(Twist("St", size, char.twisted(shift)))
        terms.append((-1 if inversions(w) % 2 else 1, StandardModule(tuple(blocks))))
    return VirtualRep(terms)


def speh_expand(x: int, y: int, char: CharSpec = TRIVIAL_CHAR) -> VirtualRep:
    """``Speh(x, y)(char)`` in the Grothendieck ring.

    ``Speh(1, y)`` is the twisted trivial representation of ``GL_y`` and is
    returned as that single descriptor; otherwise the alternating sum.
    """
    if x == 1:
        return VirtualRep([(1, Twist("Triv", y, char))])
    if y == 1:
        return VirtualRep([(1, Twist("St", x, char))])
    return speh_alternating_sum(x, y, char)


def expand(rep) -> VirtualRep:
    """Rewrite any descriptor as a combination of standard modules."""
    if isinstance(rep, VirtualRep):
        out = VirtualRep()
        for c, r in rep.terms:
            out = out + expand(r).scale(c)
        return out
    if isinstance(rep, Twist):
        return VirtualRep([(1, StandardModule((rep,)))])
    if isinstance(rep, StandardModule):
        return VirtualRep([(1, rep)])
    if isinstance(rep, Speh):
        return VirtualRep([(c, StandardModule(_blocks(r))) for c, r in speh_expand(rep.x, rep.y, rep.char).terms])
    if isinstance(rep, SemiStableRigid):
        total = None
        for x, c in rep.factors:
            piece = expand(Speh(x, rep.y, c))
            total = piece if total is None else _product(total, piece)
        return total
    raise DomainError(f"unknown representation {rep!r}")


# classification -------------------------------------------------------------------

def normalize(rep) -> RepDescriptor:
    """Collapse degenerate Speh / semi-stable rigid data to simpler descriptors."""
    if isinstance(rep, SemiStableRigid):
        if len(rep.factors) == 1:
            x, c = rep.factors[0]
            return normalize(Speh(x, rep.y, c))
        if rep.y == 1:
            return StandardModule(tuple(Twist("St", x, c) for x, c in rep.factors))
        if all(x == 1 for x, _ in rep.factors):
            return StandardModule(tuple(Twist("Triv", rep.y, c) for _, c in rep.factors))
        return rep
    if isinstance(rep, Speh):
        if rep.x == 1:
            return Twist("Triv", rep.y, rep.char)
        if rep.y == 1:
            return Twist("St", rep.x, rep.char)
        return rep
    if isinstance(rep, StandardModule) and len(rep.blocks) == 1:
        return rep.blocks[0]
    return rep


TYPE_I, TYPE_II, NEITHER = "TypeI", "TypeII", "Neither"


def is_two_block_type(rep, p1: int, p2: int) -> bool:
    """Induced from two same-tag blocks of sizes ``(p1, p2)`` with admissible twists."""
    rep = normalize(rep)
    if not isinstance(rep, StandardModule) or len(rep.blocks) != 2:
        return False
    a, b = rep.blocks
    if a.tag != b.tag or sorted((a.m, b.m)) != sorted((p1, p2)):
        return False
    e1, e2 = a.char.shift, b.char.shift
    if not (-HALF < e1 < HALF and -HALF < e2 < HALF):
        return False
    if p1 != p2:
        return e1 == 0 and e2 == 0
    return (e1 == 0 and e2 == 0) or (e1 + e2 == 0 and a.char.symbol == b.char.symbol)


def classify_type(rep, p1: int, p2: int) -> str:
    if p1 < 1 or p2 < 1:
        raise DomainError(f"({p1}, {p2}) is not a two-part composition")
    n = rep.n
    if p1 + p2 != n:
        raise DomainError(f"p1 + p2 = {p1 + p2} but the representation lives on GL_{n}")
    rep = normalize(rep)
    if is_two_block_type(rep, p1, p2):
        return TYPE_I
    if isinstance(rep, Twist) and rep.char.shift == 0:
        return TYPE_I
    if isinstance(rep, Speh) and rep.char.shift == 0 and n % 2 == 0:
        if (rep.x, rep.y) in ((n // 2, 2), (2, n // 2)):
            return TYPE_II
    return NEITHER


def regime(n: int, p1: int, p2: int) -> str:
    """Which list of representations can contribute for blocks ``(p1, p2)``."""
    if n % 2 == 0 and (p1, p2) in ((n // 2, n // 2), (n // 2 + 1, n // 2 - 1), (n // 2 - 1, n // 2 + 1)):
        return TYPE_II
    return TYPE_I


def allowed_in_regime(kind: str, reg: str) -> bool:
    if reg == TYPE_I:
        return kind == TYPE_I
    return kind in (TYPE_I, TYPE_II)
