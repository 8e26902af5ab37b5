"""Symmetric groups, compositions, double cosets and row semi-standard tableaux.

Permutations are stored in one-line notation: ``images[i-1] == w(i)``.
Products compose right to left, ``(v * w)(i) == v(w(i))``.

For compositions ``lam`` (shape) and ``nu`` (type) the base filling
``T^lam_nu`` labels the cells of the diagram of ``lam`` by 1..n in row-major
order and writes into cell ``k`` the index of the ``nu``-block containing
``k``.  A permutation acts by relabelling, ``(wT)(k) = T(w^{-1}(k))``, and
``w -> wT`` identifies the minimal representatives of
``S_lam \\ S_n / S_nu`` with the row semi-standard fillings of shape ``lam``
and content ``nu``.
"""
from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, SizeGuardError, UsageError


def max_bruteforce_n() -> int:
    return int(os.environ.get("HECKE_TRACE_MAX_N", "8"))


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise DomainError("cannot compose permutations of different sizes")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def one_line(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def __str__(self) -> str:
        return self.one_line()


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if not self.parts:
            raise DomainError("a composition needs at least one part")
        low = 1 if self.strict else 0
        if any(p < low for p in self.parts):
            kind = "positive" if self.strict else "nonnegative"
            raise DomainError(f"parts of {self.parts} must be {kind}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def intervals(self) -> list[range]:
        out, start = [], 1
        for p in self.parts:
            out.append(range(start, start + p))
            start += p
        return out


def parts_of(c) -> tuple[int, ...]:
    return tuple(getattr(c, "parts", c))


def strict_parts(c, n: int | None = None) -> tuple[int, ...]:
    p = parts_of(c)
    Composition(p)
    if n is not None and sum(p) != n:
        raise DomainError(f"composition {p} does not sum to {n}")
    return p


def block_intervals(parts: Sequence[int]) -> list[range]:
    return Composition(tuple(parts), strict=False).intervals()


# lengths -------------------------------------------------------------------

def inversions(w) -> int:
    img = getattr(w, "images", w)
    return sum(1 for i in range(len(img)) for j in range(i + 1, len(img)) if img[i] > img[j])


def cayley_lengths(n: int) -> dict[tuple[int, ...], int]:
    """Word length in adjacent transpositions, by breadth-first search."""
    start = tuple(range(1, n + 1))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(n - 1):
            # right multiplication by t_i swaps positions i, i+1
            v = list(w)
            v[i], v[i + 1] = v[i + 1], v[i]
            v = tuple(v)
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


# compositions ----------------------------------------------------------------

def _raw_compositions(n: int, k: int, low: int):
    if k == 1:
        if n >= low:
            yield (n,)
        return
    for first in range(low, n - low * (k - 1) + 1):
        for rest in _raw_compositions(n - first, k - 1, low):
            yield (first,) + rest


def chi_condition(svec: Sequence[int], blocks: Sequence[int], groups: Sequence[int]) -> bool:
    """Strictly decreasing slopes ``s_j / m_j`` inside each group of blocks."""
    pos = 0
    for g in groups:
        slopes = [Fraction(svec[j], blocks[j]) for j in range(pos, pos + g)]
        if any(a <= b for a, b in zip(slopes, slopes[1:])):
            return False
        pos += g
    return True


def chihat_condition(svec: Sequence[int], blocks: Sequence[int], total: int | None = None) -> bool:
    """Every proper prefix sum stays strictly below the average slope line."""
    total = sum(svec) if total is None else total
    size = sum(blocks)
    acc_s = acc_m = 0
    for b in range(len(svec) - 1):
        acc_s += svec[b]
        acc_m += blocks[b]
        if not Fraction(acc_s) < Fraction(total * acc_m, size):
            return False
    return True


CONSTRAINTS = ("chi", "chihat")


def enumerate_compositions(n: int, k: int, flavor: str = "extended",
                           constraint: str | None = None,
                           blocks: Sequence[int] | None = None,
                           groups: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """All compositions of ``n`` with ``k`` parts, ascending lexicographic.

    ``constraint="chi"`` keeps strictly decreasing slopes against ``blocks``
    within each run of ``groups`` (default: a single run);
    ``constraint="chihat"`` keeps the strict prefix inequality against
    ``blocks``.
    """
    if n < 0 or k < 1:
        raise DomainError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    if flavor not in ("strict", "extended"):
        raise UsageError(f"unknown flavor {flavor!r}")
    out = list(_raw_compositions(n, k, 1 if flavor == "strict" else 0))
    if constraint is None:
        return out
    if constraint not in CONSTRAINTS:
        raise UsageError(f"unknown constraint id {constraint!r}; expected one of {CONSTRAINTS}")
    if blocks is None or len(blocks) != k:
        raise UsageError(f"constraint {constraint!r} needs {k} block sizes")
    if constraint == "chi":
        groups = groups or (k,)
        if sum(groups) != k:
            raise UsageError(f"groups {groups} do not cover {k} blocks")
        return [c for c in out if chi_condition(c, blocks, groups)]
    return [c for c in out if chihat_condition(c, blocks, n)]


def strict_compositions(n: int) -> list[tuple[int, ...]]:
    return [c for k in range(1, n + 1) for c in _raw_compositions(n, k, 1)]


# double cosets ---------------------------------------------------------------

def _block_generators(parts: Sequence[int]) -> list[int]:
    gens, start = [], 0
    for p in parts:
        gens += list(range(start, start + p - 1))
        start += p
    return gens


def brute_double_cosets(lam, nu) -> list[frozenset]:
    """Partition S_n into ``S_lam g S_nu`` by exhaustive closure.

    Cosets are returned as frozensets of one-line tuples, sorted by their
    shortest element.
    """
    lam, nu = parts_of(lam), parts_of(nu)
    n = sum(lam)
    strict_parts(lam, n)
    strict_parts(nu, n)
    if n > max_bruteforce_n():
        raise SizeGuardError(f"brute force over S_{n} exceeds the cap {max_bruteforce_n()}")
    left = _block_generators(lam)
    right = _block_generators(nu)
    seen: set = set()
    cosets = []
    for g in itertools.permutations(range(1, n + 1)):
        if g in seen:
            continue
        orbit = {g}
        queue = [g]
        while queue:
            w = queue.pop()
            nbrs = []
            for i in right:  # w * t  (swap positions)
                v = list(w)
                v[i], v[i + 1] = v[i + 1], v[i]
                nbrs.append(tuple(v))
            for i in left:  # t * w  (swap values i+1, i+2)
                a, b = i + 1, i + 2
                nbrs.append(tuple(b if x == a else a if x == b else x for x in w))
            for v in nbrs:
                if v not in orbit:
                    orbit.add(v)
                    queue.append(v)
        seen |= orbit
        cosets.append(frozenset(orbit))
    cosets.sort(key=lambda c: min((inversions(w), w) for w in c))
    return cosets


def is_minimal_rep(w, lam, nu) -> bool:
    """Minimal in ``S_lam w S_nu``: increasing on nu-blocks, inverse increasing on lam-blocks."""
    w = w if isinstance(w, Permutation) else Permutation(tuple(w))
    winv = w.inverse()
    for block, perm in ((parts_of(nu), w), (parts_of(lam), winv)):
        for iv in block_intervals(block):
            vals = [perm(i) for i in iv]
            if vals != sorted(vals):
                return False
    return True


# tableaux --------------------------------------------------------------------

@dataclass(frozen=True)
class RowTableau:
    shape: tuple[int, ...]
    typ: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if tuple(len(r) for r in self.rows) != self.shape:
            raise DomainError(f"rows {self.rows} do not match shape {self.shape}")
        flat = [v for r in self.rows for v in r]
        for v, m in enumerate(self.typ, start=1):
            if flat.count(v) != m:
                raise DomainError(f"value {v} must appear {m} times in {self.rows}")
        if len(flat) != sum(self.typ):
            raise DomainError(f"entries of {self.rows} outside 1..{len(self.typ)}")

    @property
    def entries(self) -> tuple[int, ...]:
        """Values by cell label 1..n (row-major)."""
        return tuple(v for r in self.rows for v in r)

    def is_row_semistandard(self) -> bool:
        return all(list(r) == sorted(r) for r in self.rows)

    def render(self) -> str:
        width = len(str(len(self.typ)))
        return "\n".join(" ".join(str(v).rjust(width) for v in r) for r in self.rows)


def _rows_from_entries(shape, entries) -> tuple[tuple[int, ...], ...]:
    rows, pos = [], 0
    for p in shape:
        rows.append(tuple(entries[pos:pos + p]))
        pos += p
    return tuple(rows)


def base_filling(lam, nu) -> RowTableau:
    lam, nu = parts_of(lam), parts_of(nu)
    entries = [v for v, m in enumerate(nu, start=1) for _ in range(m)]
    return RowTableau(lam, nu, _rows_from_entries(lam, entries))


def tableau_from_perm(w, lam, nu) -> RowTableau:
    """``w T^lam_nu``, i.e. the filling ``k -> T(w^{-1}(k))``."""
    w = w if isinstance(w, Permutation) else Permutation(tuple(w))
    lam, nu = strict_parts(lam), strict_parts(nu)
    if sum(lam) != w.n or sum(nu) != w.n:
        raise DomainError(f"shape {lam} / type {nu} do not match S_{w.n}")
    base = base_filling(lam, nu).entries
    winv = w.inverse()
    entries = [base[winv(k) - 1] for k in range(1, w.n + 1)]
    return RowTableau(lam, nu, _rows_from_entries(lam, entries))


def perm_from_tableau(t: RowTableau) -> Permutation:
    """The unique minimal representative ``w`` with ``w T^shape_typ == t``."""
    if not t.is_row_semistandard():
        raise DomainError(f"tableau {t.rows} does not have weakly increasing rows")
    entries = t.entries
    n = len(entries)
    img = [0] * n
    for v, block in enumerate(block_intervals(t.typ), start=1):
        cells = [k for k in range(1, n + 1) if entries[k - 1] == v]
        for label, cell in zip(block, cells):
            img[label - 1] = cell
    return Permutation(tuple(img))


def _row_contents(shape, typ):
    """Row-by-row content matrices with row sums ``shape`` and column sums ``typ``."""
    def rec(i, remaining):
        if i == len(shape):
            if not any(remaining):
                yield ()
            return
        for row in _raw_row_counts(shape[i], remaining):
            rest = tuple(r - c for r, c in zip(remaining, row))
            for tail in rec(i + 1, rest):
                yield (row,) + tail
    return rec(0, tuple(typ))


def _raw_row_counts(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for c in range(min(total, caps[0]), -1, -1):
        for tail in _raw_row_counts(total - c, caps[1:]):
            yield (c,) + tail


def row_semistandard_tableaux(lam, nu) -> list[RowTableau]:
    """All row semi-standard fillings, ascending by row-major entry sequence."""
    lam, nu = strict_parts(lam), strict_parts(nu)
    if sum(lam) != sum(nu):
        raise DomainError(f"shape {lam} and type {nu} have different sizes")
    out = []
    for matrix in _row_contents(lam, nu):
        rows = tuple(tuple(v for v, c in enumerate(row, start=1) for _ in range(c)) for row in matrix)
        out.append(RowTableau(lam, nu, rows))
    out.sort(key=lambda t: t.entries)
    return out


def min_coset_reps(lam, nu) -> list[Permutation]:
    """Minimal length representatives of ``S_lam \\ S_n / S_nu`` via tableaux."""
    return [perm_from_tableau(t) for t in row_semistandard_tableaux(lam, nu)]


def distinct_row_entries(t: RowTableau) -> tuple[int, ...]:
    return tuple(len(set(r)) for r in t.rows)


@dataclass(frozen=True)
class Piece:
    """One interval ``w(L_i) & D_j`` of the intersection parabolic."""

    start: int
    size: int
    lam_block: int  # index i of the lam-block L_i (0-based)
    nu_block: int  # index j of the nu-block D_j (0-based)


def intersection_pieces(w, nu, lam) -> list[Piece]:
    """Intervals of ``P_nu & w P_lam w^{-1}`` for ``w`` minimal in ``S_nu \\ S_n / S_lam``."""
    w = w if isinstance(w, Permutation) else Permutation(tuple(w))
    nu, lam = strict_parts(nu, w.n), strict_parts(lam, w.n)
    if not is_minimal_rep(w, nu, lam):
        raise DomainError(f"{w} is not a minimal representative for ({nu}, {lam}); "
                          "the intersection need not be standard")
    pieces = []
    for i, L in enumerate(block_intervals(lam)):
        image = {w(k) for k in L}
        for j, D in enumerate(block_intervals(nu)):
            common = sorted(image.intersection(D))
            if common:
                pieces.append(Piece(common[0], len(common), i, j))
    pieces.sort(key=lambda p: p.start)
    return pieces


def intersection_composition(w, nu, lam) -> tuple[int, ...]:
    return tuple(p.size for p in intersection_pieces(w, nu, lam))
