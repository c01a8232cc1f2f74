"""Explicit rational folds of Q onto ``Y + Q``.

Q is cut at the golden ratio ``phi`` (irrational, so no rational sits on the
cut).  Rationals above ``phi`` go onto Q by a piecewise-linear bijection whose
breakpoints are the Fibonacci convergents of ``phi`` from above.  Rationals below
``phi`` are split into one region per summand of ``Y`` and each region is folded
onto its summand along a ladder of breakpoints.  Everything is exact rational
arithmetic, so evaluation cost does not depend on enumeration indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import ClassVar, Optional

from ..chains import (
    ChainExpr,
    Finite,
    Int,
    Nat,
    NatStar,
    Rat,
    Sum,
    Tagged,
    attributes,
    summand_locate,
    summand_place,
    summands,
)
from .programs import EndoProgram, ProgramError, _register

Q = Rat()
PHI = "phi"  # marker for the irrational upper end of the last region


def below_phi(q: Fraction) -> bool:
    return q < 0 or q * q < q + 1


@lru_cache(maxsize=4096)
def _fib_pair(n: int) -> tuple:
    """``(F(n), F(n+1))`` by fast doubling."""
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n & 1 else (c, d)


def _fib(n: int) -> int:
    return _fib_pair(n)[0]


def upper_conv(k: int) -> Fraction:
    """Convergents of phi from above: 2, 5/3, 13/8, ..."""
    return Fraction(_fib(2 * k + 3), _fib(2 * k + 2))


def lower_conv(k: int) -> Fraction:
    """Convergents of phi from below: 1, 3/2, 8/5, ..."""
    return Fraction(_fib(2 * k + 2), _fib(2 * k + 1))


def tail_embed(s: Fraction) -> Fraction:
    """Monotone bijection Q -> (phi, oo) on rationals."""
    s = Fraction(s)
    if s >= 0:
        return 2 + s
    k = ceil(-s) - 1  # s in [-k-1, -k)
    lo, hi = upper_conv(k + 1), upper_conv(k)
    return lo + (s + k + 1) * (hi - lo)


def tail_unembed(q: Fraction) -> Fraction:
    if q >= 2:
        return q - 2
    k = _last_at_most(lambda n: -upper_conv(n), -q)  # last k with upper_conv(k) >= q
    if upper_conv(k) == q:
        k -= 1
    lo, hi = upper_conv(k + 1), upper_conv(k)
    return -k - 1 + (q - lo) / (hi - lo)


def _last_at_most(f, q) -> int:
    """Largest ``n`` with ``f(n) <= q`` for increasing ``f`` with ``f(0) <= q``."""
    hi = 1
    while f(hi) <= q:
        hi *= 2
    lo = hi // 2 if hi > 1 else 0
    while hi - lo > 1:  # f(lo) <= q < f(hi)
        mid = (lo + hi) // 2
        if f(mid) <= q:
            lo = mid
        else:
            hi = mid
    return lo


# --------------------------------------------------------------------------
# one region per summand of Y


@dataclass(frozen=True)
class _Region:
    part: ChainExpr
    lo: Optional[Fraction]  # None means -oo
    lo_closed: bool
    hi: object  # Fraction or PHI
    hi_closed: bool

    @property
    def mid(self) -> Fraction:
        if self.lo is None:
            return Fraction(0) if self.hi == PHI else self.hi - 1
        if self.hi == PHI:
            return (self.lo + 1) / 2
        return (self.lo + self.hi) / 2

    def up(self, n: int) -> Fraction:
        """Increasing breakpoints from ``mid`` towards the upper end."""
        if n == 0:
            return self.mid
        if self.hi == PHI:
            return lower_conv(n - 1)
        return self.hi - (self.hi - self.mid) / (n + 1)

    def down(self, n: int) -> Fraction:
        """Decreasing breakpoints from ``mid`` towards the lower end."""
        if self.lo is None:
            return self.mid - n
        return self.lo + (self.mid - self.lo) / (n + 1)

    def up_index(self, q: Fraction) -> int:
        """Largest ``n`` with ``up(n) <= q``, for ``mid <= q`` below the upper end."""
        if self.hi == PHI:
            if q < 1:
                return 0
            return _last_at_most(lower_conv, q) + 1
        return floor((self.hi - self.mid) / (self.hi - q)) - 1

    def down_index(self, q: Fraction) -> int:
        """Smallest ``n >= 1`` with ``down(n) <= q``, for ``q < mid``."""
        if self.lo is None:
            return ceil(self.mid - q)
        return ceil((self.mid - self.lo) / (q - self.lo)) - 1

    def contains(self, q: Fraction) -> bool:
        if self.lo is not None and (q < self.lo or (q == self.lo and not self.lo_closed)):
            return False
        if self.hi == PHI:
            return below_phi(q)
        return q < self.hi or (q == self.hi and self.hi_closed)

    def fold(self, q: Fraction):
        p, m = self.part, self.mid
        if isinstance(p, (Finite, Nat)):
            if q < m:
                return 1
            if self.hi != PHI and q == self.hi:
                n = p.k if isinstance(p, Finite) else None
            else:
                n = self.up_index(q) + 1
            if n is None:
                raise ProgramError("N has no top point")
            return min(n, p.k) if isinstance(p, Finite) else n
        if isinstance(p, NatStar):
            return 1 if q >= m else self.down_index(q)
        if isinstance(p, Int):
            return self.up_index(q) if q >= m else -self.down_index(q)
        if isinstance(p, Rat):
            return self._unembed(q)
        raise ProgramError(f"no ladder fold onto {p!r}")

    def section(self, y) -> Fraction:
        p = self.part
        if isinstance(p, (Finite, Nat)):
            return self.up(y - 1)
        if isinstance(p, NatStar):
            return self.down(y)
        if isinstance(p, Int):
            return self.up(y) if y >= 0 else self.down(-y)
        if isinstance(p, Rat):
            return self._embed(Fraction(y))
        raise ProgramError(f"no ladder section for {p!r}")

    # Q-summands use an explicit bijection onto an open interval
    def _embed(self, s: Fraction) -> Fraction:
        lo, hi = self.lo, self.hi
        if hi == PHI:  # piecewise linear along the up ladder, which climbs to phi
            if s < 0:
                return self.mid + s if lo is None else lo + (self.mid - lo) / (1 - s)
            j = floor(s)
            return self.up(j) + (s - j) * (self.up(j + 1) - self.up(j))
        if lo is None:
            return hi - 1 + s if s <= 0 else hi - 1 / (1 + s)
        u = Fraction(1, 2) + s / (2 * (1 + abs(s)))
        return lo + (hi - lo) * u

    def _unembed(self, q: Fraction) -> Fraction:
        lo, hi = self.lo, self.hi
        if hi == PHI:
            m = self.mid
            if q < m:
                return q - m if lo is None else 1 - (m - lo) / (q - lo)
            j = self.up_index(q)
            return j + (q - self.up(j)) / (self.up(j + 1) - self.up(j))
        if lo is None:
            return q - hi + 1 if q <= hi - 1 else 1 / (hi - q) - 1
        u = (q - lo) / (hi - lo)
        if u >= Fraction(1, 2):
            return (2 * u - 1) / (2 - 2 * u)
        return (2 * u - 1) / (2 * u)


@lru_cache(maxsize=None)
def layout(Y: ChainExpr) -> tuple:
    """Regions of ``(-oo, phi)`` for the summands of ``Y``, bottom to top.

    Raises ``ProgramError`` when a summand or a boundary has no ladder form.
    """
    parts = summands(Y)
    t = len(parts)
    for p in parts:
        if not isinstance(p, (Finite, Nat, NatStar, Int, Rat)) or p == Finite(0):
            raise ProgramError(f"no ladder fold onto {p!r}")
    cuts = [None] + [Fraction(i - t + 1) for i in range(1, t)] + [PHI]
    owner = [None] * (t + 1)  # which side keeps each inner rational cut
    for i in range(1, t):
        if attributes(parts[i - 1]).has_max:
            owner[i] = i - 1
        elif attributes(parts[i]).has_min:
            owner[i] = i
        else:
            raise ProgramError("two adjacent summands meet without an endpoint")
    out = []
    for j, p in enumerate(parts):
        lo_closed = cuts[j] is not None and owner[j] == j
        hi_closed = j + 1 < t and owner[j + 1] == j
        if isinstance(p, Rat) and (lo_closed or hi_closed):
            raise ProgramError("a Q summand needs an open region")
        out.append(_Region(p, cuts[j], lo_closed, cuts[j + 1], hi_closed))
    return tuple(out)


def _region_of(regions, q):
    for j, r in enumerate(regions):
        if r.contains(q):
            return j, r
    raise ProgramError(f"{q} lies in no region")  # cannot happen below phi


@_register
@dataclass(frozen=True, eq=False)
class LadderFold(EndoProgram):
    """Q onto ``Y + Q``: below phi fold onto ``Y``, above phi onto Q."""

    Y: ChainExpr
    op: ClassVar[str] = "ladder_fold"

    def __post_init__(self):
        layout(self.Y)

    @property
    def source(self):
        return Q

    @property
    def target(self):
        return Sum(self.Y, Q)

    def _apply(self, q):
        q = Fraction(q)
        if not below_phi(q):
            return Tagged("R", tail_unembed(q))
        regions = layout(self.Y)
        j, r = _region_of(regions, q)
        leaf = r.fold(q)
        return Tagged("L", summand_place(summands(self.Y), j, leaf))


@_register
@dataclass(frozen=True, eq=False)
class LadderSection(EndoProgram):
    """``Y + Q`` into Q, a section of :class:`LadderFold`."""

    Y: ChainExpr
    op: ClassVar[str] = "ladder_section"

    def __post_init__(self):
        layout(self.Y)

    @property
    def source(self):
        return Sum(self.Y, Q)

    @property
    def target(self):
        return Q

    def _apply(self, x):
        if x.side == "R":
            return tail_embed(x.value)
        j, leaf = summand_locate(self.Y, x.value)
        return layout(self.Y)[j].section(leaf)
