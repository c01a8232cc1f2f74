"""Symbolic chain terms, their elements and structural attributes.

A chain term is built from primitives (finite chains, N, N*, Z, Q, R), binary
sums, lexicographic products and reversal.  Elements of countable, R-free
terms are concrete Python values:

* ``Finite``, ``Nat``, ``NatStar``, ``Int``: ``int`` (``NatStar`` compares
  its carrier integers in reverse);
* ``Rat``: ``fractions.Fraction``;
* ``Sum``: ``Tagged(side, value)`` with ``side`` in ``{"L", "R"}``;
* ``LexProd``: a pair ``(first, second)``;
* ``Rev``: an element of the inner term (the order is reversed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union


class ChainError(ValueError):
    """Raised for shape mismatches and unsupported element operations."""


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Finite:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 0:
            raise ChainError(f"Finite requires a non-negative integer, got {self.k!r}")


@dataclass(frozen=True)
class Nat:
    pass


@dataclass(frozen=True)
class NatStar:
    pass


@dataclass(frozen=True)
class Int:
    pass


@dataclass(frozen=True)
class Rat:
    pass


@dataclass(frozen=True)
class Real:
    pass


@dataclass(frozen=True)
class Sum:
    left: "ChainExpr"
    right: "ChainExpr"


@dataclass(frozen=True)
class LexProd:
    left: "ChainExpr"
    right: "ChainExpr"


@dataclass(frozen=True)
class Rev:
    inner: "ChainExpr"


ChainExpr = Union[Finite, Nat, NatStar, Int, Rat, Real, Sum, LexProd, Rev]

N = Nat()
NSTAR = NatStar()
Z = Int()
Q = Rat()
R = Real()
EMPTY = Finite(0)
ONE = Finite(1)


def chain_sum(*parts: ChainExpr) -> ChainExpr:
    """Right-nested sum of ``parts`` (``EMPTY`` for no parts)."""
    if not parts:
        return EMPTY
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Sum(p, out)
    return out


@dataclass(frozen=True)
class Tagged:
    """Element of a sum: ``side`` is ``"L"`` or ``"R"``."""

    side: str
    value: object

    def __repr__(self):
        return f"{self.side}:{self.value!r}"


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def contains_real(e: ChainExpr) -> bool:
    if isinstance(e, Real):
        return True
    if isinstance(e, (Sum, LexProd)):
        return contains_real(e.left) or contains_real(e.right)
    if isinstance(e, Rev):
        return contains_real(e.inner)
    return False


# --------------------------------------------------------------------------
# normalisation


def _push_rev(e: ChainExpr, flip: bool) -> ChainExpr:
    if isinstance(e, Rev):
        return _push_rev(e.inner, not flip)
    if isinstance(e, Sum):
        if flip:
            return Sum(_push_rev(e.right, True), _push_rev(e.left, True))
        return Sum(_push_rev(e.left, False), _push_rev(e.right, False))
    if isinstance(e, LexProd):
        return LexProd(_push_rev(e.left, flip), _push_rev(e.right, flip))
    if flip and isinstance(e, Nat):
        return NSTAR
    if flip and isinstance(e, NatStar):
        return N
    return e


def summands(e: ChainExpr) -> list:
    """Summands of a right-nested sum (a non-sum term is its own summand)."""
    out = []
    while isinstance(e, Sum):
        out.append(e.left)
        e = e.right
    out.append(e)
    return out


def _merge_summands(parts: list) -> list:
    out = []
    for p in parts:
        if isinstance(p, Finite):
            if p.k == 0:
                continue
            if out and isinstance(out[-1], Finite):
                out[-1] = Finite(out[-1].k + p.k)
                continue
        out.append(p)
    return out


def _norm(e: ChainExpr) -> ChainExpr:
    if isinstance(e, Sum):
        parts = summands(_norm(e.left)) + summands(_norm(e.right))
        return chain_sum(*_merge_summands(parts))
    if isinstance(e, LexProd):
        a, b = _norm(e.left), _norm(e.right)
        if a == EMPTY or b == EMPTY:
            return EMPTY
        if a == ONE:
            return b
        if b == ONE:
            return a
        if isinstance(a, Finite) and isinstance(b, Finite):
            return Finite(a.k * b.k)
        return LexProd(a, b)
    return e


@lru_cache(maxsize=4096)
def normalize(e: ChainExpr) -> ChainExpr:
    """Rev-free, right-nested term denoting a chain isomorphic to ``e``."""
    return _norm(_push_rev(e, False))


def is_normalized(e: ChainExpr) -> bool:
    return normalize(e) == e


# --------------------------------------------------------------------------
# attributes


@dataclass(frozen=True)
class Attributes:
    is_empty: bool
    cardinality: Union[int, str]  # int for finite, "countable" or "uncountable"
    has_min: bool
    has_max: bool
    is_well_ordered: bool
    is_scattered: bool
    has_gap: str  # "yes" | "no" | "unknown"

    @property
    def is_finite(self) -> bool:
        return isinstance(self.cardinality, int)

    @property
    def is_countable(self) -> bool:
        return self.cardinality != "uncountable"


def _card_add(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if "uncountable" in (a, b):
        return "uncountable"
    return "countable"


def _card_mul(a, b):
    if a == 0 or b == 0:
        return 0
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    if "uncountable" in (a, b):
        return "uncountable"
    return "countable"


_PRIMITIVE_ATTRS = {
    Nat: Attributes(False, "countable", True, False, True, True, "no"),
    NatStar: Attributes(False, "countable", False, True, False, True, "no"),
    Int: Attributes(False, "countable", False, False, False, True, "no"),
    Rat: Attributes(False, "countable", False, False, False, False, "yes"),
    Real: Attributes(False, "uncountable", False, False, False, False, "no"),
}


@lru_cache(maxsize=4096)
def attributes(e: ChainExpr) -> Attributes:
    if isinstance(e, Finite):
        return Attributes(e.k == 0, e.k, e.k > 0, e.k > 0, True, True, "no")
    if type(e) in _PRIMITIVE_ATTRS:
        return _PRIMITIVE_ATTRS[type(e)]
    if isinstance(e, Rev):
        return attributes(normalize(e))
    a, b = attributes(e.left), attributes(e.right)
    if isinstance(e, Sum):
        if "yes" in (a.has_gap, b.has_gap):
            gap = "yes"
        elif not a.is_empty and not b.is_empty and not a.has_max and not b.has_min:
            gap = "yes"
        elif "unknown" in (a.has_gap, b.has_gap):
            gap = "unknown"
        else:
            gap = "no"
        return Attributes(
            is_empty=a.is_empty and b.is_empty,
            cardinality=_card_add(a.cardinality, b.cardinality),
            has_min=a.has_min or (a.is_empty and b.has_min),
            has_max=b.has_max or (b.is_empty and a.has_max),
            is_well_ordered=a.is_well_ordered and b.is_well_ordered,
            is_scattered=a.is_scattered and b.is_scattered,
            has_gap=gap,
        )
    if isinstance(e, LexProd):
        if a.is_empty or b.is_empty:
            return attributes(EMPTY)
        return Attributes(
            is_empty=False,
            cardinality=_card_mul(a.cardinality, b.cardinality),
            has_min=a.has_min and b.has_min,
            has_max=a.has_max and b.has_max,
            is_well_ordered=a.is_well_ordered and b.is_well_ordered,
            is_scattered=a.is_scattered and b.is_scattered,
            has_gap="unknown",
        )
    raise ChainError(f"not a chain term: {e!r}")


def dense_without_endpoints(e: ChainExpr) -> bool:
    """True when ``e`` is nonempty, densely ordered and has no endpoints."""
    if isinstance(e, (Rat, Real)):
        return True
    if isinstance(e, Rev):
        return dense_without_endpoints(e.inner)
    if isinstance(e, Sum):
        a, b = attributes(e.left), attributes(e.right)
        if a.is_empty:
            return dense_without_endpoints(e.right)
        if b.is_empty:
            return dense_without_endpoints(e.left)
        return dense_without_endpoints(e.left) and dense_without_endpoints(e.right)
    if isinstance(e, LexProd):
        if attributes(e.left).is_empty:
            return False
        if e.right == ONE:
            return dense_without_endpoints(e.left)
        return dense_without_endpoints(e.right)
    return False


# --------------------------------------------------------------------------
# elements and comparison


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def check_element(e: ChainExpr, x) -> None:
    """Raise ``ChainError`` unless ``x`` is an element of ``e``."""
    if isinstance(e, Finite):
        if not (_is_int(x) and 1 <= x <= e.k):
            raise ChainError(f"{x!r} is not an element of Finite({e.k})")
    elif isinstance(e, (Nat, NatStar)):
        if not (_is_int(x) and x >= 1):
            raise ChainError(f"{x!r} is not an element of {type(e).__name__}")
    elif isinstance(e, Int):
        if not _is_int(x):
            raise ChainError(f"{x!r} is not an integer")
    elif isinstance(e, Rat):
        if not (isinstance(x, Fraction) or _is_int(x)):
            raise ChainError(f"{x!r} is not a rational")
    elif isinstance(e, Real):
        raise ChainError("R has no constructible elements")
    elif isinstance(e, Sum):
        if not isinstance(x, Tagged) or x.side not in ("L", "R"):
            raise ChainError(f"{x!r} is not an element of a sum")
        check_element(e.left if x.side == "L" else e.right, x.value)
    elif isinstance(e, LexProd):
        if not (isinstance(x, tuple) and len(x) == 2):
            raise ChainError(f"{x!r} is not a pair")
        check_element(e.left, x[0])
        check_element(e.right, x[1])
    elif isinstance(e, Rev):
        check_element(e.inner, x)
    else:
        raise ChainError(f"not a chain term: {e!r}")


def is_element(e: ChainExpr, x) -> bool:
    try:
        check_element(e, x)
    except ChainError:
        return False
    return True


def cmp(e: ChainExpr, x, y) -> int:
    """Unchecked three-way comparison: -1, 0 or 1."""
    while True:
        if isinstance(e, Sum):
            if x.side != y.side:
                return -1 if x.side == "L" else 1
            e = e.left if x.side == "L" else e.right
            x, y = x.value, y.value
        elif isinstance(e, LexProd):
            c = cmp(e.left, x[0], y[0])
            if c:
                return c
            e, x, y = e.right, x[1], y[1]
        elif isinstance(e, Rev):
            e, x, y = e.inner, y, x
        elif isinstance(e, NatStar):
            return (x < y) - (x > y)
        elif isinstance(e, Real):
            raise ChainError("R has no constructible elements")
        else:
            return (x > y) - (x < y)


def compare(e: ChainExpr, x, y) -> Ordering:
    check_element(e, x)
    check_element(e, y)
    return Ordering(cmp(e, x, y))


# --------------------------------------------------------------------------
# canonical enumeration


def size(e: ChainExpr) -> Optional[int]:
    """Number of elements, or ``None`` when infinite."""
    card = attributes(e).cardinality
    return card if isinstance(card, int) else None


def _require_countable(e: ChainExpr) -> None:
    if contains_real(e):
        raise ChainError("chains containing R cannot be enumerated")


def calkin_wilf(n: int) -> Fraction:
    """The ``n``-th term (1-based) of the Calkin-Wilf sequence."""
    a, b = 1, 1
    for bit in bin(n)[3:]:
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


def calkin_wilf_index(q: Fraction) -> int:
    """Inverse of :func:`calkin_wilf` for a positive rational."""
    a, b = q.numerator, q.denominator
    runs = []  # (bit, count), from the leaf up
    while (a, b) != (1, 1):
        if a < b:
            k = (b - 1) // a
            runs.append(("0", k))
            b -= k * a
        else:
            k = (a - 1) // b
            runs.append(("1", k))
            a -= k * b
    n = 1
    for bit, k in reversed(runs):
        n = (n << k) | (((1 << k) - 1) if bit == "1" else 0)
    return n


def _sum_layout(sa, sb):
    """Interleave bound ``m`` and which side owns the tail (``None`` = both infinite)."""
    if sa is None and sb is None:
        return None, None
    if sa is None:
        return sb, "L"
    if sb is None:
        return sa, "R"
    return min(sa, sb), ("L" if sa > sb else "R")


def _pair_index(ia: int, ib: int, sa, sb) -> int:
    if sb is not None:
        return ia * sb + ib
    if sa is not None:
        return ib * sa + ia
    s = ia + ib
    return s * (s + 1) // 2 + ib


def _unpair(i: int, sa, sb):
    if sb is not None:
        return divmod(i, sb)
    if sa is not None:
        q, r = divmod(i, sa)
        return r, q
    w = (math.isqrt(8 * i + 1) - 1) // 2
    ib = i - w * (w + 1) // 2
    return w - ib, ib


def enumerate_element(e: ChainExpr, i: int):
    """Element with canonical index ``i``."""
    _require_countable(e)
    if i < 0:
        raise IndexError(i)
    n = size(e)
    if n is not None and i >= n:
        raise IndexError(f"index {i} out of range for a chain of size {n}")
    return _enum(e, i)


def _enum(e, i):
    if isinstance(e, (Finite, Nat, NatStar)):
        return i + 1
    if isinstance(e, Int):
        return (i + 1) // 2 if i % 2 else -(i // 2)
    if isinstance(e, Rat):
        if i == 0:
            return Fraction(0)
        if i % 2:
            return calkin_wilf((i + 1) // 2)
        return -calkin_wilf(i // 2)
    if isinstance(e, Rev):
        return _enum(e.inner, i)
    if isinstance(e, Sum):
        sa, sb = size(e.left), size(e.right)
        m, tail = _sum_layout(sa, sb)
        if m is None or i < 2 * m:
            side, j = ("L" if i % 2 == 0 else "R"), i // 2
        else:
            side, j = tail, i - m
        return Tagged(side, _enum(e.left if side == "L" else e.right, j))
    if isinstance(e, LexProd):
        ia, ib = _unpair(i, size(e.left), size(e.right))
        return (_enum(e.left, ia), _enum(e.right, ib))
    raise ChainError(f"cannot enumerate {e!r}")


def index_of(e: ChainExpr, x) -> int:
    """Canonical index of the element ``x`` (inverse of enumeration)."""
    _require_countable(e)
    check_element(e, x)
    return _index(e, x)


def _index(e, x) -> int:
    if isinstance(e, (Finite, Nat, NatStar)):
        return x - 1
    if isinstance(e, Int):
        return 2 * x - 1 if x > 0 else -2 * x
    if isinstance(e, Rat):
        q = Fraction(x)
        if q == 0:
            return 0
        if q > 0:
            return 2 * calkin_wilf_index(q) - 1
        return 2 * calkin_wilf_index(-q)
    if isinstance(e, Rev):
        return _index(e.inner, x)
    if isinstance(e, Sum):
        m, _ = _sum_layout(size(e.left), size(e.right))
        j = _index(e.left if x.side == "L" else e.right, x.value)
        if m is None or j < m:
            return 2 * j + (0 if x.side == "L" else 1)
        return m + j
    if isinstance(e, LexProd):
        return _pair_index(_index(e.left, x[0]), _index(e.right, x[1]),
                           size(e.left), size(e.right))
    raise ChainError(f"cannot index {e!r}")


# --------------------------------------------------------------------------
# endpoints, neighbours


def min_element(e: ChainExpr):
    """Minimum element of ``e`` or ``None``."""
    _require_countable(e)
    return _end(e, low=True)


def max_element(e: ChainExpr):
    _require_countable(e)
    return _end(e, low=False)


def _end(e, low: bool):
    if isinstance(e, Finite):
        if e.k == 0:
            return None
        return 1 if low else e.k
    if isinstance(e, Nat):
        return 1 if low else None
    if isinstance(e, NatStar):
        return None if low else 1
    if isinstance(e, (Int, Rat)):
        return None
    if isinstance(e, Rev):
        return _end(e.inner, not low)
    if isinstance(e, Sum):
        first, second = ("L", "R") if low else ("R", "L")
        part = e.left if first == "L" else e.right
        if not attributes(part).is_empty:
            v = _end(part, low)
            return None if v is None else Tagged(first, v)
        other = e.right if first == "L" else e.left
        v = _end(other, low)
        return None if v is None else Tagged(second, v)
    if isinstance(e, LexProd):
        a, b = _end(e.left, low), _end(e.right, low)
        if a is None or b is None:
            return None
        return (a, b)
    raise ChainError(f"not a chain term: {e!r}")


class _NoNeighbour:
    """Marker: the element is a limit point on that side (no neighbour)."""

    def __repr__(self):
        return "LIMIT"


LIMIT = _NoNeighbour()


def predecessor(e: ChainExpr, x):
    """Immediate predecessor of ``x``; ``None`` at the minimum; ``LIMIT`` if none exists otherwise."""
    return _neighbour(e, x, down=True)


def successor(e: ChainExpr, x):
    return _neighbour(e, x, down=False)


def _neighbour(e, x, down: bool):
    if isinstance(e, Finite):
        y = x - 1 if down else x + 1
        return y if 1 <= y <= e.k else None
    if isinstance(e, Nat):
        if down:
            return x - 1 if x > 1 else None
        return x + 1
    if isinstance(e, NatStar):
        if down:
            return x + 1
        return x - 1 if x > 1 else None
    if isinstance(e, Int):
        return x - 1 if down else x + 1
    if isinstance(e, Rat):
        return LIMIT
    if isinstance(e, Rev):
        return _neighbour(e.inner, x, not down)
    if isinstance(e, Sum):
        part = e.left if x.side == "L" else e.right
        y = _neighbour(part, x.value, down)
        if y is LIMIT:
            return LIMIT
        if y is not None:
            return Tagged(x.side, y)
        if down and x.side == "R":
            a = attributes(e.left)
            if a.is_empty:
                return None
            m = _end(e.left, low=False)
            return LIMIT if m is None else Tagged("L", m)
        if not down and x.side == "L":
            b = attributes(e.right)
            if b.is_empty:
                return None
            m = _end(e.right, low=True)
            return LIMIT if m is None else Tagged("R", m)
        return None
    if isinstance(e, LexProd):
        y = _neighbour(e.right, x[1], down)
        if y is LIMIT:
            return LIMIT
        if y is not None:
            return (x[0], y)
        a = _neighbour(e.left, x[0], down)
        if a is None or a is LIMIT:
            return a
        b = _end(e.right, low=not down)
        return LIMIT if b is None else (a, b)
    raise ChainError(f"no elements in {e!r}")


# --------------------------------------------------------------------------
# intervals and least-index search


@dataclass(frozen=True)
class Interval:
    """Convex subset of a chain.

    ``lo``/``hi`` are elements or ``None`` (unbounded).  Inside a sum a bound may
    be ``Tagged(side, None)``, meaning "the whole of that side"; likewise inside a
    product ``(a, None)`` means "the whole block of ``a``".
    """

    lo: object = None
    lo_closed: bool = False
    hi: object = None
    hi_closed: bool = False
    empty: bool = False

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, True, x, True)

    @classmethod
    def nothing(cls) -> "Interval":
        return cls(empty=True)


EVERYTHING = Interval()


def in_interval(e: ChainExpr, iv: Interval, x) -> bool:
    if iv.empty:
        return False
    if iv.lo is not None:
        c = _cmp_bound(e, x, iv.lo, lower=True)
        if c < 0 or (c == 0 and not iv.lo_closed):
            return False
    if iv.hi is not None:
        c = _cmp_bound(e, x, iv.hi, lower=False)
        if c > 0 or (c == 0 and not iv.hi_closed):
            return False
    return True


def _cmp_bound(e, x, b, lower: bool) -> int:
    """Compare element ``x`` with a (possibly partial) bound ``b``."""
    if b is None:
        return 1 if lower else -1
    if isinstance(e, Sum):
        if x.side != b.side:
            return -1 if x.side == "L" else 1
        return _cmp_bound(e.left if x.side == "L" else e.right, x.value, b.value, lower)
    if isinstance(e, LexProd):
        if b[1] is None:
            c = cmp(e.left, x[0], b[0])
            return c if c else (1 if lower else -1)
        c = cmp(e.left, x[0], b[0])
        return c if c else _cmp_bound(e.right, x[1], b[1], lower)
    if isinstance(e, Rev):
        return -_cmp_bound(e.inner, x, b, not lower)
    return cmp(e, x, b)


def least_in(e: ChainExpr, iv: Interval):
    """Element of least canonical index in ``iv``, or ``None`` if empty."""
    _require_countable(e)
    if iv.empty:
        return None
    r = _least(e, iv.lo, iv.lo_closed, iv.hi, iv.hi_closed)
    return None if r is None else r[1]


def _int_range(lo, lc, hi, hc, floor_lo=None, cap_hi=None):
    """Closed integer range from possibly open rational-free integer bounds."""
    a = None if lo is None else (lo if lc else lo + 1)
    b = None if hi is None else (hi if hc else hi - 1)
    if floor_lo is not None:
        a = floor_lo if a is None else max(a, floor_lo)
    if cap_hi is not None:
        b = cap_hi if b is None else min(b, cap_hi)
    return a, b


def _least(e, lo, lc, hi, hc):
    """Return ``(index, element)`` of least index in the interval or ``None``."""
    if isinstance(e, (Finite, Nat)):
        cap = e.k if isinstance(e, Finite) else None
        a, b = _int_range(lo, lc, hi, hc, floor_lo=1, cap_hi=cap)
        if b is not None and a > b:
            return None
        return a - 1, a
    if isinstance(e, NatStar):
        # chain order is reversed: lo has the larger carrier
        a, b = _int_range(hi, hc, lo, lc, floor_lo=1)
        if b is not None and a > b:
            return None
        return a - 1, a
    if isinstance(e, Int):
        a, b = _int_range(lo, lc, hi, hc)
        if a is not None and b is not None and a > b:
            return None
        if (a is None or a <= 0) and (b is None or b >= 0):
            x = 0
        elif a is not None and a > 0:
            x = a
        else:
            x = b
        return _index(e, x), x
    if isinstance(e, Rat):
        x = _least_rational(lo, lc, hi, hc)
        return None if x is None else (_index(e, x), x)
    if isinstance(e, Rev):
        r = _least(e.inner, hi, hc, lo, lc)
        return r
    if isinstance(e, Sum):
        return _least_sum(e, lo, lc, hi, hc)
    if isinstance(e, LexProd):
        return _least_prod(e, lo, lc, hi, hc)
    raise ChainError(f"cannot search {e!r}")


def _least_sum(e, lo, lc, hi, hc):
    sa, sb = size(e.left), size(e.right)
    m, _ = _sum_layout(sa, sb)
    best = None
    for side, part in (("L", e.left), ("R", e.right)):
        if attributes(part).is_empty:
            continue
        # lower bound restricted to this side
        if lo is None:
            plo, plc = None, False
        elif lo.side == side:
            plo, plc = lo.value, lc
        elif lo.side == "L":  # side == "R": unrestricted from below
            plo, plc = None, False
        else:
            continue
        if hi is None:
            phi, phc = None, False
        elif hi.side == side:
            phi, phc = hi.value, hc
        elif hi.side == "R":  # side == "L"
            phi, phc = None, False
        else:
            continue
        r = _least(part, plo, plc, phi, phc)
        if r is None:
            continue
        j, x = r
        idx = 2 * j + (0 if side == "L" else 1) if (m is None or j < m) else m + j
        if best is None or idx < best[0]:
            best = (idx, Tagged(side, x))
    return best


def _least_prod(e, lo, lc, hi, hc):
    A, B = e.left, e.right
    sa, sb = size(A), size(B)
    cands = []
    a1 = None if lo is None else lo[0]
    a2 = None if hi is None else hi[0]
    lo_whole = lo is not None and lo[1] is None  # lower bound includes the whole block
    hi_whole = hi is not None and hi[1] is None
    if a1 is not None and a2 is not None and cmp(A, a1, a2) > 0:
        return None
    if a1 is not None and a2 is not None and cmp(A, a1, a2) == 0:
        if lo_whole and hi_whole:
            r = _least(B, None, False, None, False)
        else:
            r = _least(B, None if lo_whole else lo[1], lc, None if hi_whole else hi[1], hc)
        if r is not None:
            cands.append((_pair_index(_index(A, a1), r[0], sa, sb), (a1, r[1])))
    else:
        ra = _least(A, a1, False, a2, False)
        if ra is not None:
            rb = _least(B, None, False, None, False)
            if rb is not None:
                cands.append((_pair_index(ra[0], rb[0], sa, sb), (ra[1], rb[1])))
        if a1 is not None:
            r = _least(B, None if lo_whole else lo[1], lc, None, False)
            if r is not None:
                cands.append((_pair_index(_index(A, a1), r[0], sa, sb), (a1, r[1])))
        if a2 is not None:
            r = _least(B, None, False, None if hi_whole else hi[1], hc)
            if r is not None:
                cands.append((_pair_index(_index(A, a2), r[0], sa, sb), (a2, r[1])))
    return min(cands, key=lambda c: c[0]) if cands else None


def _simplest_positive(lo, lc, hi, hc):
    """Positive rational of least Calkin-Wilf depth in the interval; bounds >= 0.

    Walks the continued fraction of the answer with integer arithmetic.
    """
    lo = Fraction(0) if lo is None else Fraction(lo)
    ln, ld = lo.numerator, lo.denominator
    hn, hd = (None, None) if hi is None else (Fraction(hi).numerator, Fraction(hi).denominator)
    terms = []
    while True:
        if ln == 0:
            lc = False
        fl = ln // ld
        n = fl if (lc and ln == fl * ld) else fl + 1
        if hn is None or n * hd < hn or (hc and n * hd == hn):
            terms.append(max(n, 1))
            break
        # no integer inside: the interval sits within (fl, fl + 1]; invert the fractional parts
        terms.append(fl)
        tn, td = ln - fl * ld, ld  # lo - fl
        un, ud = hn - fl * hd, hd  # hi - fl
        ln, ld, lc, hn, hd, hc = ud, un, hc, (None if tn == 0 else td), tn, lc
        if hn is None:
            hd = None
    p, q = 1, 0
    for t in reversed(terms):
        p, q = t * p + q, p
    return Fraction(p, q)


def _least_rational(lo, lc, hi, hc):
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and not (lc and hc)):
            return None
    above_zero = lo is None or lo < 0 or (lo == 0 and lc)
    below_zero = hi is None or hi > 0 or (hi == 0 and hc)
    if above_zero and below_zero:
        return Fraction(0)
    if lo is not None and lo >= 0:
        return _simplest_positive(lo, lc, hi, hc)
    # entirely negative: mirror
    return -_simplest_positive(-hi, hc, None if lo is None else -lo, lc)


# --------------------------------------------------------------------------
# element transport through normalisation


def _sum_locate(e, x):
    """Split an element of a right-nested sum into (summand index, leaf)."""
    i = 0
    while isinstance(e, Sum):
        if x.side == "L":
            return i, x.value
        e, x, i = e.right, x.value, i + 1
    return i, x


def _sum_place(parts, i, leaf):
    x = leaf
    last = len(parts) - 1
    if i < last:
        x = Tagged("L", x)
    for _ in range(i):
        x = Tagged("R", x)
    return x


def _merge_plan(parts):
    """Map each input summand index to (output index, offset)."""
    plan, out = [], []
    for p in parts:
        if isinstance(p, Finite):
            if p.k == 0:
                plan.append(None)
                continue
            if out and isinstance(out[-1], Finite):
                plan.append((len(out) - 1, out[-1].k))
                out[-1] = Finite(out[-1].k + p.k)
                continue
        plan.append((len(out), 0))
        out.append(p)
    return plan, out


def to_normal(e: ChainExpr, x):
    """Image of ``x`` under the canonical isomorphism ``e -> normalize(e)``."""
    return _to_norm(e, False, x)


def _to_norm(e, flip, x):
    if isinstance(e, Rev):
        return _to_norm(e.inner, not flip, x)
    if isinstance(e, (Nat, NatStar)):
        return x
    if isinstance(e, (Int, Rat)):
        return -x if flip else x
    if isinstance(e, Finite):
        return e.k + 1 - x if flip else x
    if isinstance(e, Sum):
        first, second = (e.right, e.left) if flip else (e.left, e.right)
        nf, ns = _norm(_push_rev(first, flip)), _norm(_push_rev(second, flip))
        pf, ps = summands(nf), summands(ns)
        on_first = (x.side == "R") if flip else (x.side == "L")
        sub = _to_norm(first if on_first else second, flip, x.value)
        if on_first:
            i, leaf = _sum_locate(nf, sub)
        else:
            i, leaf = _sum_locate(ns, sub)
            i += len(pf)
        plan, out = _merge_plan(pf + ps)
        j, off = plan[i]
        if isinstance(out[j], Finite):
            leaf = leaf + off
        return _sum_place(out, j, leaf)
    if isinstance(e, LexProd):
        a = _norm(_push_rev(e.left, flip))
        b = _norm(_push_rev(e.right, flip))
        xa = _to_norm(e.left, flip, x[0])
        xb = _to_norm(e.right, flip, x[1])
        if a == ONE:
            return xb
        if b == ONE:
            return xa
        if isinstance(a, Finite) and isinstance(b, Finite):
            return (xa - 1) * b.k + xb
        return (xa, xb)
    raise ChainError(f"no elements in {e!r}")


def from_normal(e: ChainExpr, y):
    """Inverse of :func:`to_normal`."""
    return _from_norm(e, False, y)


def _from_norm(e, flip, y):
    if isinstance(e, Rev):
        return _from_norm(e.inner, not flip, y)
    if isinstance(e, (Nat, NatStar)):
        return y
    if isinstance(e, (Int, Rat)):
        return -y if flip else y
    if isinstance(e, Finite):
        return e.k + 1 - y if flip else y
    if isinstance(e, Sum):
        first, second = (e.right, e.left) if flip else (e.left, e.right)
        nf, ns = _norm(_push_rev(first, flip)), _norm(_push_rev(second, flip))
        pf, ps = summands(nf), summands(ns)
        plan, out = _merge_plan(pf + ps)
        j, leaf = _sum_locate(chain_sum(*out), y)
        # find the input summand owning (j, leaf)
        for i, slot in enumerate(plan):
            if slot is None or slot[0] != j:
                continue
            part = (pf + ps)[i]
            off = slot[1]
            if isinstance(part, Finite) and not (off < leaf <= off + part.k):
                continue
            sub_leaf = leaf - off if isinstance(part, Finite) else leaf
            if i < len(pf):
                sub = _sum_place(pf, i, sub_leaf)
                orig = _from_norm(first, flip, sub)
                return Tagged("R" if flip else "L", orig)
            sub = _sum_place(ps, i - len(pf), sub_leaf)
            orig = _from_norm(second, flip, sub)
            return Tagged("L" if flip else "R", orig)
        raise ChainError(f"{y!r} is not an element of the normal form")
    if isinstance(e, LexProd):
        a = _norm(_push_rev(e.left, flip))
        b = _norm(_push_rev(e.right, flip))
        if a == ONE:
            ya, yb = 1, y
        elif b == ONE:
            ya, yb = y, 1
        elif isinstance(a, Finite) and isinstance(b, Finite):
            q, r = divmod(y - 1, b.k)
            ya, yb = q + 1, r + 1
        else:
            ya, yb = y
        return (_from_norm(e.left, flip, ya), _from_norm(e.right, flip, yb))
    raise ChainError(f"no elements in {e!r}")


def summand_locate(e: ChainExpr, x):
    """Public form of the (summand index, leaf) split for right-nested sums."""
    return _sum_locate(e, x)


def summand_place(parts: list, i: int, leaf):
    return _sum_place(parts, i, leaf)
