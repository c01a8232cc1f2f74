"""Helpers for the convex sets that preimage queries return.

Preimages may carry partial bounds (``Tagged(side, None)`` or ``(a, None)``)
meaning "a whole block is included".  Some programs need plain element
bounds; :func:`complete` rewrites partial bounds into element bounds when the
chain has the endpoints to do so.
"""
from __future__ import annotations

from ..chains import (
    LIMIT,
    ChainExpr,
    Interval,
    LexProd,
    Rev,
    Sum,
    Tagged,
    attributes,
    in_interval,
    least_in,
    max_element,
    min_element,
    predecessor,
    successor,
)


class Unsupported(Exception):
    """A structural query is not available for this program class."""


NOTHING = Interval.nothing()


class _NoExtreme:
    def __repr__(self):
        return "NO_EXTREME"


NO_EXTREME = _NoExtreme()

_START, _END = "start", "end"


def is_empty(e: ChainExpr, iv: Interval) -> bool:
    return iv.empty or least_in(e, iv) is None


def _partial(b) -> bool:
    if b is None:
        return True
    if isinstance(b, Tagged):
        return _partial(b.value)
    if isinstance(b, tuple):
        return b[1] is None or _partial(b[1])
    return False


def _edge(e, b, closed, lower: bool):
    """Element form of a bound: ``(elem, closed)`` or the start/end marker."""
    marker = _START if lower else _END
    if b is None:
        return marker
    if isinstance(e, Rev):
        return _swap(_edge(e.inner, b, closed, not lower))
    if isinstance(e, Sum):
        sub = e.left if b.side == "L" else e.right
        r = _edge(sub, b.value, closed, lower)
        if r != marker:
            return (Tagged(b.side, r[0]), r[1])
        # the bound sits at the outer edge of block ``b.side``
        if lower and b.side == "L" or not lower and b.side == "R":
            return marker
        return _block_edge(e, b.side, lower)
    if isinstance(e, LexProd):
        if b[1] is not None:
            r = _edge(e.right, b[1], closed, lower)
            if r != marker:
                return ((b[0], r[0]), r[1])
        return _prod_block_edge(e, b[0], lower)
    return (b, closed)


def _swap(r):
    if r == _START:
        return _END
    if r == _END:
        return _START
    return r


def _block_edge(e: Sum, side: str, lower: bool):
    # lower bound at the start of the right block, or upper bound at the end of the left block
    if lower:
        m = min_element(e.right)
        if m is not None:
            return (Tagged("R", m), True)
        if attributes(e.left).is_empty:
            return _START
        m = max_element(e.left)
        if m is not None:
            return (Tagged("L", m), False)
    else:
        m = max_element(e.left)
        if m is not None:
            return (Tagged("L", m), True)
        if attributes(e.right).is_empty:
            return _END
        m = min_element(e.right)
        if m is not None:
            return (Tagged("R", m), False)
    raise Unsupported("bound falls on a gap of the chain")


def _prod_block_edge(e: LexProd, a, lower: bool):
    if lower:
        m = min_element(e.right)
        if m is not None:
            return ((a, m), True)
        p = predecessor(e.left, a)
        mb = max_element(e.right)
        if p is None:
            return _START
        if p is not LIMIT and mb is not None:
            return ((p, mb), False)
    else:
        m = max_element(e.right)
        if m is not None:
            return ((a, m), True)
        s = successor(e.left, a)
        mb = min_element(e.right)
        if s is None:
            return _END
        if s is not LIMIT and mb is not None:
            return ((s, mb), False)
    raise Unsupported("bound falls on a gap of the chain")


def complete(e: ChainExpr, iv: Interval) -> Interval:
    """Equivalent interval whose bounds are elements or ``None``."""
    if iv.empty:
        return iv
    lo, lc, hi, hc = iv.lo, iv.lo_closed, iv.hi, iv.hi_closed
    if lo is not None and _partial(lo):
        r = _edge(e, lo, lc, True)
        lo, lc = (None, False) if r == _START else r
    if hi is not None and _partial(hi):
        r = _edge(e, hi, hc, False)
        hi, hc = (None, False) if r == _END else r
    return Interval(lo, lc, hi, hc)


def tag(side: str, iv: Interval) -> Interval:
    """Place an interval of one summand inside the sum (partial at open ends)."""
    lo = Tagged(side, iv.lo) if iv.lo is not None or side == "R" else None
    hi = Tagged(side, iv.hi) if iv.hi is not None or side == "L" else None
    return Interval(lo, iv.lo_closed, hi, iv.hi_closed)


def restrict(iv: Interval, side: str) -> Interval:
    """The part of a sum interval lying in one summand, as an interval there."""
    if iv.empty:
        return NOTHING
    lo, lc, hi, hc = iv.lo, iv.lo_closed, iv.hi, iv.hi_closed
    if lo is not None:
        if lo.side == side:
            lo = lo.value
        elif lo.side < side:
            lo, lc = None, False
        else:
            return NOTHING
    if hi is not None:
        if hi.side == side:
            hi = hi.value
        elif hi.side > side:
            hi, hc = None, False
        else:
            return NOTHING
    return Interval(lo, lc, hi, hc)


def union_in_sum(left: ChainExpr, right: ChainExpr, il: Interval, ir: Interval) -> Interval:
    """Convex union of a left-summand interval and a right-summand interval."""
    el, er = is_empty(left, il), is_empty(right, ir)
    if el and er:
        return NOTHING
    if er:
        return tag("L", il)
    if el:
        return tag("R", ir)
    a, b = tag("L", il), tag("R", ir)
    return Interval(a.lo, a.lo_closed, b.hi, b.hi_closed)


def extreme(e: ChainExpr, iv: Interval, top: bool):
    """Maximum (``top``) or minimum of ``iv``: an element, ``None`` if empty, or ``NO_EXTREME``."""
    if is_empty(e, iv):
        return None
    iv = complete(e, iv)
    b, closed = (iv.hi, iv.hi_closed) if top else (iv.lo, iv.lo_closed)
    if b is None:
        cand = max_element(e) if top else min_element(e)
    elif closed:
        cand = b
    else:
        cand = predecessor(e, b) if top else successor(e, b)
        if cand is LIMIT:
            return NO_EXTREME
    if cand is None:
        return NO_EXTREME
    return cand if in_interval(e, iv, cand) else None
