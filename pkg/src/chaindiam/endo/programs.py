"""Executable order-preserving maps between countable term chains.

Every program has a ``source`` and ``target`` chain term and evaluates exactly
on elements.  Programs that can describe the preimage of an interval do so via
:meth:`EndoProgram.preimage`; the others raise :class:`Unsupported`.
Composition runs left to right: ``Compose(p, q)`` applies ``p`` first.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import ClassVar

from ..chains import (
    EVERYTHING,
    ChainError,
    ChainExpr,
    Finite,
    LIMIT,
    Interval,
    LexProd,
    Nat,
    Rev,
    Sum,
    Tagged,
    attributes,
    check_element,
    chain_sum,
    cmp,
    contains_real,
    dense_without_endpoints,
    enumerate_element,
    from_normal,
    in_interval,
    index_of,
    least_in,
    normalize,
    predecessor,
    successor,
    summand_locate,
    summand_place,
    summands,
    to_normal,
)
from .intervals import NOTHING, Unsupported, complete, restrict, union_in_sum

N = Nat()


class ProgramError(ValueError):
    pass


_REGISTRY: dict = {}
SEARCH_BUDGET = 100_000  # enumeration steps for preimage search fallbacks


def _register(cls):
    _REGISTRY[cls.op] = cls
    return cls


class EndoProgram:
    """Base class; subclasses set ``op`` and implement ``_apply``."""

    op: ClassVar[str] = ""
    source: ChainExpr
    target: ChainExpr

    def apply(self, x):
        check_element(self.source, x)
        return self._apply(x)

    __call__ = apply

    def _apply(self, x):
        raise NotImplementedError

    def preimage(self, iv: Interval) -> Interval:
        """Convex set of source elements mapped into ``iv``."""
        raise Unsupported(f"{self.op} has no structural preimage")

    def to_json(self) -> dict:
        from .serialize import program_to_json
        return program_to_json(self)


def _same(a: ChainExpr, b: ChainExpr, what: str):
    if a != b:
        raise ProgramError(f"{what}: {a!r} does not match {b!r}")


def _int_bounds(iv: Interval):
    """Closed integer range ``[a, b]`` of an interval on N or a finite chain (``b`` may be ``None``)."""
    a = 1 if iv.lo is None else (iv.lo if iv.lo_closed else iv.lo + 1)
    b = None if iv.hi is None else (iv.hi if iv.hi_closed else iv.hi - 1)
    return max(a, 1), b


def _closed(a, b) -> Interval:
    if b is not None and a > b:
        return NOTHING
    return Interval(a, True, b, b is not None)


# --------------------------------------------------------------------------
# basic maps


@_register
@dataclass(frozen=True, eq=False)
class Identity(EndoProgram):
    chain: ChainExpr
    op: ClassVar[str] = "identity"

    @property
    def source(self):
        return self.chain

    @property
    def target(self):
        return self.chain

    def _apply(self, x):
        return x

    def preimage(self, iv):
        return iv


@_register
@dataclass(frozen=True, eq=False)
class Const(EndoProgram):
    source: ChainExpr
    target: ChainExpr
    value: object
    op: ClassVar[str] = "const"

    def __post_init__(self):
        check_element(self.target, self.value)

    def _apply(self, x):
        return self.value

    def preimage(self, iv):
        return EVERYTHING if in_interval(self.target, iv, self.value) else NOTHING


@_register
@dataclass(frozen=True, eq=False)
class TableMap(EndoProgram):
    """Map on a finite chain given by its value list (``i -> values[i-1]``)."""

    source: ChainExpr
    target: ChainExpr
    values: tuple
    op: ClassVar[str] = "table"

    def __post_init__(self):
        if not isinstance(self.source, Finite) or self.source.k != len(self.values):
            raise ProgramError("a table map needs one value per point of a finite source")
        for v in self.values:
            check_element(self.target, v)

    def _apply(self, x):
        return self.values[x - 1]

    def preimage(self, iv):
        hits = [i + 1 for i, v in enumerate(self.values) if in_interval(self.target, iv, v)]
        return Interval(hits[0], True, hits[-1], True) if hits else NOTHING


def table_map(values, target: ChainExpr = None) -> TableMap:
    values = tuple(values)
    return TableMap(Finite(len(values)), target or Finite(len(values)), values)


@_register
@dataclass(frozen=True, eq=False)
class SuccNat(EndoProgram):
    op: ClassVar[str] = "succ"
    source: ChainExpr = field(default=N, init=False)
    target: ChainExpr = field(default=N, init=False)

    def _apply(self, x):
        return x + 1

    def preimage(self, iv):
        if iv.empty:
            return NOTHING
        a, b = _int_bounds(iv)
        return _closed(max(a - 1, 1), None if b is None else b - 1)


@_register
@dataclass(frozen=True, eq=False)
class PredClampNat(EndoProgram):
    op: ClassVar[str] = "pred_clamp"
    source: ChainExpr = field(default=N, init=False)
    target: ChainExpr = field(default=N, init=False)

    def _apply(self, x):
        return max(x - 1, 1)

    def preimage(self, iv):
        if iv.empty:
            return NOTHING
        a, b = _int_bounds(iv)
        if b is not None and b < a:
            return NOTHING
        hi = None if b is None else b + 1
        return _closed(1 if a <= 1 else a + 1, hi)


@_register
@dataclass(frozen=True, eq=False)
class StepThreshold(EndoProgram):
    """Two-valued step: ``w <= pivot`` goes to ``low``, everything above to ``high``."""

    source: ChainExpr
    target: ChainExpr
    pivot: object
    low: object
    high: object
    op: ClassVar[str] = "step"

    def __post_init__(self):
        check_element(self.source, self.pivot)
        check_element(self.target, self.low)
        check_element(self.target, self.high)

    def _apply(self, x):
        return self.low if cmp(self.source, x, self.pivot) <= 0 else self.high

    def preimage(self, iv):
        lo_in = in_interval(self.target, iv, self.low)
        hi_in = in_interval(self.target, iv, self.high)
        if lo_in and hi_in:
            return EVERYTHING
        if lo_in:
            return Interval(None, False, self.pivot, True)
        if hi_in:
            return Interval(self.pivot, False, None, False)
        return NOTHING


@_register
@dataclass(frozen=True, eq=False)
class StepMap(EndoProgram):
    """Piecewise-constant map: ``w`` goes to ``values[j]`` with ``j`` the number of cuts passed.

    A cut ``c`` is passed when ``c <= w`` (or ``c < w`` with ``strict``).
    """

    source: ChainExpr
    target: ChainExpr
    cuts: tuple
    values: tuple
    strict: bool = False
    op: ClassVar[str] = "step_map"

    def __post_init__(self):
        if len(self.values) != len(self.cuts) + 1:
            raise ProgramError("a step map needs one more value than cuts")
        for c in self.cuts:
            check_element(self.source, c)
        for v in self.values:
            check_element(self.target, v)

    def _apply(self, x):
        j = 0
        for c in self.cuts:
            d = cmp(self.source, c, x)
            if d < 0 or (d == 0 and not self.strict):
                j += 1
        return self.values[j]


@_register
@dataclass(frozen=True, eq=False)
class CollapseToPoint(EndoProgram):
    """Send every element of ``region`` to ``point``; identity elsewhere."""

    source: ChainExpr
    region: Interval
    point: object
    op: ClassVar[str] = "collapse"

    def __post_init__(self):
        check_element(self.source, self.point)
        if not in_interval(self.source, self.region, self.point):
            raise ProgramError("the collapse point must lie in the collapsed region")

    @property
    def target(self):
        return self.source

    def _apply(self, x):
        return self.point if in_interval(self.source, self.region, x) else x


# --------------------------------------------------------------------------
# combinators


@_register
@dataclass(frozen=True, eq=False, init=False)
class Compose(EndoProgram):
    """Apply ``steps`` in order (first step first)."""

    steps: tuple
    op: ClassVar[str] = "compose"

    def __init__(self, *steps):
        if not steps:
            raise ProgramError("compose needs at least one step")
        for p, q in zip(steps, steps[1:]):
            _same(p.target, q.source, "compose")
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def source(self):
        return self.steps[0].source

    @property
    def target(self):
        return self.steps[-1].target

    def _apply(self, x):
        for s in self.steps:
            x = s._apply(x)
        return x

    def preimage(self, iv):
        for s in reversed(self.steps):
            iv = s.preimage(iv)
            if iv.empty:
                return NOTHING
        return iv


@_register
@dataclass(frozen=True, eq=False)
class Power(EndoProgram):
    inner: EndoProgram
    k: int
    op: ClassVar[str] = "power"

    def __post_init__(self):
        if self.k < 1:
            raise ProgramError("power needs k >= 1")
        _same(self.inner.source, self.inner.target, "power")

    @property
    def source(self):
        return self.inner.source

    @property
    def target(self):
        return self.inner.target

    def _apply(self, x):
        for _ in range(self.k):
            x = self.inner._apply(x)
        return x

    def preimage(self, iv):
        for _ in range(self.k):
            iv = self.inner.preimage(iv)
        return iv


@_register
@dataclass(frozen=True, eq=False)
class GuardedCompose(EndoProgram):
    """``w >= guard`` goes through ``inner``; everything below goes to ``default``."""

    guard: object
    inner: EndoProgram
    default: object
    op: ClassVar[str] = "guarded"

    def __post_init__(self):
        check_element(self.inner.source, self.guard)
        check_element(self.inner.target, self.default)

    @property
    def source(self):
        return self.inner.source

    @property
    def target(self):
        return self.inner.target

    def _apply(self, x):
        if cmp(self.source, x, self.guard) >= 0:
            return self.inner._apply(x)
        return self.default


@_register
@dataclass(frozen=True, eq=False)
class SumPiece(EndoProgram):
    """Map a sum piecewise: ``left`` on the left summand, ``right`` on the right one."""

    source: ChainExpr
    target: ChainExpr
    left: EndoProgram
    right: EndoProgram
    op: ClassVar[str] = "sum_piece"

    def __post_init__(self):
        if not isinstance(self.source, Sum):
            raise ProgramError("sum_piece needs a sum as source")
        _same(self.left.source, self.source.left, "sum_piece left")
        _same(self.right.source, self.source.right, "sum_piece right")
        _same(self.left.target, self.target, "sum_piece left target")
        _same(self.right.target, self.target, "sum_piece right target")

    def _apply(self, x):
        return (self.left if x.side == "L" else self.right)._apply(x.value)

    def preimage(self, iv):
        return union_in_sum(self.source.left, self.source.right,
                            self.left.preimage(iv), self.right.preimage(iv))


@_register
@dataclass(frozen=True, eq=False)
class Inject(EndoProgram):
    """Inclusion of one summand into a sum."""

    target: ChainExpr
    side: str
    op: ClassVar[str] = "inject"

    def __post_init__(self):
        if not isinstance(self.target, Sum) or self.side not in ("L", "R"):
            raise ProgramError("inject needs a sum target and a side")

    @property
    def source(self):
        return self.target.left if self.side == "L" else self.target.right

    def _apply(self, x):
        return Tagged(self.side, x)

    def preimage(self, iv):
        return restrict(iv, self.side)


@_register
@dataclass(frozen=True, eq=False)
class ExtendIdentity(EndoProgram):
    """Run ``inner`` on the left summand and fix the right summand pointwise."""

    source: ChainExpr
    inner: EndoProgram
    op: ClassVar[str] = "extend_identity"

    def __post_init__(self):
        if not isinstance(self.source, Sum):
            raise ProgramError("extend_identity needs a sum as source")
        _same(self.inner.source, self.source.left, "extend_identity")
        _same(self.inner.target, self.source.left, "extend_identity")

    @property
    def target(self):
        return self.source

    def _apply(self, x):
        if x.side == "L":
            return Tagged("L", self.inner._apply(x.value))
        return x

    def preimage(self, iv):
        il = self.inner.preimage(restrict(iv, "L"))
        return union_in_sum(self.source.left, self.source.right, il, restrict(iv, "R"))


@_register
@dataclass(frozen=True, eq=False)
class PairConst(EndoProgram):
    """``y -> (y, value)`` into the product ``source x right``."""

    source: ChainExpr
    right: ChainExpr
    value: object
    op: ClassVar[str] = "pair_const"

    def __post_init__(self):
        check_element(self.right, self.value)

    @property
    def target(self):
        return LexProd(self.source, self.right)

    def _apply(self, x):
        return (x, self.value)

    def preimage(self, iv):
        if iv.empty:
            return NOTHING
        lo, lc, hi, hc = None, False, None, False
        if iv.lo is not None:
            a, b = iv.lo
            lo = a
            lc = b is None or cmp(self.right, self.value, b) > 0 or (
                cmp(self.right, self.value, b) == 0 and iv.lo_closed)
        if iv.hi is not None:
            a, b = iv.hi
            hi = a
            hc = b is None or cmp(self.right, self.value, b) < 0 or (
                cmp(self.right, self.value, b) == 0 and iv.hi_closed)
        return Interval(lo, lc, hi, hc)


@_register
@dataclass(frozen=True, eq=False)
class ProjectFirst(EndoProgram):
    source: ChainExpr
    op: ClassVar[str] = "project_first"

    def __post_init__(self):
        if not isinstance(self.source, LexProd):
            raise ProgramError("project_first needs a product")

    @property
    def target(self):
        return self.source.left

    def _apply(self, x):
        return x[0]

    def preimage(self, iv):
        """Whole blocks over ``iv``; open ends need a neighbour to start or stop at."""
        if iv.empty:
            return NOTHING
        A = self.target
        lo = hi = None
        if iv.lo is not None:
            a = iv.lo if iv.lo_closed else successor(A, iv.lo)
            if a is LIMIT:
                raise Unsupported("open bound at a dense point of the first factor")
            if a is None:
                return NOTHING
            lo = (a, None)
        if iv.hi is not None:
            b = iv.hi if iv.hi_closed else predecessor(A, iv.hi)
            if b is LIMIT:
                raise Unsupported("open bound at a dense point of the first factor")
            if b is None:
                return NOTHING
            hi = (b, None)
        if lo is not None and hi is not None and cmp(A, lo[0], hi[0]) > 0:
            return NOTHING
        return Interval(lo, lo is not None, hi, hi is not None)


@_register
@dataclass(frozen=True, eq=False)
class OnFactor(EndoProgram):
    """Act on one coordinate of a product, keeping the other."""

    source: ChainExpr
    inner: EndoProgram
    which: str = "second"
    op: ClassVar[str] = "on_factor"

    def __post_init__(self):
        if not isinstance(self.source, LexProd) or self.which not in ("first", "second"):
            raise ProgramError("on_factor needs a product and 'first' or 'second'")
        part = self.source.left if self.which == "first" else self.source.right
        _same(self.inner.source, part, "on_factor")
        _same(self.inner.target, part, "on_factor")

    @property
    def target(self):
        return self.source

    def _apply(self, x):
        if self.which == "first":
            return (self.inner._apply(x[0]), x[1])
        return (x[0], self.inner._apply(x[1]))


@_register
@dataclass(frozen=True, eq=False)
class PrefixQuotient(EndoProgram):
    """Fold ``source`` onto ``k + source`` using a surjection ``beta`` fixing ``z``.

    ``y`` goes to the ``(t+1)``-th point of the finite prefix when ``t < k`` is the
    first time the ``beta``-orbit of ``y`` reaches ``z``; otherwise to ``y beta^k``.
    """

    beta: EndoProgram
    z: object
    k: int
    op: ClassVar[str] = "prefix_quotient"

    def __post_init__(self):
        _same(self.beta.source, self.beta.target, "prefix_quotient")
        check_element(self.beta.source, self.z)

    @property
    def source(self):
        return self.beta.source

    @property
    def target(self):
        return Sum(Finite(self.k), self.beta.source)

    def _apply(self, x):
        for t in range(self.k):
            if cmp(self.source, x, self.z) == 0:
                return Tagged("L", t + 1)
            x = self.beta._apply(x)
        return Tagged("R", x)


# --------------------------------------------------------------------------
# isomorphisms


def _search(items, x, order):
    """Insertion point of ``x`` in a list sorted by ``order``."""
    lo, hi = 0, len(items)
    while lo < hi:
        mid = (lo + hi) // 2
        if order(items[mid], x) < 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


class _BackAndForth:
    """Lazily grown isomorphism between two countable dense chains without endpoints.

    Step ``2i`` places the ``i``-th element of the first chain, step ``2i+1``
    the ``i``-th element of the second.  Each new partner is the least-index
    element in the gap determined by the pairs already placed, so the map
    depends only on the step order and never on who asks first.
    """

    def __init__(self, a: ChainExpr, b: ChainExpr):
        self.a, self.b = a, b
        self.fwd, self.bwd = {}, {}
        self.by_a, self.by_b = [], []  # sorted element lists
        self.steps = 0
        self.lock = threading.Lock()

    def _place(self, x, mine, theirs, mine_list, theirs_list, table, back):
        i = _search(mine_list, x, lambda u, v: cmp(mine, u, v))
        lo = table[mine_list[i - 1]] if i > 0 else None
        hi = table[mine_list[i]] if i < len(mine_list) else None
        y = least_in(theirs, Interval(lo, False, hi, False))
        if y is None:
            raise ChainError("back-and-forth ran out of room; chains are not dense")
        mine_list.insert(i, x)
        j = _search(theirs_list, y, lambda u, v: cmp(theirs, u, v))
        theirs_list.insert(j, y)
        table[x] = y
        back[y] = x

    def _advance(self):
        i, odd = divmod(self.steps, 2)
        if odd:
            y = enumerate_element(self.b, i)
            if y not in self.bwd:
                self._place(y, self.b, self.a, self.by_b, self.by_a, self.bwd, self.fwd)
        else:
            x = enumerate_element(self.a, i)
            if x not in self.fwd:
                self._place(x, self.a, self.b, self.by_a, self.by_b, self.fwd, self.bwd)
        self.steps += 1

    def forward(self, x):
        y = self.fwd.get(x)
        if y is not None:
            return y
        with self.lock:
            while x not in self.fwd:
                self._advance()
            return self.fwd[x]

    def backward(self, y):
        x = self.bwd.get(y)
        if x is not None:
            return x
        with self.lock:
            while y not in self.bwd:
                self._advance()
            return self.bwd[y]


_ISO_TABLES: dict = {}
_ISO_LOCK = threading.Lock()


def _iso_table(a: ChainExpr, b: ChainExpr) -> _BackAndForth:
    with _ISO_LOCK:
        t = _ISO_TABLES.get((a, b))
        if t is None:
            t = _ISO_TABLES[(a, b)] = _BackAndForth(a, b)
        return t


@_register
@dataclass(frozen=True, eq=False)
class CantorIso(EndoProgram):
    """Back-and-forth isomorphism between ``first`` and ``second``.

    ``direction="forward"`` maps ``first -> second``; ``"backward"`` is its
    inverse.  Both directions share one table.
    """

    first: ChainExpr
    second: ChainExpr
    direction: str = "forward"
    op: ClassVar[str] = "cantor"

    def __post_init__(self):
        if self.direction not in ("forward", "backward"):
            raise ProgramError("direction must be 'forward' or 'backward'")
        for c in (self.first, self.second):
            if contains_real(c) or not attributes(c).is_countable or not dense_without_endpoints(c):
                raise ProgramError(f"{c!r} is not countable, dense and unbounded")

    @property
    def source(self):
        return self.first if self.direction == "forward" else self.second

    @property
    def target(self):
        return self.second if self.direction == "forward" else self.first

    def inverse(self) -> "CantorIso":
        return CantorIso(self.first, self.second,
                         "backward" if self.direction == "forward" else "forward")

    def _apply(self, x):
        t = _iso_table(self.first, self.second)
        return t.forward(x) if self.direction == "forward" else t.backward(x)

    def preimage(self, iv):
        if iv.empty:
            return NOTHING
        iv = complete(self.target, iv)
        inv = self.inverse()
        lo = None if iv.lo is None else inv._apply(iv.lo)
        hi = None if iv.hi is None else inv._apply(iv.hi)
        return Interval(lo, iv.lo_closed, hi, iv.hi_closed)


def _map_bounds(iv: Interval, f, reverse: bool) -> Interval:
    if iv.empty:
        return NOTHING
    lo = None if iv.lo is None else f(iv.lo)
    hi = None if iv.hi is None else f(iv.hi)
    if reverse:
        return Interval(hi, iv.hi_closed, lo, iv.lo_closed)
    return Interval(lo, iv.lo_closed, hi, iv.hi_closed)


@_register
@dataclass(frozen=True, eq=False)
class Transport(EndoProgram):
    """Conjugate ``inner`` (a self-map of a normal form) back onto ``source``.

    With ``reverse`` the normal form is that of the reversed chain, so the
    conjugation runs through an order-reversing bijection; this turns
    min-side constructions into max-side ones.
    """

    source: ChainExpr
    inner: EndoProgram
    reverse: bool = False
    op: ClassVar[str] = "transport"

    def __post_init__(self):
        _same(self.inner.source, self.normal, "transport")
        _same(self.inner.target, self.normal, "transport")

    @property
    def frame(self) -> ChainExpr:
        return Rev(self.source) if self.reverse else self.source

    @property
    def normal(self) -> ChainExpr:
        return normalize(self.frame)

    @property
    def target(self):
        return self.source

    def _apply(self, x):
        return from_normal(self.frame, self.inner._apply(to_normal(self.frame, x)))

    def preimage(self, iv):
        there = _map_bounds(complete(self.source, iv), lambda x: to_normal(self.frame, x), self.reverse)
        back = complete(self.normal, self.inner.preimage(there))
        return _map_bounds(back, lambda y: from_normal(self.frame, y), self.reverse)


def _spine(e: ChainExpr) -> list:
    return summands(e)


@_register
@dataclass(frozen=True, eq=False)
class Regroup(EndoProgram):
    """Re-bracket a right-nested sum as ``(first k summands) + (the rest)``.

    ``inverse=True`` runs the other way.
    """

    chain: ChainExpr
    k: int
    inverse: bool = False
    op: ClassVar[str] = "regroup"

    def __post_init__(self):
        if not 1 <= self.k < len(_spine(self.chain)):
            raise ProgramError("regroup needs 1 <= k < number of summands")

    @property
    def grouped(self) -> ChainExpr:
        parts = _spine(self.chain)
        return Sum(chain_sum(*parts[: self.k]), chain_sum(*parts[self.k:]))

    @property
    def source(self):
        return self.grouped if self.inverse else self.chain

    @property
    def target(self):
        return self.chain if self.inverse else self.grouped

    def _there(self, x):
        parts = _spine(self.chain)
        i, leaf = summand_locate(self.chain, x)
        if i < self.k:
            return Tagged("L", summand_place(parts[: self.k], i, leaf))
        return Tagged("R", summand_place(parts[self.k:], i - self.k, leaf))

    def _back(self, x):
        parts = _spine(self.chain)
        g = self.grouped
        if x.side == "L":
            i, leaf = summand_locate(g.left, x.value)
        else:
            i, leaf = summand_locate(g.right, x.value)
            i += self.k
        return summand_place(parts, i, leaf)

    def _apply(self, x):
        return self._back(x) if self.inverse else self._there(x)

    def preimage(self, iv):
        f = self._there if self.inverse else self._back
        return _map_bounds(complete(self.target, iv), f, False)


def conjugate_regroup(chain: ChainExpr, k: int, inner: EndoProgram) -> EndoProgram:
    """Run ``inner`` (a self-map of the regrouped sum) on ``chain`` itself."""
    return Compose(Regroup(chain, k), inner, Regroup(chain, k, inverse=True))


# --------------------------------------------------------------------------
# maps built from queries on other programs


def _least_avoiding(e: ChainExpr, iv: Interval, avoid):
    x = least_in(e, iv)
    if avoid is None or x is None or cmp(e, x, avoid) != 0:
        return x
    below = Interval(iv.lo, iv.lo_closed, avoid, False)
    above = Interval(avoid, False, iv.hi, iv.hi_closed)
    cands = [y for y in (least_in(e, below), least_in(e, above)) if y is not None]
    return min(cands, key=lambda y: index_of(e, y)) if cands else None


@_register
@dataclass(frozen=True, eq=False)
class LeftInverseChoice(EndoProgram):
    """Choose a preimage under ``beta`` for every point (least enumeration index).

    With ``avoid`` set, the point ``avoid`` itself is never chosen when another
    preimage exists.
    """

    beta: EndoProgram
    avoid: object = None
    op: ClassVar[str] = "left_inverse_choice"

    @property
    def source(self):
        return self.beta.target

    @property
    def target(self):
        return self.beta.source

    def _apply(self, x):
        try:
            pre = self.beta.preimage(Interval.point(x))
        except Unsupported:
            return self._search(x)
        y = _least_avoiding(self.target, pre, self.avoid)
        if y is None:
            y = least_in(self.target, pre)  # only the avoided point maps here
        if y is None:
            raise ProgramError(f"{x!r} has no preimage; the map is not surjective")
        return y

    def _search(self, x):
        # same choice as the structural route, found by walking the enumeration
        e, t = self.target, self.source
        fallback = None
        for i in range(SEARCH_BUDGET):
            try:
                y = enumerate_element(e, i)
            except IndexError:
                break
            if cmp(t, self.beta._apply(y), x) == 0:
                if self.avoid is None or cmp(e, y, self.avoid) != 0:
                    return y
                fallback = y
        if fallback is not None:
            return fallback
        raise ProgramError(f"no preimage of {x!r} among the first {SEARCH_BUDGET} elements")


@_register
@dataclass(frozen=True, eq=False)
class RightInverseFromImage(EndoProgram):
    """A right inverse of an injective ``alpha`` read off its image.

    ``x`` goes to the preimage of the largest image point at or below ``x``,
    or, when there is none, of the smallest image point above it.
    """

    alpha: EndoProgram
    op: ClassVar[str] = "right_inverse_from_image"

    @property
    def source(self):
        return self.alpha.target

    @property
    def target(self):
        return self.alpha.source

    def _apply(self, x):
        from .intervals import NO_EXTREME, extreme

        src = self.alpha.source
        below = self.alpha.preimage(Interval(None, False, x, True))
        m = extreme(src, below, top=True)
        if m is not None and m is not NO_EXTREME:
            return m
        above = self.alpha.preimage(Interval(x, True, None, False))
        m = extreme(src, above, top=False)
        if m is None or m is NO_EXTREME:
            raise ProgramError(f"no image point bounds {x!r}; the map is not a right unit")
        return m
