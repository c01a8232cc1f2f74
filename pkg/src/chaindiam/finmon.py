"""Finite monoids, one-sided congruence closure and U-sequence distances.

Composition convention: ``table[a, b]`` is the product ``ab`` acting on the
right, i.e. "apply ``a``, then ``b``".  For transformation monoids this means
``x(ab) = (xa)b``.  Left-sided questions are answered on the dual monoid
(transposed table) so that only the right-sided engine exists.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

INF = math.inf
DEFAULT_MAX_N = 7
DEFAULT_MAX_SIZE = 1000


class MonoidError(ValueError):
    pass


class BudgetError(MonoidError):
    pass


class FiniteMonoid:
    """Multiplication table with identity; checked on construction."""

    def __init__(self, table, identity: int, labels: Optional[Sequence] = None, check: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise MonoidError("table must be square")
        m = t.shape[0]
        if m == 0:
            raise MonoidError("a monoid has at least one element")
        if t.min() < 0 or t.max() >= m:
            raise MonoidError("table entries out of range")
        if not 0 <= identity < m:
            raise MonoidError("identity out of range")
        if labels is not None and len(labels) != m:
            raise MonoidError("one label per element")
        self.table = t
        self.table.setflags(write=False)
        self.identity = identity
        self.labels = None if labels is None else tuple(labels)
        if check:
            self._check()

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.size

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def _check(self):
        t, e = self.table, self.identity
        idx = np.arange(self.size)
        if not (np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)):
            raise MonoidError("identity laws fail")
        for a in range(self.size):
            # (ab)c == a(bc) for all b, c
            if not np.array_equal(t[t[a]], t[a][t]):
                raise MonoidError(f"associativity fails for a={a}")

    def dual(self) -> "FiniteMonoid":
        return FiniteMonoid(self.table.T.copy(), self.identity, self.labels, check=False)

    def index(self, label) -> int:
        if self.labels is None:
            raise MonoidError("monoid has no labels")
        return self.labels.index(tuple(label))

    def to_json(self) -> dict:
        out = {"size": self.size, "identity": self.identity,
               "table": self.table.ravel().tolist()}
        if self.labels is not None:
            out["labels"] = [list(l) if isinstance(l, tuple) else l for l in self.labels]
        return out

    @classmethod
    def from_json(cls, data) -> "FiniteMonoid":
        if isinstance(data, str):
            data = json.loads(data)
        m = data["size"]
        table = np.asarray(data["table"], dtype=np.int64)
        if table.ndim == 1:
            if table.size != m * m:
                raise MonoidError("table length must be size * size")
            table = table.reshape(m, m)
        labels = data.get("labels")
        if labels is not None:
            labels = [tuple(l) if isinstance(l, list) else l for l in labels]
        return cls(table, data["identity"], labels)


def end_monoid(n: int, max_n: int = DEFAULT_MAX_N) -> FiniteMonoid:
    """The monoid of order-preserving self-maps of ``{1, ..., n}``.

    Elements are labelled by their value lists ``(1f, ..., nf)`` in
    lexicographic order.
    """
    if n < 1:
        raise MonoidError("n must be positive")
    if n > max_n:
        raise BudgetError(f"End({n}) exceeds the budget n <= {max_n}")
    maps = np.array(list(itertools.combinations_with_replacement(range(n), n)), dtype=np.int64)
    m = len(maps)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = maps @ weights  # increasing, since the list is lexicographic
    table = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        composed = maps[:, maps[a]]  # row b: i -> (i a) b
        table[a] = np.searchsorted(codes, composed @ weights)
    labels = [tuple(int(v) + 1 for v in row) for row in maps]
    identity = labels.index(tuple(range(1, n + 1)))
    return FiniteMonoid(table, identity, labels)


def constant(S: FiniteMonoid, k: int) -> int:
    """Index of the constant map onto ``k`` in an End(n) monoid."""
    n = len(S.labels[0])
    return S.index((k,) * n)


# --------------------------------------------------------------------------
# generating pairs


@dataclass(frozen=True)
class PairSet:
    """A set of generating pairs, the square ``V x V`` of a subset, or all of ``S x S``."""

    pairs: tuple = ()
    full: bool = False

    @classmethod
    def of(cls, pairs: Iterable) -> "PairSet":
        return cls(tuple((int(u), int(v)) for u, v in pairs))

    @classmethod
    def square(cls, subset: Iterable[int]) -> "PairSet":
        vs = sorted(set(int(v) for v in subset))
        return cls(tuple((u, v) for u in vs for v in vs))

    @classmethod
    def everything(cls) -> "PairSet":
        return cls(full=True)

    def resolve(self, m: int) -> np.ndarray:
        if self.full:
            a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
            return np.stack([a.ravel(), b.ravel()], axis=1)
        arr = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= m):
            raise MonoidError("pair index out of range")
        return arr

    def contains(self, u: int, v: int) -> bool:
        return self.full or (u, v) in set(self.pairs)


def _as_pairset(U) -> PairSet:
    return U if isinstance(U, PairSet) else PairSet.of(U)


def _oriented(S: FiniteMonoid, side: str) -> FiniteMonoid:
    if side == "right":
        return S
    if side == "left":
        return S.dual()
    raise MonoidError(f"side must be 'left' or 'right', not {side!r}")


# --------------------------------------------------------------------------
# congruences


@dataclass(frozen=True)
class Partition:
    """Block label per element; labels are numbered by first occurrence."""

    block: tuple

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> "Partition":
        seen, out = {}, []
        for r in roots:
            out.append(seen.setdefault(r, len(seen)))
        return cls(tuple(out))

    def blocks(self) -> list:
        groups = {}
        for x, b in enumerate(self.block):
            groups.setdefault(b, []).append(x)
        return [groups[b] for b in sorted(groups)]

    def same(self, a: int, b: int) -> bool:
        return self.block[a] == self.block[b]

    @property
    def is_universal(self) -> bool:
        return len(set(self.block)) <= 1


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def congruence_closure(S: FiniteMonoid, U, side: str = "right") -> Partition:
    """Smallest one-sided congruence containing ``U``.

    Worklist closure: every merge of ``(a, b)`` schedules ``(as, bs)`` for all
    ``s`` until nothing new is merged.
    """
    T = _oriented(S, side).table
    uf = _UnionFind(S.size)
    work = [tuple(p) for p in _as_pairset(U).resolve(S.size).tolist()]
    while work:
        a, b = work.pop()
        if uf.union(a, b):
            work.extend(zip(T[a].tolist(), T[b].tolist()))
    return Partition.from_roots([uf.find(x) for x in range(S.size)])


def derivation_graph(S: FiniteMonoid, U, side: str = "right", max_size: int = DEFAULT_MAX_SIZE) -> np.ndarray:
    """Adjacency matrix: ``p ~ q`` iff ``p = us`` and ``q = vs`` for a pair of ``U``."""
    if S.size > max_size:
        raise BudgetError(f"|S| = {S.size} exceeds the budget {max_size}")
    T = _oriented(S, side).table
    pairs = _as_pairset(U).resolve(S.size)
    adj = np.zeros((S.size, S.size), dtype=bool)
    if len(pairs):
        left = T[pairs[:, 0]].ravel()
        right = T[pairs[:, 1]].ravel()
        adj[left, right] = True
    adj |= adj.T
    np.fill_diagonal(adj, False)
    return adj


def distance_matrix(S: FiniteMonoid, U, side: str = "right", max_size: int = DEFAULT_MAX_SIZE) -> np.ndarray:
    """All-pairs U-sequence distances (``inf`` between unrelated elements)."""
    adj = derivation_graph(S, U, side, max_size).astype(np.float32)
    m = S.size
    dist = np.full((m, m), INF)
    reached = np.eye(m, dtype=bool)
    frontier = reached.copy()
    np.fill_diagonal(dist, 0)
    d = 0
    while frontier.any():
        d += 1
        frontier = ((frontier.astype(np.float32) @ adj) > 0) & ~reached
        dist[frontier] = d
        reached |= frontier
    return dist


def distance(S: FiniteMonoid, U, side: str, a: int, b: int) -> float:
    """Length of a shortest U-sequence from ``a`` to ``b`` (``inf`` if none)."""
    if a == b:
        return 0
    adj = derivation_graph(S, U, side)
    dist = {a: 0}
    frontier = [a]
    while frontier:
        nxt = []
        for p in frontier:
            for q in np.flatnonzero(adj[p]).tolist():
                if q not in dist:
                    dist[q] = dist[p] + 1
                    if q == b:
                        return dist[q]
                    nxt.append(q)
        frontier = nxt
    return INF


def _as_number(x):
    return INF if x == INF else int(x)


def diameter(S: FiniteMonoid, U, side: str = "right", max_size: int = DEFAULT_MAX_SIZE):
    """Largest distance over all pairs; ``inf`` unless ``U`` generates the universal relation."""
    return _as_number(distance_matrix(S, U, side, max_size).max())


def diagonal_act_generated(S: FiniteMonoid, U, side: str = "right") -> bool:
    """Whether ``{(us, vs)}`` covers all of ``S x S``."""
    T = _oriented(S, side).table
    pairs = _as_pairset(U).resolve(S.size)
    covered = np.zeros((S.size, S.size), dtype=bool)
    if len(pairs):
        covered[T[pairs[:, 0]].ravel(), T[pairs[:, 1]].ravel()] = True
    return bool(covered.all())


def validate_usequence(S: FiniteMonoid, U, side: str, a: int, b: int, seq: Sequence) -> bool:
    """Check a U-sequence given as triples ``(u, v, s)``.

    Right side: ``a = u1 s1``, ``v_i s_i = u_{i+1} s_{i+1}``, ``v_n s_n = b``.
    The left side multiplies by ``s`` on the left instead.
    """
    m = S.size
    T = _oriented(S, side).table
    U = _as_pairset(U)
    for triple in seq:
        if len(triple) != 3 or not all(isinstance(i, (int, np.integer)) and 0 <= i < m for i in triple):
            raise MonoidError(f"malformed triple {triple!r}")
    for x in (a, b):
        if not 0 <= x < m:
            raise MonoidError(f"element {x} out of range")
    cur = a
    for u, v, s in seq:
        if not (U.contains(u, v) or U.contains(v, u)):
            return False
        if T[u, s] != cur:
            return False
        cur = int(T[v, s])
    return cur == b


def right_diameter_exhaustive(S: FiniteMonoid, side: str = "right", max_size: int = 10):
    """Minimum of the ``V x V``-diameter over all subsets ``V`` (small monoids only).

    Returns ``(value, V)`` for the first minimising subset in size order.
    """
    if S.size > max_size:
        raise BudgetError(f"exhaustive search limited to |S| <= {max_size}")
    if S.size == 1:
        return 0, (S.identity,)
    best = (INF, None)
    for k in range(1, S.size + 1):
        for V in itertools.combinations(range(S.size), k):
            d = diameter(S, PairSet.square(V), side)
            if d < best[0]:
                best = (d, V)
                if d == 1:  # a non-trivial monoid has no smaller value
                    return best
    return best
