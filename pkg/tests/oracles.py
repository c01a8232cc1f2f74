"""Slow, independent reference implementations used to freeze expected values.

Nothing here shares code with the package: maps are plain tuples, relations
are Python sets.
"""
import itertools
from collections import deque


def monotone_maps(n):
    """All order-preserving self-maps of 1..n, by filtering every function."""
    return [f for f in itertools.product(range(1, n + 1), repeat=n)
            if all(f[i] <= f[i + 1] for i in range(n - 1))]


def then(f, g):
    """Apply f, then g."""
    return tuple(g[x - 1] for x in f)


def act(f, g, side):
    return then(f, g) if side == "right" else then(g, f)


def closure(maps, U, side):
    """Smallest one-sided congruence containing U, as a set of pairs."""
    rel = {(a, a) for a in maps} | set(U) | {(b, a) for a, b in U}
    while True:
        new = set(rel)
        new |= {(act(a, s, side), act(b, s, side)) for a, b in rel for s in maps}
        new |= {(a, d) for a, b in rel for c, d in rel if b == c}
        if new == rel:
            return rel
        rel = new


def distances_from(maps, U, side, start):
    edges = {}
    for u, v in U:
        for s in maps:
            p, q = act(u, s, side), act(v, s, side)
            edges.setdefault(p, set()).add(q)
            edges.setdefault(q, set()).add(p)
    dist = {start: 0}
    todo = deque([start])
    while todo:
        p = todo.popleft()
        for q in edges.get(p, ()):
            if q not in dist:
                dist[q] = dist[p] + 1
                todo.append(q)
    return dist


def is_regular(f):
    n = len(f)
    return any(then(then(f, b), f) == f for b in monotone_maps(n))
