"""Sampled verification of programs and the exact finite-chain tests.

Sampled checks report "no counterexample found" with their budget; they are
evidence, not proofs.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cmp_to_key

from ..chains import (
    ChainExpr,
    Finite,
    Interval,
    Sum,
    attributes,
    cmp,
    enumerate_element,
    size,
)
from ..dsl import format_element
from .intervals import is_empty
from .programs import (
    CollapseToPoint,
    Const,
    EndoProgram,
    Identity,
    LeftInverseChoice,
    ProgramError,
    StepMap,
    SumPiece,
)

MAX_VIOLATIONS = 5


@dataclass(frozen=True)
class SampleSpec:
    """``count`` draws from enumeration indices ``[lo, hi)`` with a fixed seed.

    When ``count`` covers the whole index range every index is used once.
    """

    count: int = 1000
    seed: int = 42
    lo: int = 0
    hi: int = 2000

    def _range(self, e: ChainExpr) -> range:
        n = size(e)
        hi = self.hi if n is None else min(self.hi, n)
        return range(min(self.lo, hi), hi)

    def points(self, e: ChainExpr) -> list:
        r = self._range(e)
        if self.count >= len(r):
            idx = list(r)
        else:
            idx = random.Random(self.seed).sample(r, self.count)
        return [enumerate_element(e, i) for i in idx]

    def pairs(self, e: ChainExpr) -> list:
        r = self._range(e)
        if not r:
            return []
        rng = random.Random(self.seed)
        out = []
        for _ in range(self.count):
            i, j = rng.choice(r), rng.choice(r)
            out.append((enumerate_element(e, i), enumerate_element(e, j)))
        return out

    def describe(self) -> str:
        return f"{self.count} samples, seed {self.seed}, indices {self.lo}..{self.hi - 1}"


@dataclass
class Report:
    name: str
    checked: int
    budget: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append(msg)
        else:
            self.violations[-1] = msg  # keep the count capped but show the latest

    def __str__(self):
        if self.ok:
            return f"{self.name}: no counterexample found ({self.checked} checks; {self.budget})"
        return f"{self.name}: FAILED, e.g. {self.violations[0]}"

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "checked": self.checked,
                "budget": self.budget, "violations": list(self.violations)}


def _show(e, x) -> str:
    try:
        return format_element(e, x)
    except Exception:
        return repr(x)


def check_monotone(p: EndoProgram, spec: SampleSpec = SampleSpec()) -> Report:
    src, tgt = p.source, p.target
    rep = Report("monotone", 0, spec.describe())
    for x, y in spec.pairs(src):
        if cmp(src, x, y) > 0:
            x, y = y, x
        px, py = p._apply(x), p._apply(y)
        rep.checked += 1
        if cmp(tgt, px, py) > 0:
            rep.add(f"{_show(src, x)} <= {_show(src, y)} but images {_show(tgt, px)} > {_show(tgt, py)}")
    return rep


def check_right_inverse(alpha: EndoProgram, beta: EndoProgram, spec: SampleSpec = SampleSpec()) -> Report:
    """Check that ``alpha`` then ``beta`` is the identity on sampled points."""
    if alpha.target != beta.source or alpha.source != beta.target:
        raise ProgramError("alpha and beta do not compose to a self-map")
    e = alpha.source
    rep = Report("right inverse", 0, spec.describe())
    for x in spec.points(e):
        y = beta._apply(alpha._apply(x))
        rep.checked += 1
        if cmp(e, x, y) != 0:
            rep.add(f"{_show(e, x)} comes back as {_show(e, y)}")
    return rep


# --------------------------------------------------------------------------
# finite chains


def _values(alpha: EndoProgram) -> tuple:
    e = alpha.source
    if not isinstance(e, Finite) or alpha.target != e:
        raise ProgramError("expected a self-map of a finite chain")
    return tuple(alpha._apply(i) for i in range(1, e.k + 1))


def is_regular_finite(alpha: EndoProgram) -> bool:
    """Regularity via the image criterion (endpoints and one-sided neighbours of the image)."""
    vals = _values(alpha)
    n = alpha.source.k
    if n == 0:
        return True
    im = sorted(set(vals))
    # (i), (ii): a bounded image needs a min/max; a finite image always has both
    for x in range(1, n + 1):
        if x in im or x < im[0] or x > im[-1]:
            continue
        below = [t for t in im if t < x]
        above = [t for t in im if t > x]
        if not below and not above:
            return False
    return True


def monotone_maps(n: int):
    return itertools.combinations_with_replacement(range(1, n + 1), n)


def regular_oracle(values) -> bool:
    """Brute force: is there a monotone ``beta`` with ``alpha beta alpha = alpha``?"""
    n = len(values)
    for beta in monotone_maps(n):
        if all(values[beta[values[i] - 1] - 1] == values[i] for i in range(n)):
            return True
    return False


def is_right_unit_finite(alpha: EndoProgram) -> bool:
    vals = _values(alpha)
    return len(set(vals)) == len(vals) and is_regular_finite(alpha)


# --------------------------------------------------------------------------
# right and left inverses


def right_inverse_value_check(alpha: EndoProgram, beta: EndoProgram, x) -> bool:
    """Does ``x beta alpha`` sit next to ``x`` in the image of ``alpha``?

    It must be the largest image point at or below ``x`` or the smallest one at
    or above it.  Uses the preimage description of ``alpha``; raises
    ``Unsupported`` when that is unavailable.
    """
    e = alpha.target
    y = alpha._apply(beta._apply(x))
    c = cmp(e, y, x)
    if c <= 0:
        gap = Interval(y, False, x, True)   # image points in (y, x] would beat y
    else:
        gap = Interval(x, True, y, False)
    return is_empty(alpha.source, alpha.preimage(gap))


def right_inverse_value_report(alpha, beta, spec: SampleSpec = SampleSpec()) -> Report:
    rep = Report("nearest image point", 0, spec.describe())
    for x in spec.points(alpha.target):
        rep.checked += 1
        if not right_inverse_value_check(alpha, beta, x):
            rep.add(f"x = {_show(alpha.target, x)}")
    return rep


def construct_left_inverse(beta: EndoProgram, avoid=None) -> EndoProgram:
    """A map ``alpha`` with ``alpha`` then ``beta`` the identity, for surjective ``beta``.

    Each point goes to its preimage of least enumeration index.
    """
    if isinstance(beta, Identity):
        return beta
    n = size(beta.target)
    if n is not None:
        for i in range(n):
            y = enumerate_element(beta.target, i)
            if is_empty(beta.source, beta.preimage(Interval.point(y))):
                raise ProgramError(f"{_show(beta.target, y)} has no preimage; the map is not surjective")
    return LeftInverseChoice(beta, avoid)


# --------------------------------------------------------------------------
# shifting map


def _pick(D: ChainExpr, budget: int, need_below: int, need_above: int):
    """First enumerated ``x`` with enough enumerated elements on each side."""
    seen = []
    for i in range(budget):
        try:
            seen.append(enumerate_element(D, i))
        except IndexError:
            break
        for x in seen:
            below = [y for y in seen if cmp(D, y, x) < 0]
            above = [y for y in seen if cmp(D, y, x) > 0]
            if len(below) >= need_below and len(above) >= need_above:
                below.sort(key=_sorter(D))
                above.sort(key=_sorter(D))
                return x, below, above
    raise ProgramError("pivot search budget exceeded")


def _sorter(D):
    return cmp_to_key(lambda u, v: cmp(D, u, v))


def _steps(part, D, marks, vals, strict):
    marks = sorted(marks, key=_sorter(part))
    if attributes(part).is_empty or not marks:
        return Const(part, D, vals[0])
    cuts = tuple(marks[1:]) if not strict else tuple(marks[:-1])
    return StepMap(part, D, cuts, tuple(vals[: len(marks)]), strict)


def lemma_shifting(C: ChainExpr, D: ChainExpr, E: ChainExpr, K=(), L=(), budget: int = 2000) -> EndoProgram:
    """A homomorphism ``C + D + E -> D`` injective on ``K`` and ``L``.

    When ``C`` is empty and ``D`` has no minimum the image is unbounded below;
    when ``E`` is empty and ``D`` has no maximum it is unbounded above.
    """
    if size(D) is not None:
        raise ProgramError("D must be infinite")
    K, L = list(K), list(L)
    c_empty, e_empty = attributes(C).is_empty, attributes(E).is_empty
    if c_empty and e_empty:
        return Identity(D)
    ad = attributes(D)
    # A = D below x (x included) must beat |K|, B = D above x must beat |L|
    x, below, above = _pick(D, budget, len(K), len(L) + 1)
    src = Sum(C, Sum(D, E))

    if c_empty and not ad.has_min:
        mode = "fix_low"
    elif e_empty and not ad.has_max:
        mode = "fix_high"
    else:
        mode = "collapse"

    # C into A (strictly below x), injective on K
    a_vals = below[-len(K):] if K else [x]
    c_map = _steps(C, D, K, a_vals, strict=False)
    # E into B, injective on L
    b_vals = above[: len(L)] if L else [x]
    e_map = _steps(E, D, L, b_vals, strict=True)

    if mode == "fix_low":
        d_map = CollapseToPoint(D, Interval(x, True, None, False), x)
    elif mode == "fix_high":
        d_map = CollapseToPoint(D, Interval(None, False, x, True), x)
    else:
        d_map = Const(D, D, x)
    tail = SumPiece(Sum(D, E), D, d_map, e_map)
    return SumPiece(src, D, c_map, tail)
