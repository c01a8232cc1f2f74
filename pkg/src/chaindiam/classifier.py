"""Left and right diameters of End(C), plus the explicit U-sequences behind them.

Infinite chains always have left diameter 2; the right diameter is 2 when the
chain is endpoint-shiftable and 3 otherwise.  Finite chains with at least two
points have both diameters equal to 1, and the trivial monoid has 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .chains import ChainExpr, Finite, attributes, cmp, contains_real, normalize, size
from .dsl import format_chain
from .endo import (
    Compose,
    EndoProgram,
    GuardedCompose,
    Report,
    SampleSpec,
    StepThreshold,
)
from .finmon import FiniteMonoid, PairSet, end_monoid, validate_usequence
from .shiftability import NO, YES, RuleTrace, endpoint_shiftable
from .witness import WitnessPair, endpoint_report, verify_witness

UNKNOWN_RIGHT = "unknown"

BASIS = {
    "TRIVIAL": "at most one point: End(C) is trivial",
    "FINITE": "Remark 2.4: finite End(C) has diameter 1 on both sides",
    "LEFT": "Theorem A: infinite chains have left diameter 2",
    "RIGHT": "Theorem B: right diameter 2 iff some endpoint is shiftable, else 3",
}


def _basis(rule: str, *children) -> RuleTrace:
    return RuleTrace(rule, BASIS[rule], tuple(children))


@dataclass(frozen=True)
class DiameterReport:
    chain: ChainExpr
    left: int
    right: Union[int, str]
    basis: RuleTrace

    @property
    def note(self) -> str:
        return "right diameter is 2 or 3 (shiftability undecided)" if self.right == UNKNOWN_RIGHT else ""

    def to_json(self) -> dict:
        d = {"chain": format_chain(self.chain), "left": self.left, "right": self.right,
             "basis": self.basis.to_json()}
        if self.right == UNKNOWN_RIGHT:
            d["right_range"] = [2, 3]
            d["note"] = self.note
        return d

    def row(self) -> str:
        right = "{2,3}?" if self.right == UNKNOWN_RIGHT else str(self.right)
        return f"{format_chain(self.chain)}\t{self.left}\t{right}"


def diameters(e: ChainExpr) -> DiameterReport:
    e = normalize(e)
    n = size(e)  # None for infinite chains
    if n is not None and n <= 1:
        return DiameterReport(e, 0, 0, _basis("TRIVIAL"))
    if n is not None:
        return DiameterReport(e, 1, 1, _basis("FINITE"))
    v = endpoint_shiftable(e)
    right = 2 if v.answer == YES else 3 if v.answer == NO else UNKNOWN_RIGHT
    return DiameterReport(e, 2, right, _basis("LEFT", _basis("RIGHT", v.trace)))


# --------------------------------------------------------------------------
# explicit sequences in End(n)


@dataclass
class USequence:
    """A U-sequence from ``a`` to ``b`` as triples ``(u, v, s)`` of monoid indices."""

    side: str
    a: int
    b: int
    U: tuple
    triples: list
    valid: bool = False
    labels: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.triples)

    def to_json(self) -> dict:
        lab = lambda i: list(self.labels.get(i, (i,)))  # noqa: E731
        return {"side": self.side, "from": lab(self.a), "to": lab(self.b),
                "U": [lab(u) for u in self.U], "valid": self.valid, "length": len(self.triples),
                "steps": [{"u": lab(u), "v": lab(v), "s": lab(s)} for u, v, s in self.triples]}


def _elem(S: FiniteMonoid, x) -> int:
    if isinstance(x, int):
        return x
    return S.index(tuple(x))


def identity_map(n: int) -> tuple:
    return tuple(range(1, n + 1))


def const_map(n: int, x: int) -> tuple:
    return (x,) * n


def _finish(S, seq: USequence) -> USequence:
    U = PairSet.square(seq.U)
    seq.valid = validate_usequence(S, U, seq.side, seq.a, seq.b, seq.triples)
    seq.labels = {i: S.labels[i] for i in set(seq.U) | {seq.a, seq.b} | {t for tr in seq.triples for t in tr}}
    return seq


def theoremA_sequence(n: int, theta, phi, x: int, S: Optional[FiniteMonoid] = None) -> USequence:
    """Left sequence ``theta = theta 1``, ``theta c_x = phi c_x``, ``phi 1 = phi``."""
    S = S or end_monoid(n)
    t, f = _elem(S, theta), _elem(S, phi)
    one, cx = S.index(identity_map(n)), S.index(const_map(n, x))
    triples = [] if t == f else [(one, cx, t), (cx, one, f)]
    return _finish(S, USequence("left", t, f, (one, cx), triples))


def step_table(n: int, x: int, low: int, high: int) -> tuple:
    """Values of the map sending ``w <= x`` to ``low`` and ``w > x`` to ``high``."""
    g = StepThreshold(Finite(n), Finite(n), x, low, high)
    return tuple(g(w) for w in range(1, n + 1))


def prop51_sequence(n: int, theta, phi, x: int, y: int, S: Optional[FiniteMonoid] = None) -> USequence:
    """Right sequence of length 3 through ``c_x`` and ``c_y`` (``x < y``).

    The pair is reordered so that ``x theta <= x phi``; the returned sequence
    then runs from ``a`` to ``b`` in that order.
    """
    if not 1 <= x < y <= n:
        raise ValueError("need 1 <= x < y <= n")
    S = S or end_monoid(n)
    t, f = _elem(S, theta), _elem(S, phi)
    if S.labels[t][x - 1] > S.labels[f][x - 1]:
        t, f = f, t
    xt, xf = S.labels[t][x - 1], S.labels[f][x - 1]
    gamma = S.index(step_table(n, x, xt, xf))
    one, cx, cy = S.index(identity_map(n)), S.index(const_map(n, x)), S.index(const_map(n, y))
    triples = [(one, cx, t), (cx, cy, gamma), (cx, one, f)]
    return _finish(S, USequence("right", t, f, (one, cx, cy), triples))


# --------------------------------------------------------------------------
# infinite chains: one step from any theta to the constant at the minimum


@dataclass
class ConstantLinkResult:
    gamma: EndoProgram
    reports: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def to_json(self) -> dict:
        return {"ok": self.ok, "gamma": self.gamma.to_json(), "checks": [r.to_json() for r in self.reports]}


def prop52_sequence(e: ChainExpr, theta: EndoProgram, w: WitnessPair,
                    spec: SampleSpec = SampleSpec()) -> ConstantLinkResult:
    """``gamma`` with ``theta = alpha gamma`` and ``c_z gamma = c_z``.

    So ``(alpha, c_z)`` links ``theta`` to ``c_z`` in one step.  Checked on
    samples; the witness itself is verified first.
    """
    e = normalize(e)
    if size(e) is not None or contains_real(e) or not attributes(e).is_countable:
        raise ValueError("needs an infinite, countable chain without R")
    if w.side != "min" or w.chain != e:
        raise ValueError("needs a min-side witness for this chain")
    if theta.source != e or theta.target != e:
        raise ValueError("theta must be a self-map of the chain")
    checks = verify_witness(w, spec)
    if not all(r.ok for r in checks):
        raise ValueError("witness failed verification: " + "; ".join(str(r) for r in checks if not r.ok))
    z = w.z
    za = w.alpha._apply(z)
    gamma = GuardedCompose(za, Compose(w.beta, theta), z)

    agree = Report("theta = alpha gamma", 0, spec.describe())
    for x in spec.points(e):
        agree.checked += 1
        if cmp(e, gamma._apply(w.alpha._apply(x)), theta._apply(x)) != 0:
            agree.add(f"differs at {x!r}")
    fixed = Report("z gamma = z", 1, "exact")
    if cmp(e, gamma._apply(z), z) != 0:
        fixed.add("gamma moves z")
    return ConstantLinkResult(gamma, [agree, fixed, endpoint_report(w)])
