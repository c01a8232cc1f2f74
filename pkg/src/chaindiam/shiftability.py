"""Rule-based decisions for min-, max- and endpoint-shiftability.

A chain with minimum ``z`` is min-shiftable when it is a quotient of itself
with ``z`` removed.  There is no general algorithm here: a fixed list of
rules either decides a term or the answer is ``Unknown``.  Every decision
carries a trace naming the rule that fired.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .chains import (
    ONE,
    ChainExpr,
    Finite,
    Int,
    LexProd,
    Nat,
    NatStar,
    Rat,
    Real,
    Rev,
    Sum,
    attributes,
    chain_sum,
    normalize,
    summands,
)
from .dsl import format_chain

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass(frozen=True)
class RuleTrace:
    rule: str
    citation: str
    children: tuple = ()

    def to_json(self) -> dict:
        return {"rule": self.rule, "citation": self.citation,
                "children": [c.to_json() for c in self.children]}

    @classmethod
    def from_json(cls, d) -> "RuleTrace":
        return cls(d["rule"], d["citation"], tuple(cls.from_json(c) for c in d.get("children", ())))

    def rules(self) -> list:
        """Rule ids in the trace, depth first."""
        out = [self.rule]
        for c in self.children:
            out.extend(c.rules())
        return out


@dataclass(frozen=True)
class Verdict:
    answer: str
    side: str
    trace: RuleTrace
    witness: Optional[object] = field(default=None, compare=False)

    def to_json(self) -> dict:
        d = {"answer": self.answer, "side": self.side, "trace": self.trace.to_json()}
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        return d


# citation text for each rule (short labels, written for this tool)
CITE = {
    "N1": "no minimum, by definition",
    "N2": "finite chain: no proper quotient onto itself",
    "R1": "Prop 4.5(1): infinite well-ordered",
    "R2": "Prop 4.5(2): countable, non-scattered, with minimum",
    "R3": "Prop 4.3(4): initial summand is min-shiftable",
    "R4": "Prop 4.3(1)<=>(8): finite initial summand peeled",
    "R5": "Prop 4.5(3): D + R with D from the 1+Z+1 family",
    "R6": "Prop 4.4: lexicographic product",
    "N4": "Example 4.7 and the non-example list",
    "GAP": "no rule decides this term",
    "DUAL": "Prop 4.3(2): max side read off the reversed chain",
    "EITHER": "endpoint-shiftable iff min- or max-shiftable",
}


def _leaf(rule: str, *children) -> RuleTrace:
    return RuleTrace(rule, CITE[rule], tuple(children))


F1 = ONE
_R5_FAMILY = (
    lambda ps: len(ps) == 1 and isinstance(ps[0], Finite) and ps[0].k >= 1,
    lambda ps: ps == [Nat(), F1],
    lambda ps: ps == [F1, NatStar()],
    lambda ps: ps == [F1, Int(), F1],
)
_N4_TAILS = ([Int()], [Int(), F1], [Int(), Real()], [Int(), Real(), Int(), F1])
# chains isomorphic to one of their proper terminal segments
_SELF_SIMILAR = (Nat(), Sum(F1, Rat()), Sum(F1, Real()))


def _r5(parts) -> bool:
    return len(parts) >= 2 and parts[-1] == Real() and any(f(parts[:-1]) for f in _R5_FAMILY)


def _n4(parts) -> bool:
    if len(parts) < 2 or not isinstance(parts[0], Finite) or parts[0].k < 1:
        return False
    return parts[1:] in _N4_TAILS


def _peel_one(parts) -> ChainExpr:
    """The chain with its first point removed, for a finite first summand."""
    k = parts[0].k
    return chain_sum(*([Finite(k - 1)] if k > 1 else []), *parts[1:])


def min_shiftable(e: ChainExpr) -> Verdict:
    return _min(normalize(e))


@lru_cache(maxsize=None)
def _min(e: ChainExpr) -> Verdict:
    a = attributes(e)
    no = lambda t: Verdict(NO, "min", t)  # noqa: E731
    yes = lambda t: Verdict(YES, "min", t)  # noqa: E731
    if not a.has_min:
        return no(_leaf("N1"))
    if a.is_finite:
        return no(_leaf("N2"))
    if a.is_well_ordered:
        return yes(_leaf("R1"))
    if a.is_countable and not a.is_scattered:
        return yes(_leaf("R2"))
    parts = summands(e)
    for k in range(1, len(parts)):
        sub = _min(chain_sum(*parts[:k]))
        if sub.answer == YES:
            return yes(_leaf("R3", sub.trace))
    pending = None
    if len(parts) >= 2 and isinstance(parts[0], Finite):
        rest = _peel_one(parts)
        if attributes(rest).has_min:
            sub = _min(rest)
            if sub.answer != UNKNOWN:
                return Verdict(sub.answer, "min", _leaf("R4", sub.trace))
            pending = sub.trace
    if _r5(parts):
        return yes(_leaf("R5"))
    if isinstance(e, LexProd):
        sub = _min(e.right)
        if sub.answer == YES:
            return yes(_leaf("R6", sub.trace))
        if e.left in _SELF_SIMILAR:
            return yes(_leaf("R6"))
    if _n4(parts):
        return no(_leaf("N4"))
    gap = _leaf("GAP", pending) if pending is not None else _leaf("GAP")
    return Verdict(UNKNOWN, "min", gap)


def max_shiftable(e: ChainExpr) -> Verdict:
    v = _min(normalize(Rev(e)))
    return Verdict(v.answer, "max", _leaf("DUAL", v.trace))


def endpoint_shiftable(e: ChainExpr) -> Verdict:
    lo, hi = min_shiftable(e), max_shiftable(e)
    answers = {lo.answer, hi.answer}
    if YES in answers:
        ans = YES
    elif answers == {NO}:
        ans = NO
    else:
        ans = UNKNOWN
    return Verdict(ans, "either", _leaf("EITHER", lo.trace, hi.trace))


def shiftable(e: ChainExpr, side: str = "min") -> Verdict:
    if side == "min":
        return min_shiftable(e)
    if side == "max":
        return max_shiftable(e)
    if side == "either":
        return endpoint_shiftable(e)
    raise ValueError(f"side must be min, max or either, not {side!r}")


def applicable_rules(e: ChainExpr) -> dict:
    """Every rule whose premise holds for ``e`` (min side), ignoring rule order.

    Recursive premises use the ordered procedure on the smaller terms.  Used
    to check that no term can be derived both Yes and No.
    """
    e = normalize(e)
    a = attributes(e)
    out = {}
    if not a.has_min:
        out["N1"] = NO
    if a.is_finite:
        out["N2"] = NO
    if a.has_min and not a.is_finite and a.is_well_ordered:
        out["R1"] = YES
    if a.has_min and a.is_countable and not a.is_scattered:
        out["R2"] = YES
    parts = summands(e)
    if a.has_min:
        if any(_min(chain_sum(*parts[:k])).answer == YES for k in range(1, len(parts))):
            out["R3"] = YES
        if len(parts) >= 2 and isinstance(parts[0], Finite):
            rest = _peel_one(parts)
            if attributes(rest).has_min and _min(rest).answer != UNKNOWN:
                out["R4"] = _min(rest).answer
        if _r5(parts):
            out["R5"] = YES
        if isinstance(e, LexProd) and (_min(e.right).answer == YES or e.left in _SELF_SIMILAR):
            out["R6"] = YES
        if _n4(parts):
            out["N4"] = NO
    return out


def describe(v: Verdict, e: ChainExpr) -> str:
    return f"{v.side}-shiftable({format_chain(normalize(e))}) = {v.answer} via {' > '.join(v.trace.rules())}"
