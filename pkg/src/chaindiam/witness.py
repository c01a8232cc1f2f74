"""Executable witnesses of shiftability.

A witness for the min side of a chain with minimum ``z`` is a pair of
endomorphisms ``alpha``, ``beta`` with ``alpha`` then ``beta`` the identity and
``z alpha > z``.  Max-side witnesses are min-side witnesses of the reversed
chain carried back through the order-reversing bijection.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .chains import (
    Finite,
    LexProd,
    Nat,
    Rat,
    Rev,
    Sum,
    Tagged,
    attributes,
    chain_sum,
    cmp,
    contains_real,
    from_normal,
    max_element,
    min_element,
    normalize,
    summands,
)
from .dsl import format_chain, format_element, parse_chain, parse_element
from .endo import (
    CantorIso,
    Compose,
    Const,
    EndoProgram,
    ExtendIdentity,
    GuardedCompose,
    Inject,
    LadderFold,
    LadderSection,
    LeftInverseChoice,
    OnFactor,
    PairConst,
    Power,
    PredClampNat,
    PrefixQuotient,
    ProgramError,
    ProjectFirst,
    RightInverseFromImage,
    SampleSpec,
    SuccNat,
    SumPiece,
    TableMap,
    Transport,
    check_monotone,
    check_right_inverse,
    conjugate_regroup,
    program_from_json,
)
from .endo.checks import Report
from .shiftability import YES, shiftable

Q = Rat()
Q_ZERO = Fraction(0)


class WitnessError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WitnessPair:
    chain: object
    side: str
    alpha: EndoProgram
    beta: EndoProgram
    z: object
    construction: str = ""

    def to_json(self) -> dict:
        return {"chain": format_chain(self.chain), "side": self.side,
                "z": format_element(self.chain, self.z), "construction": self.construction,
                "alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, d) -> "WitnessPair":
        if isinstance(d, str):
            d = json.loads(d)
        chain = parse_chain(d["chain"])
        return cls(chain, d["side"], program_from_json(d["alpha"]), program_from_json(d["beta"]),
                   parse_element(chain, d["z"]), d.get("construction", ""))


# --------------------------------------------------------------------------
# min-side constructions on normalized, R-free terms


def _nat(e):
    return SuccNat(), PredClampNat(), 1, "successor / clamped predecessor"


def _dense_tail(e, parts, fold):
    alpha, beta, z, how = fold(chain_sum(*parts[:-1]))
    if len(parts) > 2:
        k = len(parts) - 1
        alpha, beta = conjugate_regroup(e, k, alpha), conjugate_regroup(e, k, beta)
        z = min_element(e)
    return alpha, beta, z, how


def _ladder_fold(Y):
    """``Y + Q`` by exact rational arithmetic: fold Q below phi onto ``Y``."""
    if Y == Finite(1):
        raise ProgramError("1 + Q uses the back-and-forth fold")
    G = Sum(Y, Q)
    zy = min_element(Y)
    into_q = Inject(G, "R")
    alpha = Compose(LadderSection(Y), into_q)
    beta = SumPiece(G, G, Const(Y, G, Tagged("L", zy)), LadderFold(Y))
    return alpha, beta, Tagged("L", zy), "dense tail Y + Q via rational ladders"


def _product_fold(Y):
    """``Y + Q``: fold ``Y x Q + Q`` onto ``Y + Q``.

    ``Q`` is identified with ``W = Y x Q + Q`` by back-and-forth; ``beta`` sends
    ``Y`` to ``z``, the block ``{y} x Q`` of ``W`` to ``y`` and the last ``Q``
    onto itself, and ``alpha`` picks the points ``(y, 0)`` and the last ``Q``.
    """
    G = Sum(Y, Q)
    YQ = LexProd(Y, Q)
    W = Sum(YQ, Q)
    to_w, from_w = CantorIso(Q, W), CantorIso(Q, W, "backward")
    zy = min_element(Y)
    into_q = Inject(G, "R")
    alpha = SumPiece(G, G,
                     Compose(PairConst(Y, Q, Q_ZERO), Inject(W, "L"), from_w, into_q),
                     Compose(Inject(W, "R"), from_w, into_q))
    fold = SumPiece(W, G, Compose(ProjectFirst(YQ), Inject(G, "L")), into_q)
    beta = SumPiece(G, G, Const(Y, G, Tagged("L", zy)), Compose(to_w, fold))
    return alpha, beta, Tagged("L", zy), "dense tail Y + Q via back-and-forth"


def _peel(e, parts):
    """``k + C`` from a witness of ``C``: shift ``C`` by ``alpha^k`` and park the
    prefix on the first ``k`` points of the ``alpha``-orbit of ``min C``."""
    k = parts[0].k
    rest = chain_sum(*parts[1:])
    a1, b1, z1, how = _min_witness(rest)
    orbit, y = [], z1
    for _ in range(k):
        orbit.append(Tagged("R", y))
        y = a1._apply(y)
    alpha = SumPiece(e, e, TableMap(Finite(k), e, tuple(orbit)),
                     Compose(Power(a1, k), Inject(e, "R")))
    beta = SumPiece(e, e, Const(Finite(k), e, Tagged("L", 1)), PrefixQuotient(b1, z1, k))
    return alpha, beta, Tagged("L", 1), f"finite prefix {k} peeled onto [{how}]"


def _prefix(e, parts, k):
    A = chain_sum(*parts[:k])
    a1, b1, _, how = _min_witness(A)
    G = Sum(A, chain_sum(*parts[k:]))
    alpha, beta = ExtendIdentity(G, a1), ExtendIdentity(G, b1)
    if k > 1:
        alpha, beta = conjugate_regroup(e, k, alpha), conjugate_regroup(e, k, beta)
    return alpha, beta, min_element(e), f"identity beyond the initial part [{how}]"


def _product(e):
    C, D = e.left, e.right
    try:
        a1, b1, z1, how = _min_witness(D)
        return (OnFactor(e, a1, "second"), OnFactor(e, b1, "second"), (min_element(C), z1),
                f"second coordinate [{how}]")
    except WitnessError:
        pass
    if C == Nat():
        mb = min_element(D)
        beta = GuardedCompose((2, mb), OnFactor(e, PredClampNat(), "first"), (1, mb))
        return OnFactor(e, SuccNat(), "first"), beta, (1, mb), "shift the first coordinate"
    raise WitnessError(f"no construction for the product {format_chain(e)}")


def _min_witness(e):
    if e == Nat():
        return _nat(e)
    if min_element(e) is None or attributes(e).is_finite:
        raise WitnessError(f"{format_chain(e)} has no min-side witness")
    if isinstance(e, LexProd):
        return _product(e)
    parts = summands(e)
    if len(parts) >= 2:
        # cheapest first: ladders, then the structural routes, then back-and-forth
        dense = parts[-1] == Q
        if dense:
            try:
                return _dense_tail(e, parts, _ladder_fold)
            except ProgramError:
                pass
        if isinstance(parts[0], Finite):
            try:
                return _peel(e, parts)
            except WitnessError:
                pass
        for k in range(1, len(parts)):
            try:
                return _prefix(e, parts, k)
            except WitnessError:
                continue
        if dense:
            return _dense_tail(e, parts, _product_fold)
    raise WitnessError(f"no executable construction for {format_chain(e)}")


def build_witness(e, side: str = "min") -> WitnessPair:
    """Executable witness for a chain the rules decide as shiftable on ``side``."""
    if side not in ("min", "max"):
        raise WitnessError("side must be min or max")
    if contains_real(e):
        raise WitnessError("chains containing R have no executable elements")
    v = shiftable(e, side)
    if v.answer != YES:
        raise WitnessError(f"{side}-shiftability is {v.answer}, not Yes")
    frame = e if side == "min" else Rev(e)
    n = normalize(frame)
    alpha, beta, z, how = _min_witness(n)
    if side == "min" and n == e:
        return WitnessPair(e, side, alpha, beta, z, how)
    rev = side == "max"
    return WitnessPair(e, side, Transport(e, alpha, rev), Transport(e, beta, rev),
                       from_normal(frame, z), how + (" (reversed)" if rev else ""))


# --------------------------------------------------------------------------
# verification


def endpoint_report(w: WitnessPair) -> Report:
    e = w.chain
    rep = Report("endpoint moved", 1, "exact")
    end = min_element(e) if w.side == "min" else max_element(e)
    if end is None or cmp(e, end, w.z) != 0:
        rep.add("z is not the endpoint on this side")
        return rep
    moved = w.alpha._apply(w.z)
    c = cmp(e, moved, w.z)
    if (w.side == "min" and c <= 0) or (w.side == "max" and c >= 0):
        rep.add(f"z alpha = {format_element(e, moved)} does not move past z")
    return rep


def verify_witness(w: WitnessPair, spec: SampleSpec = SampleSpec(), inverse_spec: SampleSpec = None) -> list:
    """Monotonicity of both maps, ``alpha beta = 1`` on samples, and the endpoint shift."""
    inverse_spec = inverse_spec or spec
    return [
        _named(check_monotone(w.alpha, spec), "alpha monotone"),
        _named(check_monotone(w.beta, spec), "beta monotone"),
        check_right_inverse(w.alpha, w.beta, inverse_spec),
        endpoint_report(w),
    ]


def _named(rep: Report, name: str) -> Report:
    rep.name = name
    return rep


# --------------------------------------------------------------------------
# the three equivalent forms


@dataclass(frozen=True, eq=False)
class WitnessForms:
    """Surjection of ``C`` minus ``z`` onto ``C`` (form 1), a surjection whose
    fibre over ``z`` is not just ``{z}`` (form 2) and a right unit moving ``z`` (form 3)."""

    chain: object
    z: object
    restriction: EndoProgram  # form 1: beta, read on C without z
    beta: EndoProgram  # form 2
    alpha: EndoProgram  # form 3

    def to_json(self) -> dict:
        e = self.chain
        return {"chain": format_chain(e), "z": format_element(e, self.z),
                "form1": {"map": self.restriction.to_json(), "domain": "chain without z"},
                "form2": self.beta.to_json(), "form3": self.alpha.to_json()}

    def check_form1(self, spec: SampleSpec = SampleSpec()) -> Report:
        """Sampled check that every point has a ``beta``-preimage other than ``z``."""
        e = self.chain
        rep = Report("onto from C without z", 0, spec.describe())
        for y in spec.points(e):
            x = self.alpha._apply(y)
            rep.checked += 1
            if cmp(e, x, self.z) == 0 or cmp(e, self.beta._apply(x), y) != 0:
                rep.add(f"no preimage found for {format_element(e, y)}")
        return rep


def witness_form_convert(e, form: int, program: EndoProgram, z=None) -> WitnessForms:
    """Produce the other equivalent forms from a form-2 surjection or a form-3 right unit.

    ``z`` defaults to the minimum of ``e``.
    """
    z = min_element(e) if z is None else z
    if z is None:
        raise WitnessError("the chain has no minimum")
    if form == 2:
        beta = program
        alpha = LeftInverseChoice(beta, avoid=z)
        if cmp(e, alpha._apply(z), z) == 0:
            raise WitnessError("the fibre over z is just {z}")
        return WitnessForms(e, z, beta, beta, alpha)
    if form == 3:
        alpha = program
        if cmp(e, alpha._apply(z), z) == 0:
            raise WitnessError("the right unit fixes z")
        beta = RightInverseFromImage(alpha)
        return WitnessForms(e, z, beta, beta, alpha)
    raise WitnessError("form must be 2 or 3")
