import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaindiam.chains import (
    ChainError,
    Finite,
    Int,
    Interval,
    LexProd,
    Nat,
    Rat,
    Sum,
    Tagged,
    cmp,
)
from chaindiam.endo import (
    CantorIso,
    CollapseToPoint,
    Compose,
    Const,
    Identity,
    Power,
    PredClampNat,
    ProgramError,
    SampleSpec,
    StepThreshold,
    SuccNat,
    TableMap,
    check_monotone,
    check_right_inverse,
    construct_left_inverse,
    is_regular_finite,
    is_right_unit_finite,
    lemma_shifting,
    program_from_json,
    right_inverse_value_check,
    right_inverse_value_report,
)
from chaindiam.witness import build_witness

from . import oracles

N, Z, Q = Nat(), Int(), Rat()
W = Sum(LexProd(Finite(1), Q), Q)  # the Q-part of 1 + Q, as a sum of two dense pieces
EMPTY = Finite(0)


# ---------------------------------------------------------------- apply


def test_apply_examples():
    assert SuccNat()(7) == 8
    assert PredClampNat()(1) == 1 and PredClampNat()(5) == 4
    step = StepThreshold(Finite(4), Finite(4), 1, 2, 3)
    assert [step(w) for w in (1, 2, 3, 4)] == [2, 3, 3, 3]


def test_apply_checks_membership():
    with pytest.raises(ChainError):
        SuccNat()(0)
    with pytest.raises(ChainError):
        TableMap(Finite(2), Finite(2), (1, 2))(3)


def test_table_map_must_fit():
    with pytest.raises(ProgramError):
        TableMap(Finite(3), Finite(2), (1, 2))
    with pytest.raises((ProgramError, ChainError)):
        TableMap(Finite(2), Finite(2), (1, 3))


def test_compose_type_checks():
    with pytest.raises(ProgramError):
        Compose(SuccNat(), Identity(Q))
    with pytest.raises(ProgramError):
        Compose()


def test_collapse_to_point():
    c = CollapseToPoint(Z, Interval(None, False, 0, True), 0)
    assert [c(x) for x in (-5, 0, 1, 7)] == [0, 0, 1, 7]


# ---------------------------------------------------------------- sampled checks


def test_monotone_examples():
    assert check_monotone(Identity(Q)).ok
    assert not check_monotone(StepThreshold(Finite(3), Finite(3), 1, 3, 1), SampleSpec(100)).ok
    iso = CantorIso(Q, W)
    assert check_monotone(iso, SampleSpec(1000)).ok
    assert check_monotone(CantorIso(Q, W, "backward"), SampleSpec(1000)).ok


def test_right_inverse_examples():
    rep = check_right_inverse(SuccNat(), PredClampNat(), SampleSpec(10_000, hi=10_000))
    assert rep.ok and rep.checked == 10_000
    assert check_right_inverse(Identity(Q), Identity(Q)).ok
    bad = check_right_inverse(PredClampNat(), SuccNat(), SampleSpec(10, hi=10))
    assert not bad.ok and "1" in bad.violations[0]


def test_reports_render():
    rep = check_monotone(Identity(N), SampleSpec(10))
    assert "no counterexample" in str(rep) and rep.to_json()["ok"]


# ---------------------------------------------------------------- finite chains


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_regular_matches_oracle(n):
    for vals in oracles.monotone_maps(n):
        alpha = TableMap(Finite(n), Finite(n), vals)
        assert is_regular_finite(alpha) == oracles.is_regular(vals)


def test_regular_examples():
    assert is_regular_finite(Const(Finite(3), Finite(3), 2))
    assert all(is_regular_finite(TableMap(Finite(4), Finite(4), v)) for v in oracles.monotone_maps(4))


def test_right_units():
    assert is_right_unit_finite(Identity(Finite(5)))
    assert not is_right_unit_finite(Const(Finite(2), Finite(2), 1))
    assert not is_right_unit_finite(TableMap(Finite(3), Finite(3), (1, 3, 3)))
    # on a finite chain only the identity has a right inverse
    for vals in oracles.monotone_maps(4):
        alpha = TableMap(Finite(4), Finite(4), vals)
        has_inverse = any(oracles.then(vals, b) == (1, 2, 3, 4) for b in oracles.monotone_maps(4))
        assert is_right_unit_finite(alpha) == has_inverse


def test_nearest_image_point():
    a, b = SuccNat(), PredClampNat()
    assert a(b(1)) == 2 and right_inverse_value_check(a, b, 1)
    assert all(right_inverse_value_check(a, b, x) for x in range(2, 50))
    assert right_inverse_value_report(a, b, SampleSpec(1000)).ok


def test_nearest_image_point_dense():
    w = build_witness(Sum(Finite(1), Q), "min")
    assert right_inverse_value_report(w.alpha, w.beta, SampleSpec(1000)).ok


def test_nearest_image_point_catches_bad_pair():
    # alpha = 2x on N, beta = x + 2: 3 beta alpha = 10, but 4 and 6 are closer image points
    double = TableMap(Finite(4), Finite(8), (2, 4, 6, 8))
    shift = TableMap(Finite(8), Finite(4), (1, 1, 2, 2, 3, 3, 4, 4))
    assert right_inverse_value_check(double, shift, 3)
    far = TableMap(Finite(8), Finite(4), (1, 1, 1, 1, 1, 1, 4, 4))
    assert not right_inverse_value_check(double, far, 5)


# ---------------------------------------------------------------- left inverses


def test_left_inverse_of_pred_clamp():
    beta = PredClampNat()
    alpha = construct_left_inverse(beta)
    assert alpha(1) == 1 and alpha(5) == 6
    assert check_right_inverse(alpha, beta, SampleSpec(1000)).ok
    assert check_monotone(alpha, SampleSpec(500)).ok


def test_left_inverse_trivial_and_errors():
    assert isinstance(construct_left_inverse(Identity(Q)), Identity)
    with pytest.raises(ProgramError):
        construct_left_inverse(TableMap(Finite(3), Finite(3), (1, 1, 2)))


def test_left_inverse_finite_surjection():
    beta = TableMap(Finite(3), Finite(2), (1, 1, 2))
    alpha = construct_left_inverse(beta)
    assert [beta(alpha(y)) for y in (1, 2)] == [1, 2]
    assert [alpha(y) for y in (1, 2)] == [1, 3]


# ---------------------------------------------------------------- combinators


NAT_MAPS = [SuccNat(), PredClampNat(), Identity(N), Const(N, N, 3),
            StepThreshold(N, N, 5, 2, 7), Power(SuccNat(), 2)]


@given(st.sampled_from(NAT_MAPS), st.sampled_from(NAT_MAPS), st.sampled_from(NAT_MAPS),
       st.lists(st.integers(1, 10_000), min_size=1, max_size=30))
@settings(max_examples=200)
def test_compose_is_associative(p, q, r, xs):
    left, right = Compose(Compose(p, q), r), Compose(p, Compose(q, r))
    for x in xs:
        assert left(x) == right(x) == r(q(p(x)))


@pytest.mark.parametrize("k", [1, 2, 5])
def test_power_matches_repeated_composition(k):
    for p in (SuccNat(), PredClampNat(), StepThreshold(N, N, 3, 1, 9)):
        power = Power(p, k)
        rep = Compose(*([p] * k))
        for x in SampleSpec(500).points(N):
            assert power(x) == rep(x)


def test_power_needs_positive_exponent():
    with pytest.raises(ProgramError):
        Power(SuccNat(), 0)


def test_cantor_iso_round_trips():
    fwd, back = CantorIso(Q, W), CantorIso(Q, W, "backward")
    spec = SampleSpec(1000)
    assert check_right_inverse(fwd, back, spec).ok
    assert check_right_inverse(back, fwd, spec).ok


def test_cantor_iso_rejects_non_dense():
    with pytest.raises(ProgramError):
        CantorIso(Q, Sum(Finite(1), Q))


def test_programs_survive_json():
    w = build_witness(Sum(Finite(1), Sum(Z, Q)), "min")
    for p in (w.alpha, w.beta, Power(SuccNat(), 3), StepThreshold(N, N, 2, 1, 4)):
        again = program_from_json(p.to_json())
        assert again.to_json() == p.to_json()
        for x in SampleSpec(200).points(p.source):
            assert cmp(p.target, again(x), p(x)) == 0


# ---------------------------------------------------------------- shifting lemma


def test_shifting_identity_case():
    assert isinstance(lemma_shifting(EMPTY, Z, EMPTY), Identity)


def test_shifting_unbounded_above():
    C = Finite(2)
    th = lemma_shifting(C, Z, EMPTY, K=[1, 2])
    src = Sum(C, Sum(Z, EMPTY))
    assert th(Tagged("L", 1)) != th(Tagged("L", 2))
    assert check_monotone(th, SampleSpec(1000)).ok
    ds = SampleSpec(1000).points(Z)
    top = max(th(Tagged("R", Tagged("L", d))) for d in ds)
    assert top >= max(ds)
    assert th.source == src


def test_shifting_unbounded_below():
    th = lemma_shifting(EMPTY, Q, Finite(1), L=[1])
    assert check_monotone(th, SampleSpec(1000)).ok
    qs = SampleSpec(1000).points(Q)
    bottom = min(th(Tagged("R", Tagged("L", q))) for q in qs)
    assert bottom <= min(qs)


def test_shifting_needs_infinite_middle():
    with pytest.raises(ProgramError):
        lemma_shifting(Finite(1), Finite(3), EMPTY)


def test_shifting_injective_on_marked_points():
    C, E = Finite(3), Finite(2)
    th = lemma_shifting(C, N, E, K=[1, 2, 3], L=[1, 2])
    marked = [Tagged("L", k) for k in (1, 2, 3)] + [Tagged("R", Tagged("R", k)) for k in (1, 2)]
    images = [th(x) for x in marked]
    assert len(set(images)) == len(images)
    assert all(a < b for a, b in itertools.pairwise(images))
    assert check_monotone(th, SampleSpec(1000)).ok
