import json

import pytest

from chaindiam.chains import Finite, Nat, Rat, Sum, Tagged, cmp, max_element, min_element
from chaindiam.dsl import parse_chain
from chaindiam.endo import Identity, PredClampNat, SampleSpec, SuccNat
from chaindiam.witness import (
    WitnessError,
    WitnessPair,
    build_witness,
    endpoint_report,
    verify_witness,
    witness_form_convert,
)

MIN_CHAINS = ["N", "1 + Q", "1 + Z + Q", "1 + N* + Q", "2 + N", "3 + N", "3 + Q", "1 + N + Q", "1 + Q + 1 + Q",
              "2 + Z + Q", "N + Z", "N x 2", "2 x N", "3 x (1 + Q)", "1 + Q + Z", "2 + N* + 1 + Q", "rev(Q + 3)"]
MAX_CHAINS = ["N*", "Q + 1", "Q + Z + 1", "N* + 2", "Q + N* + 1", "rev(N)", "Z + N*"]


def passes(w, spec):
    reports = verify_witness(w, spec)
    return all(r.ok for r in reports), [str(r) for r in reports]


@pytest.mark.parametrize("text", MIN_CHAINS)
def test_min_witnesses_verify(text):
    w = build_witness(parse_chain(text), "min")
    ok, why = passes(w, SampleSpec(300))
    assert ok, why
    assert w.z == min_element(w.chain)


@pytest.mark.parametrize("text", MAX_CHAINS)
def test_max_witnesses_verify(text):
    w = build_witness(parse_chain(text), "max")
    ok, why = passes(w, SampleSpec(300))
    assert ok, why
    assert w.z == max_element(w.chain)
    assert cmp(w.chain, w.alpha(w.z), w.z) < 0


def test_nat_witness_is_successor():
    w = build_witness(Nat(), "min")
    assert isinstance(w.alpha, SuccNat) and isinstance(w.beta, PredClampNat)
    assert w.z == 1 and w.alpha(1) == 2


def test_dense_witness_moves_the_point_into_q():
    w = build_witness(Sum(Finite(1), Rat()), "min")
    assert w.z == Tagged("L", 1)
    assert w.alpha(w.z).side == "R"
    assert "back-and-forth" in w.construction


def test_peeled_witness():
    w = build_witness(parse_chain("2 + N"), "min")
    assert "peeled" in w.construction
    assert [w.beta(w.alpha(x)) for x in SampleSpec(50).points(w.chain)] == SampleSpec(50).points(w.chain)


@pytest.mark.parametrize("text, side", [("Z", "min"), ("Q", "max"), ("1 + Z", "min"), ("1 + R", "min"),
                                        ("5", "min"), ("N", "max")])
def test_no_witness(text, side):
    with pytest.raises(WitnessError):
        build_witness(parse_chain(text), side)


def test_bad_side():
    with pytest.raises(WitnessError):
        build_witness(Nat(), "left")


def test_json_round_trip_and_determinism():
    for text in ("1 + Z + Q", "Q + 1", "2 + N"):
        side = "max" if text.endswith("1") else "min"
        w = build_witness(parse_chain(text), side)
        doc = w.to_json()
        assert json.dumps(doc) == json.dumps(build_witness(parse_chain(text), side).to_json())
        again = WitnessPair.from_json(json.dumps(doc))
        for x in SampleSpec(200).points(w.chain):
            assert cmp(w.chain, again.alpha(x), w.alpha(x)) == 0
            assert cmp(w.chain, again.beta(x), w.beta(x)) == 0


def test_endpoint_report_detects_a_fixed_point():
    w = build_witness(Nat(), "min")
    lazy = WitnessPair(w.chain, "min", Identity(Nat()), Identity(Nat()), 1)
    assert not endpoint_report(lazy).ok
    assert endpoint_report(w).ok


def test_form_two_to_three():
    forms = witness_form_convert(Nat(), 2, PredClampNat())
    assert forms.alpha(1) == 2
    assert [forms.alpha(x) for x in range(2, 8)] == list(range(3, 9))
    assert forms.check_form1(SampleSpec(500)).ok


def test_form_three_to_two():
    forms = witness_form_convert(Nat(), 3, SuccNat())
    assert [forms.beta(x) for x in (1, 2, 3, 4, 5)] == [1, 1, 2, 3, 4]
    assert forms.check_form1(SampleSpec(500)).ok
    assert "form1" in forms.to_json()


def test_form_conversion_dense():
    w = build_witness(Sum(Finite(1), Rat()), "min")
    forms = witness_form_convert(w.chain, 2, w.beta)
    assert forms.alpha(w.z).side == "R"
    assert forms.check_form1(SampleSpec(200)).ok


@pytest.mark.parametrize("form", [2, 3])
def test_form_conversion_rejects_identity(form):
    with pytest.raises(WitnessError):
        witness_form_convert(Nat(), form, Identity(Nat()))


def test_form_conversion_errors():
    with pytest.raises(WitnessError):
        witness_form_convert(Nat(), 4, SuccNat())
    with pytest.raises(WitnessError):
        witness_form_convert(parse_chain("Z"), 3, Identity(parse_chain("Z")))
