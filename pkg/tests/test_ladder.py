from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaindiam.chains import Rat, Sum
from chaindiam.dsl import parse_chain
from chaindiam.endo import LadderFold, LadderSection, ProgramError, SampleSpec, check_monotone, check_right_inverse
from chaindiam.endo.ladder import below_phi, layout, lower_conv, tail_embed, tail_unembed, upper_conv

rationals = st.fractions(min_value=-10**4, max_value=10**4, max_denominator=10**6)

LADDER_CHAINS = ["1 + Z", "1 + N*", "1 + N", "2 + Z + 3", "1 + Q + 1", "N*", "Z", "3", "1 + N* + 2 + N",
                 "1 + Q", "3 + Q", "Q", "Q + 1", "1 + Q + N"]


def test_convergents_bracket_phi():
    for k in range(30):
        assert below_phi(lower_conv(k)) and not below_phi(upper_conv(k))
        assert lower_conv(k) < lower_conv(k + 1) and upper_conv(k + 1) < upper_conv(k)
    assert upper_conv(0) == 2 and lower_conv(0) == 1


@given(rationals)
@settings(max_examples=1000)
def test_tail_embedding_round_trip(s):
    q = tail_embed(s)
    assert not below_phi(q)
    assert tail_unembed(q) == s


@given(rationals, rationals)
@settings(max_examples=500)
def test_tail_embedding_monotone(s, t):
    assert (s < t) == (tail_embed(s) < tail_embed(t))


@given(rationals.filter(lambda q: not below_phi(q)))
@settings(max_examples=500)
def test_tail_unembed_inverts_on_the_tail(q):
    assert tail_embed(tail_unembed(q)) == q


@pytest.mark.parametrize("text", LADDER_CHAINS)
def test_fold_and_section(text):
    Y = parse_chain(text)
    fold, sec = LadderFold(Y), LadderSection(Y)
    spec = SampleSpec(1000)
    assert check_monotone(fold, spec).ok
    assert check_monotone(sec, spec).ok
    assert check_right_inverse(sec, fold, spec).ok


@pytest.mark.parametrize("text", ["N + N*", "N + Q", "1 + Z + Q", "N x N", "1 + R", "Q + Q"])
def test_layout_refuses(text):
    with pytest.raises(ProgramError):
        layout(parse_chain(text))


def test_fold_hits_both_sides():
    Y = parse_chain("1 + Z")
    fold = LadderFold(Y)
    assert fold(Fraction(-1000)).side == "L"
    assert fold(Fraction(3)).side == "R"
    assert fold(Fraction(2)).value == 0
    assert LadderSection(Y).target == Rat() and fold.target == Sum(Y, Rat())
