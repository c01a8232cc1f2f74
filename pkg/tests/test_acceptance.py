"""The twelve acceptance criteria, one test each, at their stated budgets.

Every test records a PASS/FAIL line in ``RESULTS``; the conftest prints them
in the terminal summary.
"""
import itertools
import json
import time
from contextlib import contextmanager

import numpy as np

from chaindiam.chains import Finite, LexProd, Rat, Sum, normalize
from chaindiam.classifier import diameters, prop51_sequence, theoremA_sequence
from chaindiam.corpus import random_chains
from chaindiam.dsl import format_chain, parse_chain
from chaindiam.endo import (
    CantorIso,
    PredClampNat,
    SampleSpec,
    SuccNat,
    TableMap,
    check_monotone,
    check_right_inverse,
    is_regular_finite,
    right_inverse_value_report,
)
from chaindiam.finmon import PairSet, congruence_closure, constant, diameter, distance_matrix, end_monoid
from chaindiam.witness import build_witness, endpoint_report

from . import oracles

RESULTS = {}


@contextmanager
def criterion(num: int, title: str, limit: float = None):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        dt = time.perf_counter() - t0
        if status == "PASS" and limit is not None and dt >= limit:
            status = "FAIL"
        budget = f", limit {limit:g}s" if limit is not None else ""
        RESULTS[num] = f"criterion {num:2d}: {status}  {title} ({dt:.2f}s{budget})"
        print(RESULTS[num])
    if limit is not None:
        assert dt < limit, f"took {dt:.2f}s, limit {limit}s"


# 1 ------------------------------------------------------------------------


def test_c01_end_monoid_sizes():
    with criterion(1, "|End(n)| = 1, 3, 10, 35, 126, 462 for n = 1..6", limit=5):
        sizes = [end_monoid(n).size for n in range(1, 7)]
        brute = [len(oracles.monotone_maps(n)) for n in range(1, 7)]
        assert sizes == brute == [1, 3, 10, 35, 126, 462]


# 2 ------------------------------------------------------------------------


def test_c02_full_generating_set_has_diameter_one():
    with criterion(2, "diameter(End(n), SxS) = 1 on both sides, n = 2..5", limit=10):
        for n in range(2, 6):
            S = end_monoid(n)
            for side in ("left", "right"):
                assert diameter(S, PairSet.everything(), side) == 1, (n, side)


# 3 ------------------------------------------------------------------------


def test_c03_left_diameter_two():
    with criterion(3, "left diameter w.r.t. {id, c1} is exactly 2, n = 2..5"):
        for n in range(2, 6):
            S = end_monoid(n)
            one, c1 = S.identity, constant(S, 1)
            for t, f in itertools.product(range(S.size), repeat=2):
                seq = theoremA_sequence(n, t, f, 1, S)
                assert seq.valid and len(seq) <= 2, (n, S.labels[t], S.labels[f])
            assert diameter(S, PairSet.square([one, c1]), "left") == 2


# 4 ------------------------------------------------------------------------


def test_c04_right_sequences_of_length_three():
    with criterion(4, "validated length-3 right sequences for all pairs, U = {id, c1, cn}, n = 2..5", limit=30):
        for n in range(2, 6):
            S = end_monoid(n)
            for t, f in itertools.product(range(S.size), repeat=2):
                seq = prop51_sequence(n, t, f, 1, n, S)
                assert seq.valid and len(seq) == 3, (n, S.labels[t], S.labels[f])
            U = PairSet.square([S.identity, constant(S, 1), constant(S, n)])
            assert diameter(S, U, "right") <= 3


# 5 ------------------------------------------------------------------------


def test_c05_end2_congruences():
    with criterion(5, "End(2): right <(id, c1)> has blocks {id, c1}, {c2}; left is universal"):
        S = end_monoid(2)
        one, c1, c2 = S.index((1, 2)), S.index((1, 1)), S.index((2, 2))
        right = congruence_closure(S, PairSet.square([one, c1]), "right")
        assert sorted(sorted(b) for b in right.blocks()) == sorted([sorted([one, c1]), [c2]])
        assert not right.is_universal
        assert congruence_closure(S, PairSet.square([one, c1]), "left").is_universal


# 6 ------------------------------------------------------------------------

TABLE = {
    "N": (2, 2), "N*": (2, 2), "Z": (2, 3), "Q": (2, 3), "R": (2, 3),
    "1 + Q": (2, 2), "Q + 1": (2, 2), "1 + N* + Q": (2, 2), "1 + Z + Q": (2, 2), "1 + R": (2, 2),
    "1 + Z": (2, 3), "Z + 1": (2, 3), "1 + Z + 1": (2, 3), "1 + Z + R": (2, 3), "1 + Z + R + Z + 1": (2, 3),
    "1": (0, 0), "2": (1, 1), "3": (1, 1), "7": (1, 1), "50": (1, 1),
}


def test_c06_classification_table():
    with criterion(6, f"classification table ({len(TABLE)} rows)"):
        got = {text: (diameters(parse_chain(text)).left, diameters(parse_chain(text)).right) for text in TABLE}
        assert got == TABLE


# 7 ------------------------------------------------------------------------

WITNESS_CASES = [
    ("N", "min"), ("1 + Q", "min"), ("1 + Z + Q", "min"),
    ("1 + N", "min"), ("2 + N", "min"), ("3 + N", "min"),
    ("N*", "max"), ("Q + 1", "max"), ("Q + Z + 1", "max"),
    ("N* + 1", "max"), ("N* + 2", "max"), ("N* + 3", "max"),
]


def _witness_reports(text, side):
    e = parse_chain(text)
    w = build_witness(e, side)
    exact = normalize(e) in (parse_chain("N"), parse_chain("N*"))
    inverse = SampleSpec(10_000, hi=10_000) if exact else SampleSpec(1000)
    reports = [check_monotone(w.alpha, SampleSpec(1000)), check_monotone(w.beta, SampleSpec(1000)),
               check_right_inverse(w.alpha, w.beta, inverse), endpoint_report(w)]
    return w, reports


def test_c07_witness_soundness():
    with criterion(7, "witnesses for N, 1+Q, 1+Z+Q, k+N (k <= 3) and their duals verify; deterministic"):
        for text, side in WITNESS_CASES:
            w, reports = _witness_reports(text, side)
            assert all(r.ok for r in reports), (text, side, [str(r) for r in reports])
            if text in ("N", "N*"):
                assert reports[2].checked == 10_000
            w2, reports2 = _witness_reports(text, side)
            assert json.dumps(w.to_json()) == json.dumps(w2.to_json())
            assert [r.to_json() for r in reports] == [r.to_json() for r in reports2]


# 8 ------------------------------------------------------------------------


def test_c08_nearest_image_point():
    with criterion(8, "x beta alpha is the nearest image point: successor pair and 1+Q witness, 10^3 samples"):
        rep = right_inverse_value_report(SuccNat(), PredClampNat(), SampleSpec(1000))
        assert rep.ok and rep.checked == 1000
        w = build_witness(parse_chain("1 + Q"), "min")
        rep = right_inverse_value_report(w.alpha, w.beta, SampleSpec(1000))
        assert rep.ok and rep.checked == 1000


# 9 ------------------------------------------------------------------------


def test_c09_regularity_oracle():
    with criterion(9, "regularity test agrees with exhaustive search over End(n), n = 2..4"):
        for n in range(2, 5):
            for vals in oracles.monotone_maps(n):
                assert is_regular_finite(TableMap(Finite(n), Finite(n), vals)) == oracles.is_regular(vals)


# 10 -----------------------------------------------------------------------


def test_c10_back_and_forth():
    with criterion(10, "back-and-forth Q <-> Q-part of 1+Q: inverse both ways and monotone, 10^3 samples"):
        W = Sum(LexProd(Finite(1), Rat()), Rat())
        fwd, back = CantorIso(Rat(), W), CantorIso(Rat(), W, "backward")
        spec = SampleSpec(1000)
        for rep in (check_right_inverse(fwd, back, spec), check_right_inverse(back, fwd, spec),
                    check_monotone(fwd, spec), check_monotone(back, spec)):
            assert rep.ok, str(rep)


# 11 -----------------------------------------------------------------------


def test_c11_metric():
    with criterion(11, "distance on End(3) is symmetric and satisfies the triangle inequality (3 generating sets)"):
        S = end_monoid(3)
        gensets = [PairSet.square([S.identity, constant(S, 1)]),
                   PairSet.square([S.identity, constant(S, 1), constant(S, 3)]),
                   PairSet.everything()]
        for U in gensets:
            for side in ("left", "right"):
                D = distance_matrix(S, U, side)
                assert np.array_equal(D, D.T)
                assert (D[:, None, :] <= D[:, :, None] + D[None, :, :]).all()


# 12 -----------------------------------------------------------------------


def test_c12_parser_round_trip():
    with criterion(12, "parser round trip on 100 seeded random expressions, byte exact"):
        terms = random_chains(100, seed=42)
        for e in terms:
            text = format_chain(e)
            back = parse_chain(text)
            assert back == e and format_chain(back) == text
