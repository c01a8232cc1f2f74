import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaindiam.finmon import (
    INF,
    BudgetError,
    FiniteMonoid,
    MonoidError,
    PairSet,
    congruence_closure,
    constant,
    diagonal_act_generated,
    diameter,
    distance,
    distance_matrix,
    end_monoid,
    right_diameter_exhaustive,
    validate_usequence,
)

from . import oracles


def ix(S, *labels):
    return [S.index(l) for l in labels]


# ---------------------------------------------------------------- End(n)


@pytest.mark.parametrize("n, want", [(1, 1), (2, 3), (3, 10), (4, 35), (5, 126), (6, 462)])
def test_end_sizes(n, want):
    S = end_monoid(n)
    assert S.size == want == math.comb(2 * n - 1, n - 1)
    assert sorted(S.labels) == oracles.monotone_maps(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_end_table_is_composition(n):
    S = end_monoid(n)
    for a, b in itertools.product(range(S.size), repeat=2):
        assert S.labels[S.mul(a, b)] == oracles.then(S.labels[a], S.labels[b])


def test_end_budget():
    with pytest.raises(BudgetError):
        end_monoid(8)
    with pytest.raises(MonoidError):
        end_monoid(0)


def test_table_validation():
    with pytest.raises(MonoidError):
        FiniteMonoid([[0, 1], [1, 1]], identity=1)  # identity law fails
    with pytest.raises(MonoidError):
        FiniteMonoid([[0, 1, 2], [1, 2, 0], [2, 0, 0]], identity=0)  # not associative
    with pytest.raises(MonoidError):
        FiniteMonoid([[0, 1], [1, 5]], identity=0)


def test_json_round_trip(end3):
    S = FiniteMonoid.from_json(end3.to_json())
    assert np.array_equal(S.table, end3.table) and S.labels == end3.labels and S.identity == end3.identity


# ---------------------------------------------------------------- congruences


def test_closure_end2_examples():
    S = end_monoid(2)
    one, c1, c2 = ix(S, (1, 2), (1, 1), (2, 2))
    right = congruence_closure(S, [(one, c1)], "right")
    assert sorted(map(sorted, right.blocks())) == sorted([sorted([one, c1]), [c2]])
    assert congruence_closure(S, [(one, c1)], "left").is_universal
    assert congruence_closure(S, PairSet.everything(), "right").is_universal


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("seed", range(6))
def test_closure_matches_fixpoint_oracle(end3, side, seed):
    rng = random.Random(seed)
    U = [tuple(rng.sample(range(end3.size), 2)) for _ in range(rng.randint(1, 2))]
    part = congruence_closure(end3, U, side)
    ref = oracles.closure(end3.labels, [(end3.labels[a], end3.labels[b]) for a, b in U], side)
    for a, b in itertools.product(range(end3.size), repeat=2):
        assert part.same(a, b) == ((end3.labels[a], end3.labels[b]) in ref)


@given(st.lists(st.tuples(st.integers(0, 34), st.integers(0, 34)), min_size=1, max_size=3),
       st.sampled_from(["left", "right"]), st.data())
@settings(max_examples=60)
def test_closure_is_a_congruence(end4, U, side, data):
    part = congruence_closure(end4, U, side)
    T = end4.table if side == "right" else end4.table.T
    blocks = part.blocks()
    for _ in range(20):
        blk = data.draw(st.sampled_from(blocks))
        a, b = data.draw(st.sampled_from(blk)), data.draw(st.sampled_from(blk))
        s = data.draw(st.integers(0, end4.size - 1))
        assert part.same(int(T[a, s]), int(T[b, s]))
    for u, v in U:
        assert part.same(u, v)


# ---------------------------------------------------------------- distances


def test_distance_end2_examples():
    S = end_monoid(2)
    one, c1, c2 = ix(S, (1, 2), (1, 1), (2, 2))
    U = PairSet.square([one, c1])
    assert distance(S, U, "left", one, c2) == 2
    assert distance(S, U, "right", one, c2) == INF
    for a in range(S.size):
        assert distance(S, U, "right", a, a) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("side", ["left", "right"])
def test_distance_matrix_matches_bfs_oracle(n, side):
    S = end_monoid(n)
    gens = [(1,) * n, tuple(range(1, n + 1)), (n,) * n]
    U = PairSet.square(ix(S, *gens))
    D = distance_matrix(S, U, side)
    pairs = [(S.labels[u], S.labels[v]) for u, v in U.pairs]
    for a in range(S.size):
        ref = oracles.distances_from(S.labels, pairs, side, S.labels[a])
        for b in range(S.size):
            assert D[a, b] == ref.get(S.labels[b], INF)


def test_distance_agrees_with_matrix(end3):
    U = PairSet.square(ix(end3, (1, 2, 3), (1, 1, 1)))
    D = distance_matrix(end3, U, "left")
    for a, b in itertools.product(range(end3.size), repeat=2):
        assert distance(end3, U, "left", a, b) == D[a, b]


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("k", range(3))
@pytest.mark.parametrize("side", ["left", "right"])
def test_distance_is_a_metric(n, k, side):
    S = end_monoid(n)
    rng = random.Random(k)
    V = rng.sample(range(S.size), min(S.size, k + 2))
    D = distance_matrix(S, PairSet.square(V), side)
    assert np.array_equal(D, D.T)
    assert (np.diag(D) == 0).all()
    # d(a, c) <= d(a, b) + d(b, c) for all a, b, c
    assert (D[:, None, :] <= D[:, :, None] + D[None, :, :]).all()


@given(st.lists(st.integers(0, 9), min_size=1, max_size=4), st.lists(st.integers(0, 9), max_size=3),
       st.sampled_from(["left", "right"]))
@settings(max_examples=100)
def test_more_generators_never_lengthen(end3, V, extra, side):
    small = distance_matrix(end3, PairSet.square(V), side)
    big = distance_matrix(end3, PairSet.square(V + extra), side)
    assert (big <= small).all()


# ---------------------------------------------------------------- diameters


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_diameters_by_construction(n):
    S = end_monoid(n)
    one, c1, cn = S.identity, constant(S, 1), constant(S, n)
    for side in ("left", "right"):
        assert diameter(S, PairSet.everything(), side) == 1
    assert diameter(S, PairSet.square([one, c1]), "left") == 2
    assert diameter(S, PairSet.square([one, c1, cn]), "right") <= 3


def test_right_diameter_exhaustive_small():
    assert right_diameter_exhaustive(end_monoid(1))[0] == 0
    value, V = right_diameter_exhaustive(end_monoid(2))
    assert value == 1 and diameter(end_monoid(2), PairSet.square(V), "right") == 1
    with pytest.raises(BudgetError):
        right_diameter_exhaustive(end_monoid(3), max_size=5)


def test_diagonal_act_examples():
    S = end_monoid(2)
    one, c1 = ix(S, (1, 2), (1, 1))
    assert diagonal_act_generated(S, PairSet.everything())
    assert not diagonal_act_generated(S, PairSet.of([(one, c1)]))
    trivial = FiniteMonoid([[0]], 0)
    assert diagonal_act_generated(trivial, PairSet.of([(0, 0)]))


def test_diagonal_act_matches_oracle(end3):
    # generated diagonal act <=> every pair is one step apart
    for V in itertools.combinations(range(end3.size), 2):
        U = PairSet.square(V)
        reached = {(oracles.then(end3.labels[u], end3.labels[s]), oracles.then(end3.labels[v], end3.labels[s]))
                   for u, v in U.pairs for s in range(end3.size)}
        assert diagonal_act_generated(end3, U) == (len(reached) == end3.size ** 2)


# ---------------------------------------------------------------- U-sequences


def test_usequence_trivial(end3):
    assert validate_usequence(end3, PairSet.of([]), "right", 2, 2, [])
    assert not validate_usequence(end3, PairSet.of([]), "right", 2, 3, [])


def test_usequence_rejects_bad_steps(end3):
    one, c1 = end3.identity, constant(end3, 1)
    U = PairSet.square([one, c1])
    theta = end3.index((1, 2, 2))
    # theta = 1 theta, then c1 theta = c1
    assert validate_usequence(end3, U, "right", theta, c1, [(one, c1, theta)])
    assert not validate_usequence(end3, U, "right", theta, c1, [(c1, one, theta)])
    with pytest.raises(MonoidError):
        validate_usequence(end3, U, "right", theta, c1, [(one, c1)])
