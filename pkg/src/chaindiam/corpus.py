"""Seeded random chain terms and a regression run over them."""
from __future__ import annotations

import random

from .chains import (
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
    normalize,
)
from .dsl import format_chain
from .shiftability import NO, UNKNOWN, YES, applicable_rules, shiftable

_ATOMS = (Nat(), NatStar(), Int(), Rat(), Real())


def random_chain(rng: random.Random, depth: int = 3, reals: bool = True) -> ChainExpr:
    """A random term; ``depth`` bounds the nesting of sums, products and reversals."""
    r = rng.random()
    if depth <= 0 or r < 0.3:
        if rng.random() < 0.35:
            return Finite(rng.randint(0, 4))
        atoms = _ATOMS if reals else _ATOMS[:-1]
        return rng.choice(atoms)
    if r < 0.75:
        return Sum(random_chain(rng, depth - 1, reals), random_chain(rng, depth - 1, reals))
    if r < 0.9:
        return LexProd(random_chain(rng, depth - 1, reals), random_chain(rng, depth - 1, reals))
    return Rev(random_chain(rng, depth - 1, reals))


def random_chains(count: int, seed: int = 42, depth: int = 3, reals: bool = True) -> list:
    rng = random.Random(seed)
    return [random_chain(rng, depth, reals) for _ in range(count)]


def conflicts(e: ChainExpr) -> list:
    """Rules that fire with opposite answers on ``e`` (min side); empty when consistent."""
    found = applicable_rules(e)
    answers = set(found.values())
    return sorted(found) if YES in answers and NO in answers else []


def run_corpus(count: int, seed: int = 42, depth: int = 3) -> dict:
    """Shiftability verdicts on a random corpus, with rule-consistency checks."""
    from .classifier import diameters

    rows, tally, bad = [], {YES: 0, NO: 0, UNKNOWN: 0}, 0
    for e in random_chains(count, seed, depth):
        n = normalize(e)
        row = {"expr": format_chain(e), "normal": format_chain(n)}
        for side in ("min", "max", "either"):
            row[side] = shiftable(n, side).answer
        tally[row["either"]] += 1
        d = diameters(n)
        row["left"], row["right"] = d.left, d.right
        clash = conflicts(n) or conflicts(Rev(n))
        if clash:
            bad += 1
            row["conflict"] = clash
        rows.append(row)
    return {"count": count, "seed": seed, "either": tally,
            "unknown_rate": tally[UNKNOWN] / count if count else 0.0,
            "conflicts": bad, "terms": rows}
