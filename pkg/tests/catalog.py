"""Shared term catalogs and the seeded random term generator."""

import random

from endscope.ordinals import ONE, OMEGA, ZERO, add, from_nat, mul_nat, omega_pow
from endscope.parser import parse_term
from endscope.terms import Color, Ord, Pt, Sum, has_genus, mk_cantor, mk_mix

# a broad catalog of small terms (size <= 12) covering every constructor
CATALOG_SOURCES = [
    "pt",
    "pt^g",
    "ord(1)",
    "ord(w^(0)*3)",
    "ord(w)",
    "ord(w*2)",
    "ord(w+1)",
    "ord(w^(2))",
    "ord(w^(2)*2+w)",
    "ord(w^(3))",
    "ord(w^(w))",
    "ord(w^(w+1)*2)",
    "cantor()",
    "cantor^g()",
    "cantor(pt)",
    "cantor^g(pt^g)",
    "cantor(ord(w))",
    "cantor^g(cantor())",
    "cantor(pt,ord(w))",
    "cantor^g(ord(w^(2)))",
    "mix(pt;planar)",
    "mix(pt^g;g)",
    "mix(ord(w);planar)",
    "mix(cantor();g)",
    "mix(cantor^g(),cantor();g)",
    "mix(pt,pt^g;g)",
    "mix(ord(w),pt^g;g)",
    "mix(mix(pt^g;g);g)",
    "mix(cantor(ord(w));g)",
    "sum(pt,pt)",
    "sum(ord(w),cantor())",
    "sum(pt^g,cantor^g())",
    "sum(ord(w^(2)),ord(w))",
    "sum(mix(pt^g;g),cantor())",
    "sum(cantor^g(pt),ord(w+1))",
]

# countable all-planar terms with ranks 0..3 for derivative cross-checks
COUNTABLE_SOURCES = [
    "pt",
    "ord(1)",
    "sum(pt,pt)",
    "ord(w^(0)*4)",
    "ord(w)",
    "ord(w*3)",
    "ord(w+1)",
    "ord(w+2)",
    "ord(w*2+1)",
    "mix(pt;planar)",
    "sum(ord(w),pt)",
    "sum(ord(w),ord(w))",
    "ord(w^(2))",
    "ord(w^(2)*2)",
    "ord(w^(2)+w)",
    "mix(ord(w);planar)",
    "sum(ord(w^(2)),pt)",
    "ord(w^(3))",
    "ord(w^(3)+w^(2))",
    "mix(ord(w^(2));planar)",
]


def catalog():
    return [parse_term(s) for s in CATALOG_SOURCES]


def countable_catalog():
    return [parse_term(s) for s in COUNTABLE_SOURCES]


_RANKS = [
    ZERO,
    ONE,
    from_nat(2),
    from_nat(3),
    OMEGA,
    add(OMEGA, ONE),
    mul_nat(OMEGA, 2),
    omega_pow(from_nat(2)),
    omega_pow(OMEGA),
]


def random_term(rng: random.Random, budget: int = 5):
    if budget <= 1:
        kind = rng.choice(["pt", "pt", "ord"])
    else:
        kind = rng.choice(["pt", "ord", "mix", "cantor", "sum"])
    if kind == "pt":
        return Pt(rng.choice([Color.PLANAR, Color.GENUS]))
    if kind == "ord":
        return Ord(rng.choice(_RANKS), rng.randint(1, 3))
    if kind == "mix":
        comps = [random_term(rng, budget - 1) for _ in range(rng.randint(1, 3))]
        color = (
            Color.GENUS
            if any(has_genus(c) for c in comps)
            else rng.choice([Color.PLANAR, Color.GENUS])
        )
        return mk_mix(comps, color)
    if kind == "cantor":
        comps = [random_term(rng, budget - 1) for _ in range(rng.randint(0, 2))]
        color = (
            Color.GENUS
            if any(has_genus(c) for c in comps)
            else rng.choice([Color.PLANAR, Color.GENUS])
        )
        return mk_cantor(comps, color)
    return Sum(tuple(random_term(rng, budget - 1) for _ in range(rng.randint(2, 3))))
