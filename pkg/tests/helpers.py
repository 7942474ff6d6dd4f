"""Random generators of divisible multisets for property tests."""

from __future__ import annotations

import random
from math import gcd

from divcodes import gf
from divcodes.geometry import PointMultiset, Subspace, enumerate_points


def random_subspace(rng: random.Random, F, v: int, k: int) -> Subspace:
    while True:
        basis = [[rng.randrange(F.q) for _ in range(v)] for _ in range(k)]
        if gf.rank(F, basis) == k:
            return Subspace(F, v, tuple(map(tuple, basis)))


def random_divisible(rng: random.Random, q: int, v: int, delta: int, terms: int = 3) -> PointMultiset:
    """Sum of weighted subspaces w * chi_U with delta | w * q^(dim U - 1), plus delta-fold points."""
    F = gf.GF(q)
    acc = PointMultiset(F, v)
    pts = enumerate_points(v, F)
    for _ in range(terms):
        if rng.random() < 0.3:
            acc = acc + PointMultiset(F, v, {rng.choice(pts): delta * rng.randint(1, 2)})
            continue
        k = rng.randint(1, v)
        unit = q ** (k - 1)
        w = delta // gcd(delta, unit)
        U = random_subspace(rng, F, v, k)
        w *= rng.randint(1, 2)
        acc = acc + PointMultiset(F, v, {p: w for p in U.points()})
    if not acc.mults:
        acc = PointMultiset(F, v, {rng.choice(pts): delta})
    return acc


def random_multiset(rng: random.Random, q: int, v: int, size: int, max_mult: int = 3) -> PointMultiset:
    F = gf.GF(q)
    pts = enumerate_points(v, F)
    return PointMultiset(F, v, [(rng.choice(pts), rng.randint(1, max_mult)) for _ in range(size)])
