"""Seeded generators for desk-scale test instances.

Random metric spaces are built as shortest-path closures of random
positive rational edge weights, so all four axioms hold exactly; all
randomness flows through explicit seeds for reproducibility.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .metric import FiniteMetricSpace, Functional, LipschitzPotential, validate_metric
from .monotonicity import PairSet
from .transport import PairMeasure, optimal_coupling


def random_space(
    n: int, seed: int, *, exact: bool = True, max_weight: int = 12
) -> FiniteMetricSpace:
    """Metric closure of a random weighted complete graph on n points."""
    rng = random.Random(seed)
    dens = (1, 2, 3, 4)
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, max_weight), rng.choice(dens))
    for k in range(n):
        for i in range(n):
            wik = w[i][k]
            for j in range(n):
                if w[i][j] > wik + w[k][j]:
                    w[i][j] = wik + w[k][j]
    return validate_metric(w, exact=exact)


def line_space(positions: Sequence, *, exact: bool = True) -> FiniteMetricSpace:
    """Points on the real line; position 0 first (the base point)."""
    pos = [Fraction(p) for p in positions]
    rows = [[abs(a - b) for b in pos] for a in pos]
    return validate_metric(rows, exact=exact)


def star_space(leaves: int, radius=1, *, exact: bool = True) -> FiniteMetricSpace:
    """A center (the base point) with the given number of equidistant leaves."""
    r = Fraction(radius)
    n = leaves + 1
    rows = [
        [Fraction(0) if i == j else (r if 0 in (i, j) else 2 * r) for j in range(n)]
        for i in range(n)
    ]
    return validate_metric(rows, exact=exact)


def random_functional(
    space: FiniteMetricSpace,
    seed: int,
    *,
    max_support: Optional[int] = None,
    allow_zero: bool = False,
) -> Functional:
    """Random signed combination of point evaluations with small rational
    coefficients; never supported at the base point."""
    rng = random.Random(seed)
    points = [i for i in space.points if i != 0]
    cap = len(points) if max_support is None else min(max_support, len(points))
    size = rng.randint(0 if allow_zero else 1, cap)
    support = rng.sample(points, size)
    coeffs = {}
    for i in support:
        num = rng.choice([-4, -3, -2, -1, 1, 2, 3, 4])
        den = rng.choice([1, 2, 3])
        coeffs[i] = Fraction(num, den)
    return Functional(coeffs, space)


def random_potential(space: FiniteMetricSpace, seed: int, spread: int = 8) -> LipschitzPotential:
    """Random potential (no Lipschitz normalization), zero at the base."""
    rng = random.Random(seed)
    vals = [Fraction(0)] + [
        Fraction(rng.randint(-spread, spread), rng.choice([1, 2, 4]))
        for _ in range(space.n - 1)
    ]
    return LipschitzPotential.build(vals, space)


def random_pair_set(space: FiniteMetricSpace, seed: int, size: int) -> PairSet:
    """Uniformly random ordered pairs, duplicates possible."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(size):
        x = rng.randrange(space.n)
        y = rng.randrange(space.n)
        while y == x:
            y = rng.randrange(space.n)
        pairs.append((x, y))
    return PairSet.of(pairs, space)


def monotone_pair_set(
    space: FiniteMetricSpace, seed: int, *, max_support: Optional[int] = None
) -> PairSet:
    """Support of an emitted optimal coupling: cyclically monotone by the
    optimality criterion (independently certified in the test suite)."""
    phi = random_functional(space, seed, max_support=max_support)
    support = optimal_coupling(phi, space).coupling.support
    if not support:
        return PairSet.of([(1, 0)], space)
    return PairSet.of(support, space)


def random_pair_measure(
    space: FiniteMetricSpace,
    seed: int,
    *,
    size: int = 4,
    monotone: Optional[bool] = None,
    signed: bool = False,
) -> PairMeasure:
    """Random masses on random pairs, or on a monotone support when asked."""
    rng = random.Random(seed)
    if monotone:
        pairs = list(monotone_pair_set(space, seed).deduplicated())
    else:
        pairs = list(random_pair_set(space, seed, size).deduplicated())
    mass = {}
    for p in pairs:
        num = rng.randint(1, 8)
        if signed and rng.random() < 0.5:
            num = -num
        mass[p] = Fraction(num, rng.choice([1, 2, 4]))
    return PairMeasure(mass, space)
