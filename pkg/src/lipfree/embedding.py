"""Coordinate families for sup-norm embeddings and their quality measures.

A family F of unit-ball potentials embeds the space into l_inf^|F|.  Its
objective is the worst pair's best coordinate slope,

    alpha_F = min over pairs (x, y) of max over f in F of |(f(x)-f(y))/d(x,y)|,

which is the reciprocal of the inverse Lipschitz constant once the family
is normalized to have combined Lipschitz constant one.  The distance-to-
reference family (one coordinate per point) always achieves objective 1,
so every finite space embeds isometrically.  A seeded local search looks
for good low-dimensional families; feasibility is maintained by pulling
iterates back into the 1-Lipschitz cone with envelope midpoints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import Error
from .metric import FiniteMetricSpace, LipschitzPotential, lip_constant
from .numerics import Number, coerce


class EmptyFamily(Error):
    """The objective needs at least one coordinate function."""


@dataclass(frozen=True)
class EmbeddingReport:
    """Coordinates of a map into l_inf^n with its distortion data.

    ``lip_hinv`` and ``distortion`` are None when the coordinates fail to
    separate some pair (the map is not injective, objective 0).
    """

    functions: Tuple[LipschitzPotential, ...]
    lip_h: Number
    lip_hinv: Optional[Number]
    distortion: Optional[Number]
    objective: Number


def alpha_objective(
    functions: Sequence[LipschitzPotential], space: FiniteMetricSpace
) -> Number:
    """Worst-pair best-coordinate slope of a family of potentials.

    Coordinates with Lipschitz constant above one are rescaled into the
    unit ball first; adding coordinates can only increase the value.
    """
    if not functions:
        raise EmptyFamily("objective of an empty coordinate family")
    fams = []
    for f in functions:
        if space.cmp.gt(f.lip, 1):
            fams.append(tuple(v / f.lip for v in f.values))
        else:
            fams.append(f.values)
    best = None
    for i in range(space.n):
        for j in range(i + 1, space.n):
            d = space.d(i, j)
            sep = max(abs(vals[i] - vals[j]) / d for vals in fams)
            if best is None or sep < best:
                best = sep
    if best is None:  # single-point space: no pairs to separate
        return coerce(1, space.exact)
    return best


def _report_from_values(
    rows: Sequence[Sequence[Number]], space: FiniteMetricSpace
) -> EmbeddingReport:
    """Normalize a family to combined Lipschitz constant 1 and measure it."""
    lips = [lip_constant(row, space) for row in rows]
    lip_h = max(lips)
    if lip_h > 0 and lip_h != 1:
        rows = [[v / lip_h for v in row] for row in rows]
    functions = tuple(LipschitzPotential.build(row, space) for row in rows)

    lip_hinv = None
    injective = True
    for i in range(space.n):
        for j in range(i + 1, space.n):
            sep = max(abs(f.values[i] - f.values[j]) for f in functions)
            if sep == 0:
                injective = False
                break
            ratio = space.d(i, j) / sep
            if lip_hinv is None or ratio > lip_hinv:
                lip_hinv = ratio
        if not injective:
            break

    one = coerce(1, space.exact)
    lip_h_out = one if lip_h > 0 else coerce(0, space.exact)
    if not injective or lip_hinv is None:
        return EmbeddingReport(functions, lip_h_out, None, None, coerce(0, space.exact))
    return EmbeddingReport(
        functions,
        lip_h_out,
        lip_hinv,
        lip_h_out * lip_hinv,
        alpha_objective(functions, space),
    )


def frechet_embedding(space: FiniteMetricSpace) -> EmbeddingReport:
    """One coordinate per point: f_j(x) = d(x, p_j) - d(0, p_j).

    Coordinate j attains |f_j(x) - f_j(y)| = d(x, y) at j = y, so the map
    is an isometry into l_inf^n and the objective is exactly 1.
    """
    if space.n < 2:
        raise ValueError("need at least two points to embed")
    rows = [
        [space.d(x, j) - space.d(0, j) for x in space.points] for j in space.points
    ]
    return _report_from_values(rows, space)


def _envelope_midpoint(values: List[float], space: FiniteMetricSpace) -> List[float]:
    """Midpoint of the upper and lower 1-Lipschitz envelopes of a vector."""
    n = space.n
    upper = [min(values[y] + float(space.d(x, y)) for y in range(n)) for x in range(n)]
    lower = [max(values[y] - float(space.d(x, y)) for y in range(n)) for x in range(n)]
    return [(u + l) / 2.0 for u, l in zip(upper, lower)]


def _project_unit_ball(values: List[float], space: FiniteMetricSpace, rounds: int = 25) -> List[float]:
    """Pull a vector into the 1-Lipschitz cone, then pin the base point."""
    vals = list(values)
    for _ in range(rounds):
        lip = float(lip_constant(vals, space))
        if lip <= 1.0 + 1e-12:
            break
        vals = _envelope_midpoint(vals, space)
    lip = float(lip_constant(vals, space))
    if lip > 1.0:
        vals = [v / lip for v in vals]
    base = vals[0]
    return [v - base for v in vals]


def best_embedding_search(
    n: int,
    space: FiniteMetricSpace,
    iterations: int = 300,
    seed: int = 0,
) -> EmbeddingReport:
    """Seeded local search for an n-coordinate family with large objective.

    Restarts from subfamilies of the distance-to-reference coordinates and
    from random feasible vectors; each step perturbs one value, projects
    back into the unit ball and keeps the move if the objective improves.
    Reports the best family found (a lower bound for dimension n);
    deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("need at least one coordinate")
    fspace = space if not space.exact else space.with_mode(exact=False)
    rng = random.Random(seed)
    scale = max(float(fspace.d(i, 0)) for i in range(fspace.n)) or 1.0

    frechet_rows = [
        [float(fspace.d(x, j)) - float(fspace.d(0, j)) for x in range(fspace.n)]
        for j in range(fspace.n)
    ]

    def objective(rows: List[List[float]]) -> float:
        best = None
        for i in range(fspace.n):
            for j in range(i + 1, fspace.n):
                sep = max(abs(r[i] - r[j]) for r in rows) / float(fspace.d(i, j))
                if best is None or sep < best:
                    best = sep
        return best if best is not None else 1.0

    starts: List[List[List[float]]] = []
    starts.append([list(frechet_rows[j]) for j in range(min(n, fspace.n))])
    while len(starts[0]) < n:
        starts[0].append([0.0] * fspace.n)
    n_restarts = 4
    for _ in range(n_restarts - 1):
        if fspace.n > 1 and rng.random() < 0.5:
            picks = rng.sample(range(fspace.n), k=min(n, fspace.n))
            fam = [list(frechet_rows[j]) for j in picks]
        else:
            fam = []
        while len(fam) < n:
            row = [0.0] + [rng.uniform(-scale, scale) for _ in range(fspace.n - 1)]
            fam.append(_project_unit_ball(row, fspace))
        starts.append(fam)

    best_rows = None
    best_val = -1.0
    per_restart = max(1, iterations // len(starts))
    for fam in starts:
        fam = [_project_unit_ball(row, fspace) for row in fam]
        val = objective(fam)
        for _ in range(per_restart):
            k = rng.randrange(n)
            i = rng.randrange(1, fspace.n) if fspace.n > 1 else 0
            delta = rng.uniform(-0.5, 0.5) * scale
            candidate_row = list(fam[k])
            candidate_row[i] += delta
            candidate_row = _project_unit_ball(candidate_row, fspace)
            candidate = fam[:k] + [candidate_row] + fam[k + 1 :]
            cand_val = objective(candidate)
            if cand_val > val:
                fam, val = candidate, cand_val
        if val > best_val:
            best_rows, best_val = fam, val

    return _report_from_values(best_rows, fspace)
