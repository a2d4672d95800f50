"""Cyclical-monotonicity certification and extremal-potential synthesis.

A set of pairs C is cyclically monotone when no permutation rearrangement
of targets can lower the total distance.  Encoding each pair as a node of
a complete digraph with arc weight w(i -> j) = d(x_i, y_j) - d(x_i, y_i)
turns that into the absence of negative cycles, which Bellman-Ford
decides with an explicit certificate either way.  For monotone C the dual
object is an extremal potential: a 1-Lipschitz function with
f(x) - f(y) = d(x, y) on every pair, built from a chain formula as a
negated shortest-path distance from a fixed anchor pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import Error
from .metric import FiniteMetricSpace, LipschitzPotential
from .numerics import Number, coerce

Pair = Tuple[int, int]

#: Strictness threshold for calling a cycle negative in float mode.
FLOAT_CYCLE_EPS = 1e-12

BRUTE_FORCE_LIMIT = 8


class EmptySet(Error):
    """The operation needs at least one pair."""


class TooLarge(Error):
    """The brute-force oracle refuses sets with more than 8 pairs."""


class NotMonotone(Error):
    """Raised with the negative-cycle certificate attached."""

    def __init__(self, certificate: "CycleCertificate"):
        super().__init__(f"pair set is not cyclically monotone (slack {certificate.slack})")
        self.certificate = certificate

    def payload(self):
        return {**super().payload(), "slack": float(self.certificate.slack)}


@dataclass(frozen=True)
class PairSet:
    """Ordered list of pairs (x, y), x != y; duplicates allowed."""

    pairs: Tuple[Pair, ...]

    @classmethod
    def of(cls, pairs: Sequence[Pair], space: FiniteMetricSpace) -> "PairSet":
        out = []
        for x, y in pairs:
            if x == y:
                raise ValueError(f"pair ({x},{y}) lies on the diagonal")
            if not (0 <= x < space.n and 0 <= y < space.n):
                raise ValueError(f"pair ({x},{y}) out of range")
            out.append((x, y))
        return cls(tuple(out))

    def deduplicated(self) -> Tuple[Pair, ...]:
        return tuple(sorted(set(self.pairs)))

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class CycleCertificate:
    """Either a monotonicity verdict or an explicit violating cycle.

    ``cycle`` lists pairs in cycle order; its slack is the (negative)
    amount by which rotating the targets beats keeping them.
    """

    monotone: bool
    cycle: Optional[Tuple[Pair, ...]] = None
    slack: Optional[Number] = None


def pair_graph(C: PairSet, space: FiniteMetricSpace):
    """Complete digraph on the distinct pairs of C.

    Returns (nodes, weight) where weight[i][j] = d(x_i, y_j) - d(x_i, y_i).
    C is cyclically monotone iff this graph has no negative cycle.
    """
    nodes = C.deduplicated()
    weight = [
        [space.d(xi, yj) - space.d(xi, yi) for (xj, yj) in nodes]
        for (xi, yi) in nodes
    ]
    return nodes, weight


def cycle_slack(cycle: Sequence[Pair], space: FiniteMetricSpace) -> Number:
    """Re-evaluate a cycle against the definition: the rotated-target cost
    minus the original cost, summed over the cycle."""
    k = len(cycle)
    total = coerce(0, space.exact)
    for t in range(k):
        x, y = cycle[t]
        _, y_next = cycle[(t + 1) % k]
        total += space.d(x, y_next) - space.d(x, y)
    return total


def _find_negative_cycle_dp(nodes, weight, space: FiniteMetricSpace, eps):
    """Extract a strictly negative simple cycle by dynamic programming.

    ``tab[k][i][j]`` holds the cheapest walk from i to j with exactly k
    edges.  The smallest k at which a closed walk goes negative yields a
    simple cycle (a repeated node would split off a shorter negative or
    zero closed walk, contradicting minimality).  Fallback for the rare
    case where the predecessor walk lands on a zero-weight cycle fed by a
    negative one.
    """
    n = len(nodes)
    inf = None
    zero = coerce(0, space.exact)
    tab = [[[zero if i == j else inf for j in range(n)] for i in range(n)]]
    for k in range(1, n + 1):
        prev = tab[k - 1]
        cur = [[inf] * n for _ in range(n)]
        for i in range(n):
            prow = prev[i]
            crow = cur[i]
            for t in range(n):
                d = prow[t]
                if d is None:
                    continue
                wt = weight[t]
                for j in range(n):
                    if t == j:
                        continue
                    nd = d + wt[j]
                    if crow[j] is None or nd < crow[j]:
                        crow[j] = nd
        tab.append(cur)
        start = next(
            (i for i in range(n) if cur[i][i] is not None and cur[i][i] < -eps), None
        )
        if start is None:
            continue
        # Walk backwards, always via the argmin predecessor of the DP step.
        seq = [start]
        v = start
        for m in range(k, 1, -1):
            t = min(
                (t for t in range(n) if t != v and tab[m - 1][start][t] is not None),
                key=lambda t: (tab[m - 1][start][t] + weight[t][v], t),
            )
            seq.append(t)
            v = t
        seq.reverse()
        return tuple(nodes[t] for t in seq)
    return None


def check_cyclically_monotone(C: PairSet, space: FiniteMetricSpace) -> CycleCertificate:
    """Bellman-Ford negative-cycle detection on the pair graph.

    Checking cycles suffices for all permutations because every finite
    permutation is a product of disjoint cycles.  A failed verdict carries
    a violating cycle whose slack is recomputed from the distances.
    """
    nodes, weight = pair_graph(C, space)
    n = len(nodes)
    if n <= 1:
        return CycleCertificate(monotone=True)
    eps = 0 if space.exact else FLOAT_CYCLE_EPS

    zero = coerce(0, space.exact)
    dist = [zero] * n  # virtual zero-cost super-source
    pred = [-1] * n
    flagged = -1
    for round_ in range(n):
        improved = False
        for i in range(n):
            di = dist[i]
            wi = weight[i]
            for j in range(n):
                if i == j:
                    continue
                nd = di + wi[j]
                if nd < dist[j]:
                    dist[j] = nd
                    pred[j] = i
                    improved = True
                    if round_ == n - 1:
                        flagged = j
        if not improved:
            return CycleCertificate(monotone=True)
    if flagged < 0:
        return CycleCertificate(monotone=True)

    # Walk predecessors n steps to land inside the cycle, then collect it.
    v = flagged
    for _ in range(n):
        v = pred[v]
    cycle_idx = [v]
    u = pred[v]
    while u != v:
        cycle_idx.append(u)
        u = pred[u]
    cycle_idx.reverse()
    cycle = tuple(nodes[i] for i in cycle_idx)
    slack = cycle_slack(cycle, space)
    if slack < -eps:
        return CycleCertificate(monotone=False, cycle=cycle, slack=slack)

    # Degenerate: the walk hit a zero-weight cycle fed by a negative one.
    fallback = _find_negative_cycle_dp(nodes, weight, space, eps)
    if fallback is not None:
        fb_slack = cycle_slack(fallback, space)
        if fb_slack < -eps:
            return CycleCertificate(monotone=False, cycle=fallback, slack=fb_slack)
    return CycleCertificate(monotone=True)


def brute_force_monotone(C: PairSet, space: FiniteMetricSpace) -> bool:
    """Definition-verbatim oracle: every subset of pairs, every permutation."""
    base = C.deduplicated()
    if len(base) > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{len(base)} pairs exceeds the brute-force limit of {BRUTE_FORCE_LIMIT}")
    eps = 0 if space.exact else FLOAT_CYCLE_EPS
    for k in range(1, len(base) + 1):
        for subset in itertools.combinations(base, k):
            kept = sum(space.d(x, y) for x, y in subset)
            ys = [y for _, y in subset]
            for perm in itertools.permutations(range(k)):
                rearranged = sum(space.d(subset[t][0], ys[perm[t]]) for t in range(k))
                if rearranged < kept - eps:
                    return False
    return True


def build_extremal_potential(C: PairSet, space: FiniteMetricSpace) -> LipschitzPotential:
    """Constructive extremal potential for a cyclically monotone pair set.

    The chain value of a walk anchor -> p_1 -> ... -> p_n ending with the
    terminal arc d(x_n, z) - d(x_n, y_n) into a point z is minimized by
    Bellman-Ford (well-defined exactly when there is no negative cycle);
    its negation, shifted to vanish at the base point, is 1-Lipschitz and
    attains f(x) - f(y) = d(x, y) on every pair of C.
    """
    if not C.pairs:
        raise EmptySet("cannot build an extremal potential for an empty pair set")
    certificate = check_cyclically_monotone(C, space)
    if not certificate.monotone:
        raise NotMonotone(certificate)

    nodes, weight = pair_graph(C, space)
    n = len(nodes)
    anchor = 0  # nodes are sorted, so index 0 is the lexicographically least pair
    inf = None
    dist: List[Optional[Number]] = [inf] * n
    dist[anchor] = coerce(0, space.exact)
    for _ in range(n - 1):
        improved = False
        for i in range(n):
            if dist[i] is None:
                continue
            di = dist[i]
            wi = weight[i]
            for j in range(n):
                if i == j:
                    continue
                nd = di + wi[j]
                if dist[j] is None or nd < dist[j]:
                    dist[j] = nd
                    improved = True
        if not improved:
            break

    raw = []
    for z in space.points:
        best = min(
            dist[p] + space.d(nodes[p][0], z) - space.d(nodes[p][0], nodes[p][1])
            for p in range(n)
        )
        raw.append(-best)
    base = raw[0]
    return LipschitzPotential.build([v - base for v in raw], space)


def verify_extremal(
    f: LipschitzPotential, C: PairSet, space: FiniteMetricSpace
) -> bool:
    """True iff f is in the unit ball and attains the distance on every pair."""
    cmp = space.cmp
    if cmp.gt(f.lip, 1):
        return False
    return all(cmp.eq(f.values[x] - f.values[y], space.d(x, y)) for x, y in C.pairs)
