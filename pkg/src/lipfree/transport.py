"""The finite Kantorovich-Rubinstein engine.

Computes free-space norms as min-cost transport between the positive and
negative parts of a functional (the base point absorbs any mass imbalance,
since the evaluation there is the zero functional), together with:

* an optimal coupling, found by successive shortest paths with node
  potentials so reduced costs stay nonnegative;
* the induced pair-measure representation (d times the coupling), whose
  total variation equals the norm;
* a dual 1-Lipschitz potential obtained from the final node potentials by
  the extension f(z) = max_i (f(x_i) - d(x_i, z)), shifted to vanish at
  the base point.

The emitted (coupling, potential) pair is self-certifying: the coupling
cost equals the potential's pairing with the functional, which pins both
sides of the duality independently of the solver's internals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Tuple

from .errors import Error
from .metric import (
    FiniteMetricSpace,
    Functional,
    LipschitzPotential,
    Molecule,
)
from .numerics import Number, coerce

Pair = Tuple[int, int]

log = logging.getLogger(__name__)


class SignedMeasure(Error):
    """An operation that needs a positive measure got signed masses."""


class NotARepresentation(Error):
    """The measure does not represent the claimed functional."""


class PairMeasure:
    """Weighted set of ordered pairs (x, y), x != y.

    Nonnegative instances act as De Leeuw representations; reweighted by
    1/d they are transport couplings.  Stored masses are nonzero.
    """

    __slots__ = ("_mass",)

    def __init__(self, mass: Mapping[Pair, Number], space: FiniteMetricSpace | None = None):
        clean: Dict[Pair, Number] = {}
        for (x, y), m in mass.items():
            if x == y:
                raise ValueError(f"pair ({x},{y}) lies on the diagonal")
            if space is not None:
                if not (0 <= x < space.n and 0 <= y < space.n):
                    raise ValueError(f"pair ({x},{y}) out of range")
                m = coerce(m, space.exact)
            if m == 0:
                continue
            clean[(x, y)] = m
        self._mass = clean

    @classmethod
    def zero(cls) -> "PairMeasure":
        return cls({})

    @classmethod
    def dirac(cls, x: int, y: int, mass: Number = 1) -> "PairMeasure":
        return cls({(x, y): mass})

    @property
    def mass(self) -> Dict[Pair, Number]:
        return dict(self._mass)

    @property
    def signed(self) -> bool:
        return any(m < 0 for m in self._mass.values())

    @property
    def support(self) -> Tuple[Pair, ...]:
        return tuple(sorted(self._mass))

    def __getitem__(self, pair: Pair) -> Number:
        return self._mass.get(pair, 0)

    def __len__(self) -> int:
        return len(self._mass)

    def total_variation(self) -> Number:
        return sum((abs(m) for m in self._mass.values()), start=0)

    def plus(self, other: "PairMeasure") -> "PairMeasure":
        merged = dict(self._mass)
        for p, m in other._mass.items():
            merged[p] = merged.get(p, 0) + m
        return PairMeasure(merged)

    def scaled(self, c: Number) -> "PairMeasure":
        return PairMeasure({p: c * m for p, m in self._mass.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, PairMeasure) and self._mass == other._mass

    def __repr__(self):
        return f"PairMeasure({self._mass!r})"


def reflect(mu: PairMeasure) -> PairMeasure:
    """Push forward along (x, y) -> (y, x); an involution."""
    return PairMeasure({(y, x): m for (x, y), m in mu._mass.items()})


def restrict(mu: PairMeasure, keep: Callable[[Pair], bool]) -> PairMeasure:
    """Drop all mass outside the given set of pairs.

    Restriction of an optimal representation stays optimal; that is a
    theorem about the objects, tested rather than assumed here.
    """
    return PairMeasure({p: m for p, m in mu._mass.items() if keep(p)})


def apply_representation(
    mu: PairMeasure, f: LipschitzPotential, space: FiniteMetricSpace
) -> Number:
    """Integrate the incremental quotients of f against the pair measure."""
    return sum(
        (m * (f.values[x] - f.values[y]) / space.d(x, y) for (x, y), m in mu._mass.items()),
        start=0,
    )


def functional_of(mu: PairMeasure, space: FiniteMetricSpace) -> Functional:
    """The functional represented by the measure: sum of mass(x,y) * m_xy."""
    coeffs: Dict[int, Number] = {}
    for (x, y), m in mu._mass.items():
        w = m / space.d(x, y)
        coeffs[x] = coeffs.get(x, 0) + w
        coeffs[y] = coeffs.get(y, 0) - w
    return Functional(coeffs, space)


@dataclass(frozen=True)
class TransportResult:
    """Optimal cost with its three certificates: coupling, representation,
    and dual potential.  value = coupling cost = ||representation|| =
    <potential, functional> with lip(potential) <= 1."""

    value: Number
    coupling: PairMeasure
    representation: PairMeasure
    potential: LipschitzPotential


def _balanced_sides(phi: Functional, space: FiniteMetricSpace):
    """Split phi into supplies and demands, absorbing imbalance at the base."""
    sources: Dict[int, Number] = {}
    sinks: Dict[int, Number] = {}
    for i, c in phi.coeffs.items():
        if c > 0:
            sources[i] = c
        else:
            sinks[i] = -c
    imbalance = phi.total()
    if imbalance > 0:
        sinks[0] = imbalance
    elif imbalance < 0:
        sources[0] = -imbalance
    return sources, sinks


def _solve_min_cost(
    sources: Dict[int, Number], sinks: Dict[int, Number], space: FiniteMetricSpace
):
    """Successive shortest augmenting paths on the bipartite residual graph.

    Sources are drained in increasing point order and ties among nearest
    sinks break toward the lowest index, so outputs are deterministic.
    Returns the flow and the final node potentials.
    """
    zero = coerce(0, space.exact)
    src = sorted(sources)
    snk = sorted(sinks)
    remaining_sup = dict(sources)
    remaining_dem = dict(sinks)
    flow: Dict[Pair, Number] = {}
    pot: Dict[int, Number] = {v: zero for v in src + snk}
    is_source = set(src)
    if space.exact:
        eps_active = 0
    else:
        # Float totals can disagree by a few ulps; a node is saturated once
        # its residue drops below this threshold.
        scale = max(list(sources.values()) + list(sinks.values()))
        eps_active = 1e-12 * (1.0 + float(scale))

    def reduced(cost, u, v):
        rc = cost + pot[u] - pot[v]
        if not space.exact and rc < 0:
            rc = 0.0  # float round-off guard; exact mode never needs it
        return rc

    while True:
        s0 = next((s for s in src if remaining_sup[s] > eps_active), None)
        if s0 is None:
            break

        # Dijkstra over reduced costs from s0.
        dist: Dict[int, Number] = {s0: zero}
        prev: Dict[int, int] = {}
        done = set()
        while True:
            u = min(
                (v for v in dist if v not in done),
                key=lambda v: (dist[v], v),
                default=None,
            )
            if u is None:
                break
            done.add(u)
            if u in is_source:
                for t in snk:
                    nd = dist[u] + reduced(space.d(u, t), u, t)
                    if t not in dist or nd < dist[t]:
                        dist[t] = nd
                        prev[t] = u
            else:
                for s in src:
                    if flow.get((s, u), zero) > 0:
                        nd = dist[u] + reduced(-space.d(s, u), u, s)
                        if s not in dist or nd < dist[s]:
                            dist[s] = nd
                            prev[s] = u

        t0 = min(
            (t for t in snk if remaining_dem[t] > eps_active and t in dist),
            key=lambda t: (dist[t], t),
            default=None,
        )
        if t0 is None:
            raise Error("transport network disconnected; cannot happen on a complete bipartite graph")

        # Walk the path back and find the bottleneck.
        path: List[Pair] = []
        v = t0
        while v != s0:
            u = prev[v]
            path.append((u, v))
            v = u
        path.reverse()
        amount = min(remaining_sup[s0], remaining_dem[t0])
        for u, v in path:
            if u not in is_source:  # backward arc (sink u -> source v) carries flow (v, u)
                amount = min(amount, flow[(v, u)])
        for u, v in path:
            if u in is_source:
                flow[(u, v)] = flow.get((u, v), zero) + amount
            else:
                flow[(v, u)] = flow[(v, u)] - amount
                if flow[(v, u)] == 0:
                    del flow[(v, u)]
        remaining_sup[s0] -= amount
        remaining_dem[t0] -= amount

        cap = dist[t0]
        for v in pot:
            dv = dist.get(v)
            pot[v] = pot[v] + (cap if dv is None or dv > cap else dv)

    return flow, pot


def _dual_potential(
    pot: Dict[int, Number], sources: Iterable[int], space: FiniteMetricSpace
) -> LipschitzPotential:
    """Extend the source potentials to all of M and pin the base point.

    f(z) = max over sources x of (u(x) - d(x, z)) is 1-Lipschitz as a max
    of 1-Lipschitz functions, so the certificate needs no projection step.
    """
    src = sorted(sources)
    if not src:
        return LipschitzPotential.build([coerce(0, space.exact)] * space.n, space)
    u = {s: -pot[s] for s in src}
    raw = [max(u[s] - space.d(s, z) for s in src) for z in space.points]
    base = raw[0]
    return LipschitzPotential.build([v - base for v in raw], space)


def optimal_coupling(phi: Functional, space: FiniteMetricSpace) -> TransportResult:
    """Solve the transport problem for phi and emit all certificates."""
    if phi.is_zero():
        zero = coerce(0, space.exact)
        return TransportResult(
            zero,
            PairMeasure.zero(),
            PairMeasure.zero(),
            LipschitzPotential.build([zero] * space.n, space),
        )
    sources, sinks = _balanced_sides(phi, space)
    log.debug(
        "solving transport: %d sources, %d sinks, %d points",
        len(sources), len(sinks), space.n,
    )
    flow, pot = _solve_min_cost(sources, sinks, space)
    cost = sum((m * space.d(x, y) for (x, y), m in flow.items()), start=0)
    coupling = PairMeasure(flow)
    representation = PairMeasure({p: m * space.d(*p) for p, m in flow.items()})
    potential = _dual_potential(pot, sources, space)
    return TransportResult(cost, coupling, representation, potential)


def free_norm(phi: Functional, space: FiniteMetricSpace) -> Number:
    """Norm of phi in the free space over M (optimal transport cost)."""
    return optimal_coupling(phi, space).value


def is_optimal(mu: PairMeasure, space: FiniteMetricSpace) -> bool:
    """Whether a positive measure is a norm-minimal representation, i.e.
    its total variation equals the norm of the functional it represents."""
    if mu.signed:
        raise SignedMeasure("optimality is defined for positive measures only")
    norm = free_norm(functional_of(mu, space), space)
    return space.cmp.eq(mu.total_variation(), norm)


def molecule_decomposition(
    phi: Functional, space: FiniteMetricSpace
) -> List[Tuple[Number, Molecule]]:
    """Write phi as a positive combination of molecules whose coefficients
    sum to its norm, read off the optimal representation."""
    result = optimal_coupling(phi, space)
    return [(m, Molecule(x, y)) for (x, y), m in sorted(result.representation.mass.items())]


def norming_functions_check(
    phi: Functional,
    f: LipschitzPotential,
    mu: PairMeasure,
    space: FiniteMetricSpace,
) -> bool:
    """Certify optimality: a unit-ball function with unit incremental
    quotient on the whole support of a positive representation norms phi
    and witnesses that the representation is optimal."""
    if mu.signed:
        raise SignedMeasure("norming certificates need a positive representation")
    cmp = space.cmp
    from .metric import functionals_equal

    if not functionals_equal(functional_of(mu, space), phi, cmp):
        raise NotARepresentation("measure does not represent the functional")
    if cmp.gt(f.lip, 1):
        return False
    return all(
        cmp.eq((f.values[x] - f.values[y]) / space.d(x, y), 1) for (x, y) in mu.support
    )
