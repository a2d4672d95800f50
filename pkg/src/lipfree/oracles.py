"""Independent brute-force oracle for the transport cost.

Enumerates every basic feasible solution of the balanced transport
polytope (spanning trees of the bipartite supply/demand graph, solved by
leaf elimination) and takes the cheapest feasible one.  Shares nothing
with the successive-shortest-path solver except the definition of the
balanced problem, so agreement between the two is a real check.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Tuple

from .metric import FiniteMetricSpace, Functional
from .numerics import coerce
from .transport import _balanced_sides


def transport_cost_by_vertex_enumeration(phi: Functional, space: FiniteMetricSpace):
    """Minimum transport cost of phi via exhaustive vertex enumeration.

    Intended for tiny instances only: the number of candidate bases is
    C(#sources * #sinks, #sources + #sinks - 1).
    """
    zero = coerce(0, space.exact)
    if phi.is_zero():
        return zero
    sources, sinks = _balanced_sides(phi, space)
    src = sorted(sources)
    snk = sorted(sinks)
    edges = [(s, t) for s in src for t in snk]
    nodes = src + snk
    tree_size = len(nodes) - 1

    balance = {}
    for s in src:
        balance[("src", s)] = sources[s]
    for t in snk:
        balance[("snk", t)] = -sinks[t]

    best = None
    for tree in itertools.combinations(edges, tree_size):
        # Acyclic + connected on len(nodes) vertices == spanning tree.
        parent = {("src", s): ("src", s) for s in src}
        parent.update({("snk", t): ("snk", t) for t in snk})

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        for s, t in tree:
            a, b = find(("src", s)), find(("snk", t))
            if a == b:
                ok = False
                break
            parent[a] = b
        if not ok:
            continue

        # Solve the unique flow by stripping leaves.
        adj: Dict[Tuple[str, int], List[Tuple[str, int]]] = {v: [] for v in parent}
        for s, t in tree:
            adj[("src", s)].append(("snk", t))
            adj[("snk", t)].append(("src", s))
        need = dict(balance)
        degree = {v: len(e) for v, e in adj.items()}
        removed = set()
        flow: Dict[Tuple[int, int], object] = {}
        order = [v for v in adj if degree[v] == 1]
        feasible = True
        while order:
            leaf = order.pop()
            if leaf in removed:
                continue
            removed.add(leaf)
            nbrs = [u for u in adj[leaf] if u not in removed]
            if not nbrs:
                if need[leaf] != 0:
                    feasible = False
                    break
                continue
            u = nbrs[0]
            amount = need[leaf]
            # Arc orientation is always source -> sink.
            if leaf[0] == "src":
                f = amount
                flow[(leaf[1], u[1])] = flow.get((leaf[1], u[1]), zero) + f
            else:
                f = -amount
                flow[(u[1], leaf[1])] = flow.get((u[1], leaf[1]), zero) + f
            need[u] += amount
            need[leaf] = zero
            degree[u] -= 1
            if degree[u] == 1:
                order.append(u)
        if not feasible:
            continue
        if any(f < 0 for f in flow.values()):
            continue
        cost = sum((f * space.d(s, t) for (s, t), f in flow.items()), start=zero)
        if best is None or cost < best:
            best = cost
    return best
