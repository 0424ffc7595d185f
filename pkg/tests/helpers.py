"""Shared fixtures, oracles, and frozen reference tables.

The toy network is the 7-node example whose published score tables the
suite reproduces.  Expected values below were computed with independent
oracles (eigendecomposition for the hub fixed point, brute-force cut
enumeration for flows, hand iteration for similarity scores) and then
frozen.
"""
from __future__ import annotations

import numpy as np

from relflow.subnet import Subnetwork
from relflow.webgraph import WebGraph

# ---------------------------------------------------------------------------
# the toy network

TOY7_EDGES = [(0, 2), (0, 5), (1, 3), (2, 3), (2, 5), (2, 6), (3, 4), (3, 6)]
TOY7_URLS = tuple(f"http://toy7.example/p{i}" for i in range(7))
TOY7_KEYWORD = "toy"

# Exact normalized fixed point of the alternating hub/authority update,
# from the eigendecomposition oracle below (frozen at 15 digits).
TOY7_HUB = (0.368160355898380, 0.253622791097335, 0.815224744794682,
            0.368160355898380, 0.0, 0.0, 0.0)
TOY7_AUTH = (0.0, 0.0, 0.179338395448385, 0.520657368439594,
             0.179338395448385, 0.576450945235392, 0.576450945235392)
TOY7_MAXWT = 0.815224744794682

# Published 3-decimal display values (hub values scaled by 1000, flows by
# 1000 * maxwt).  Note these truncate rather than round: the exact fixed
# point has hub(1) = 0.2536...
TOY7_HUB_3DP = (0.368, 0.253, 0.815, 0.368, 0.0, 0.0, 0.0)


def toy7_graph(**kwargs) -> WebGraph:
    return WebGraph.from_edges(TOY7_URLS, TOY7_EDGES,
                               {TOY7_KEYWORD: range(7)}, **kwargs)


# ---------------------------------------------------------------------------
# reference score table: all 42 off-diagonal cells, row-major, each cell
# (seek, fact, surf x->y, surf y->x) at the 1000 * maxwt display scale

SCORE_TABLE = {
    (0, 1): (253, 0, 0, 0), (0, 2): (368, 0, 368, 0),
    (0, 3): (368, 0, 368, 0), (0, 4): (0, 0, 368, 0),
    (0, 5): (0, 0, 736, 0), (0, 6): (0, 0, 368, 0),
    (1, 0): (253, 0, 0, 0), (1, 2): (253, 0, 0, 0),
    (1, 3): (0, 0, 253, 0), (1, 4): (0, 0, 253, 0),
    (1, 5): (0, 0, 0, 0), (1, 6): (0, 0, 253, 0),
    (2, 0): (368, 0, 0, 368), (2, 1): (253, 0, 0, 0),
    (2, 3): (368, 0, 815, 0), (2, 4): (0, 0, 368, 0),
    (2, 5): (0, 368, 815, 0), (2, 6): (0, 0, 1183, 0),
    (3, 0): (368, 0, 0, 368), (3, 1): (0, 0, 0, 253),
    (3, 2): (368, 0, 0, 815), (3, 4): (0, 0, 368, 0),
    (3, 5): (0, 815, 0, 0), (3, 6): (0, 815, 368, 0),
    (4, 0): (0, 0, 0, 368), (4, 1): (0, 0, 0, 253),
    (4, 2): (0, 0, 0, 368), (4, 3): (0, 0, 0, 368),
    (4, 5): (0, 736, 0, 0), (4, 6): (0, 368, 0, 0),
    (5, 0): (0, 0, 0, 736), (5, 1): (0, 0, 0, 0),
    (5, 2): (0, 368, 0, 815), (5, 3): (0, 815, 0, 0),
    (5, 4): (0, 736, 0, 0), (5, 6): (0, 1183, 0, 0),
    (6, 0): (0, 0, 0, 368), (6, 1): (0, 0, 0, 253),
    (6, 2): (0, 0, 0, 1183), (6, 3): (0, 815, 0, 368),
    (6, 4): (0, 368, 0, 0), (6, 5): (0, 1183, 0, 0),
}

# reference high-scorer sets per target; empty set where the table says None
HIGH_SCORERS = {
    "seek": {0: {2, 3}, 1: {0, 2}, 2: {0, 3}, 3: {0, 2},
             4: set(), 5: set(), 6: set()},
    "fact": {0: set(), 1: set(), 2: {5}, 3: {5, 6},
             4: {5}, 5: {6}, 6: {5}},
    "surf": {0: {5}, 1: {3, 4, 6}, 2: {6}, 3: {4, 6},
             4: set(), 5: set(), 6: set()},
    "surf-back": {0: set(), 1: set(), 2: {0}, 3: {2},
                  4: {0, 2, 3}, 5: {2}, 6: {2}},
}

# reference SimRank values at decay 1 (exact dyadic rationals); upper
# triangle, missing off-diagonal pairs are 0
SIMRANK_NONZERO = {
    (2, 5): 0.5, (3, 5): 0.25, (3, 6): 0.25, (4, 6): 0.5, (5, 6): 0.25,
}


def simrank_expected(a: int, b: int) -> float:
    if a == b:
        return 1.0
    key = (a, b) if a < b else (b, a)
    return SIMRANK_NONZERO.get(key, 0.0)


# ---------------------------------------------------------------------------
# oracles

def hits_oracle(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    """Hub/auth fixed point via eigendecomposition (independent of the
    power-iteration implementation under test)."""
    A = np.zeros((n, n))
    for s, t in edges:
        A[s, t] = 1.0
    w, V = np.linalg.eigh(A @ A.T)
    hub = V[:, -1]
    if hub.sum() < 0:
        hub = -hub
    hub = np.abs(hub)
    hub /= np.linalg.norm(hub)
    auth = A.T @ hub
    norm = np.linalg.norm(auth)
    if norm > 0:
        auth /= norm
    return hub, auth


def brute_force_min_cut(nodes, capacity, source, sink,
                        excluded=frozenset()) -> float:
    """Minimum cut by enumerating every source/sink-respecting partition."""
    middle = [x for x in nodes
              if x not in (source, sink) and x not in excluded]
    best = float("inf")
    for mask in range(1 << len(middle)):
        side = {source}
        for i, x in enumerate(middle):
            if mask >> i & 1:
                side.add(x)
        cut = 0.0
        for (a, b), cap in capacity.items():
            if a in excluded or b in excluded:
                continue
            if a in side and b not in side:
                cut += cap
        best = min(best, cut)
    return best


def bfs_reachable(adj, start, depth) -> set:
    """Plain set-based BFS used to double-check witness reachability."""
    seen = {start}
    frontier = {start}
    for _ in range(depth):
        frontier = {y for x in frontier for y in adj.get(x, ())} - seen
        seen |= frontier
    return seen


# ---------------------------------------------------------------------------
# constructors for synthetic networks

def make_subnetwork(hub: dict[int, float], edges,
                    keyword: str = "synthetic") -> Subnetwork:
    """Hand-capacitated subnetwork: capacity of (x, y) is hub[x]."""
    nodes = tuple(sorted(hub))
    member = set(nodes)
    assert all(s in member and t in member for s, t in edges)
    succ = {x: tuple(sorted(t for s, t in edges if s == x)) for x in nodes}
    pred = {x: tuple(sorted(s for s, t in edges if t == x)) for x in nodes}
    capacity = {(s, t): hub[s] for s, t in edges}
    maxwt = max(capacity.values(), default=0.0)
    auth = dict.fromkeys(nodes, 0.0)
    return Subnetwork(keyword, nodes, succ, pred, capacity, dict(hub),
                      auth, maxwt)


def make_custom_net(caps: dict[tuple[int, int], float],
                    keyword: str = "synthetic") -> Subnetwork:
    """Subnetwork with explicit per-edge capacities (for reduction tests
    whose scenarios need unequal capacities out of one node)."""
    nodes = tuple(sorted({x for e in caps for x in e}))
    succ = {x: tuple(sorted(t for s, t in caps if s == x)) for x in nodes}
    pred = {x: tuple(sorted(s for s, t in caps if t == x)) for x in nodes}
    hub = {x: max((caps[(x, y)] for y in succ[x]), default=0.0)
           for x in nodes}
    auth = dict.fromkeys(nodes, 0.0)
    return Subnetwork(keyword, nodes, succ, pred, dict(caps), hub, auth,
                      max(caps.values(), default=0.0))


def chain_witness_net(m: int, cap_u: float, cap_v: float) -> Subnetwork:
    """u and v feed one near witness; m further witnesses hang off it in
    a chain, so all their flow transits the near witness."""
    big = cap_u + cap_v + 1.0
    hub = {0: cap_u, 1: cap_v}
    edges = [(0, 2), (1, 2)]
    for j in range(m):
        hub[2 + j] = big
        edges.append((2 + j, 3 + j))
    hub[2 + m] = big
    return make_subnetwork(hub, edges)


def random_webgraph(rng, max_nodes=50, edge_prob=0.08,
                    keyword: str = "w") -> WebGraph:
    """Seeded random digraph with one keyword covering every page."""
    n = rng.randint(2, max_nodes)
    edges = [(a, b) for a in range(n) for b in range(n)
             if a != b and rng.random() < edge_prob]
    urls = [f"http://rnd.example/{i}" for i in range(n)]
    return WebGraph.from_edges(urls, edges, {keyword: range(n)})
