"""SimRank and PageSim reference implementations for comparison runs.

SimRank scores two pages by the similarity of the pages linking to them;
PageSim propagates every page's PageRank mass along out-links with a
per-hop decay and compares the propagated feature vectors.  Both produce
a symmetric similarity matrix over all pages.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import GraphError
from .webgraph import GraphView, WebGraph


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric non-negative page-pair scores, stored as upper triangle."""

    nodes: tuple[int, ...]
    values: Mapping[tuple[int, int], float]

    def get(self, a: int, b: int) -> float:
        key = (a, b) if a <= b else (b, a)
        try:
            return self.values[key]
        except KeyError:
            raise GraphError(f"unknown page pair ({a}, {b})") from None

    def dump(self, path) -> None:
        """Upper-triangle ``a<TAB>b<TAB>score`` lines."""
        with open(path, "w", encoding="utf-8") as fh:
            for a, b in sorted(self.values):
                fh.write(f"{a}\t{b}\t{self.values[(a, b)]:.6g}\n")


def _as_view(graph) -> GraphView:
    if isinstance(graph, GraphView):
        return graph
    if isinstance(graph, WebGraph):
        return graph.view()
    return graph.view()  # Subnetwork and anything else view-shaped


def simrank(graph, *, decay: float = 1.0,
            iterations: int = 20) -> SimilarityMatrix:
    """Fixed-point iteration of the in-neighbor similarity recurrence.

    s(a, a) = 1; s(a, b) averages s over all in-neighbor pairs of a and
    b, scaled by ``decay``; pairs where either page has no in-links stay
    at 0.  With decay 1 the toy-network values are exact dyadic
    rationals, which is what the reference comparison tables use.
    """
    if not 0.0 < decay <= 1.0:
        raise ValueError(f"decay must be in (0, 1], got {decay}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    view = _as_view(graph)
    nodes = sorted(view.nodes())
    preds = {x: sorted(view.in_neighbors(x)) for x in nodes}

    cur = {(a, b): 1.0 if a == b else 0.0
           for i, a in enumerate(nodes) for b in nodes[i:]}
    for _ in range(iterations):
        nxt = {}
        for (a, b), old in cur.items():
            if a == b:
                nxt[(a, b)] = 1.0
                continue
            ia, ib = preds[a], preds[b]
            if not ia or not ib:
                nxt[(a, b)] = 0.0
                continue
            acc = 0.0
            for i in ia:
                for j in ib:
                    acc += cur[(i, j) if i <= j else (j, i)]
            nxt[(a, b)] = decay * acc / (len(ia) * len(ib))
        if nxt == cur:
            break
        cur = nxt
    return SimilarityMatrix(tuple(nodes), cur)


def _pagerank(view: GraphView, damping: float, tol: float = 1e-12,
              max_iter: int = 200) -> dict[int, float]:
    nodes = sorted(view.nodes())
    n = len(nodes)
    succs = {x: sorted(view.out_neighbors(x)) for x in nodes}
    pr = dict.fromkeys(nodes, 1.0 / n)
    for _ in range(max_iter):
        dangling = sum(pr[x] for x in nodes if not succs[x])
        base = (1.0 - damping) / n + damping * dangling / n
        new = dict.fromkeys(nodes, base)
        for x in nodes:
            if succs[x]:
                share = damping * pr[x] / len(succs[x])
                for y in succs[x]:
                    new[y] += share
        if max(abs(new[x] - pr[x]) for x in nodes) < tol:
            return new
        pr = new
    return pr


def pagesim(graph, *, decay: float = 0.8, radius: int = 3,
            damping: float = 0.85) -> SimilarityMatrix:
    """PageRank-mass propagation similarity.

    Each page's PageRank is pushed along out-links for up to ``radius``
    hops, attenuated by ``decay`` per hop and split across out-links.
    The pairwise score aggregates matched propagated mass over all
    source pages (min^2 / max per source), so a page's self-score is its
    total received mass and bounds its row.
    """
    if not 0.0 < decay <= 1.0:
        raise ValueError(f"decay must be in (0, 1], got {decay}")
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    view = _as_view(graph)
    nodes = sorted(view.nodes())
    succs = {x: sorted(view.out_neighbors(x)) for x in nodes}
    pr = _pagerank(view, damping)

    # feature[v][u]: mass of v's PageRank reaching u within `radius` hops
    feature: dict[int, dict[int, float]] = {}
    for v in nodes:
        mass = {v: pr[v]}
        layer = {v: pr[v]}
        for _ in range(radius):
            nxt: dict[int, float] = {}
            for x in sorted(layer):
                if not succs[x]:
                    continue
                share = decay * layer[x] / len(succs[x])
                for y in succs[x]:
                    nxt[y] = nxt.get(y, 0.0) + share
            if not nxt:
                break
            for y, m in nxt.items():
                mass[y] = mass.get(y, 0.0) + m
            layer = nxt
        feature[v] = mass

    values = {}
    for i, a in enumerate(nodes):
        for b in nodes[i:]:
            acc = 0.0
            for v in nodes:
                fa = feature[v].get(a, 0.0)
                fb = feature[v].get(b, 0.0)
                hi = fa if fa >= fb else fb
                if hi > 0.0:
                    lo = fb if fa >= fb else fa
                    acc += lo * lo / hi
            values[(a, b)] = acc
    return SimilarityMatrix(tuple(nodes), values)
