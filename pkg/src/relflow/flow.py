"""Exact maximum flow on real-capacitated directed graphs.

The augmentation strategy is shortest-augmenting-path (BFS in the
residual graph), which terminates after O(V*E) augmentations regardless
of capacity values and, together with page-id-ordered neighbor
iteration, makes the per-edge flow assignment deterministic -- callers
reduce capacities based on which edges carried flow, so the assignment
itself is part of the contract, not just the value.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import GraphError
from .webgraph import Edge

if TYPE_CHECKING:
    from .subnet import Subnetwork

# Absolute epsilon for comparing capacities/flows against zero; absorbs
# subtraction residue left behind by capacity reduction.
ZERO_EPS = 1e-12


@dataclass(frozen=True)
class FlowResult:
    """A max-flow value plus the per-edge flow assignment realizing it."""

    value: float
    edge_flows: Mapping[Edge, float]

    def flow_on(self, edge: Edge) -> float:
        return self.edge_flows.get(edge, 0.0)


def max_flow(net: "Subnetwork", capacities: Mapping[Edge, float],
             source: int, sink: int,
             excluded: Iterable[int] = ()) -> FlowResult:
    """Maximum flow from ``source`` to ``sink`` with ``excluded`` removed.

    ``capacities`` may be the subnetwork's own capacities or a working
    copy; it is only read.  The returned value equals the minimum cut
    separating source from sink in the view without the excluded nodes.
    """
    excluded = frozenset(excluded)
    if source == sink:
        raise GraphError(f"source and sink are the same page ({source})")
    for name, node in (("source", source), ("sink", sink)):
        if not net.has_node(node):
            raise GraphError(f"unknown {name} page id {node}")
        if node in excluded:
            raise GraphError(f"{name} page {node} is excluded")

    flows: dict[Edge, float] = dict.fromkeys(net.capacity, 0.0)
    total = 0.0
    while True:
        path = _shortest_augmenting_path(net, capacities, flows,
                                         source, sink, excluded)
        if path is None:
            break
        bottleneck = min(
            (capacities[e] - flows[e]) if forward else flows[e]
            for e, forward in path
        )
        if bottleneck <= ZERO_EPS:
            break
        for e, forward in path:
            flows[e] += bottleneck if forward else -bottleneck
        total += bottleneck
    return FlowResult(total, flows)


def _shortest_augmenting_path(net, capacities, flows, source, sink, excluded):
    """BFS over the residual graph; returns [(edge, is_forward), ...] or None."""
    parent: dict[int, tuple[int, Edge, bool]] = {source: None}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in net.succ[x]:          # residual forward arc on edge (x, y)
            if y in parent or y in excluded:
                continue
            e = (x, y)
            if capacities[e] - flows[e] > ZERO_EPS:
                parent[y] = (x, e, True)
                if y == sink:
                    return _trace(parent, sink)
                queue.append(y)
        for y in net.pred[x]:          # residual reverse arc cancels (y, x)
            if y in parent or y in excluded:
                continue
            e = (y, x)
            if flows[e] > ZERO_EPS:
                parent[y] = (x, e, False)
                if y == sink:
                    return _trace(parent, sink)
                queue.append(y)
    return None


def _trace(parent, sink):
    path = []
    node = sink
    while parent[node] is not None:
        prev, edge, forward = parent[node]
        path.append((edge, forward))
        node = prev
    path.reverse()
    return path
