"""Finding and ordering witness candidates.

A witness for the seek direction is a third page reachable from both
scored pages within d hops; for the fact direction it is a page that
reaches both within d hops (found by running the same search on the
reversed graph -- the reversal is only for finding witnesses, flows are
always routed on the forward graph).  Witnesses are ordered nearest
first: ascending min hop, then max hop, then page id, because capacity
reduction makes processing order significant and near witnesses carry
the non-redundant information.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import GraphError

if TYPE_CHECKING:
    from .subnet import Subnetwork


@dataclass(frozen=True)
class WitnessEntry:
    witness: int
    min_hop: int
    max_hop: int


@dataclass(frozen=True)
class WitnessList:
    """Ordered witness candidates; ``direction`` is ``seek`` or ``fact``."""

    entries: tuple[WitnessEntry, ...]
    direction: str

    def pages(self) -> list[int]:
        return [e.witness for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def hop_counts(net: "Subnetwork", start: int, d: int,
               reverse: bool = False) -> dict[int, int]:
    """BFS hop distances from ``start``, capped at ``d`` levels."""
    adj = net.pred if reverse else net.succ
    if start not in adj:
        raise GraphError(f"unknown page id {start}")
    hops = {start: 0}
    frontier = [start]
    for level in range(1, d + 1):
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in hops:
                    hops[y] = level
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return hops


def _witness_list(net, d, u, v, reverse, direction):
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if u == v:
        raise ValueError(f"cannot score a page against itself ({u})")
    hu = hop_counts(net, u, d, reverse)
    hv = hop_counts(net, v, d, reverse)
    common = (hu.keys() & hv.keys()) - {u, v}
    entries = sorted(
        (WitnessEntry(x, min(hu[x], hv[x]), max(hu[x], hv[x])) for x in common),
        key=lambda e: (e.min_hop, e.max_hop, e.witness),
    )
    return WitnessList(tuple(entries), direction)


def make_seek_witness_list(net: "Subnetwork", d: int,
                           u: int, v: int) -> WitnessList:
    """Pages reachable from both u and v within d hops, nearest first."""
    return _witness_list(net, d, u, v, reverse=False, direction="seek")


def make_fact_witness_list(net: "Subnetwork", d: int,
                           u: int, v: int) -> WitnessList:
    """Pages that reach both u and v within d hops, nearest first.

    Hop metrics come from the reversed graph; flow routing later happens
    on the forward graph.
    """
    return _witness_list(net, d, u, v, reverse=True, direction="fact")
