"""Relationship scores from sequential witness flows.

For each witness, both pages' max flows are computed against the same
pre-witness capacity state, the smaller of the two is credited, and then
the witness's incident capacities are reduced by the witnessed amount so
that later (farther) witnesses cannot re-count the same flow.  The three
aggregate scores combine per-keyword flow totals weighted by keyword
significance and normalized by each subnetwork's maximum edge weight.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, MutableMapping

from .flow import ZERO_EPS, FlowResult, max_flow
from .subnet import (BuildOptions, KeywordSet, Subnetwork, build_subnetwork,
                     page_keywords, select_keywords)
from .webgraph import Edge, WebGraph
from .witness import make_fact_witness_list, make_seek_witness_list

RELATIONS = ("seek", "fact", "surf", "surf-back")


class CapacityMap:
    """Mutable working copy of a subnetwork's edge capacities.

    Entries never go negative: every subtraction clamps at zero.  One
    scoring job owns one map; the map must not be shared across jobs.
    """

    __slots__ = ("_caps", "_in", "_out")

    def __init__(self, capacities: Mapping[Edge, float]):
        self._caps = dict(capacities)
        self._in: dict[int, list[Edge]] = {}
        self._out: dict[int, list[Edge]] = {}
        for e in sorted(self._caps):
            self._out.setdefault(e[0], []).append(e)
            self._in.setdefault(e[1], []).append(e)

    @classmethod
    def from_subnetwork(cls, net: Subnetwork) -> "CapacityMap":
        return cls(net.capacity)

    def __getitem__(self, edge: Edge) -> float:
        return self._caps[edge]

    def __contains__(self, edge: Edge) -> bool:
        return edge in self._caps

    def __len__(self) -> int:
        return len(self._caps)

    def __iter__(self):
        return iter(self._caps)

    def in_edges(self, x: int) -> list[Edge]:
        return self._in.get(x, [])

    def out_edges(self, x: int) -> list[Edge]:
        return self._out.get(x, [])

    def subtract(self, edge: Edge, amount: float) -> None:
        self._caps[edge] = max(self._caps[edge] - amount, 0.0)

    def as_dict(self) -> dict[Edge, float]:
        return dict(self._caps)


@dataclass(frozen=True)
class WitnessFlow:
    """Flows extracted at one witness: each page's flow and the credited min."""

    witness: int
    flow_u: float
    flow_v: float
    witnessed: float


@dataclass(frozen=True)
class WitnessFlows:
    direction: str
    entries: tuple[WitnessFlow, ...]

    @property
    def total(self) -> float:
        return sum(e.witnessed for e in self.entries)


def _reduce(edges, flows_u: FlowResult, flows_v: FlowResult,
            caps: CapacityMap) -> None:
    val_u, val_v = flows_u.value, flows_v.value
    if val_u <= ZERO_EPS and val_v <= ZERO_EPS:
        return  # nothing was witnessed; the scaling ratio is undefined
    if val_u == val_v:
        # combined pass keeps the result bit-identical under (u, v) swap
        for e in edges:
            caps.subtract(e, flows_u.flow_on(e) + flows_v.flow_on(e))
        return
    if val_u < val_v:
        small, big, ratio = flows_u, flows_v, val_u / val_v
    else:
        small, big, ratio = flows_v, flows_u, val_v / val_u
    for e in edges:
        caps.subtract(e, small.flow_on(e))
    for e in edges:
        caps.subtract(e, big.flow_on(e) * ratio)


def reduce_seek_capacity(x: int, flows_u: FlowResult, flows_v: FlowResult,
                         caps: CapacityMap) -> None:
    """Remove the witnessed amount from the incoming edges of witness ``x``.

    The smaller flow's edge values are subtracted outright; the larger
    flow's are scaled down to the smaller total first, so both pages are
    penalized equally.  Capacities clamp at zero.
    """
    _reduce(caps.in_edges(x), flows_u, flows_v, caps)


def reduce_fact_capacity(x: int, flows_u: FlowResult, flows_v: FlowResult,
                         caps: CapacityMap) -> None:
    """Same arithmetic as the seek reduction, on the outgoing edges of ``x``."""
    _reduce(caps.out_edges(x), flows_u, flows_v, caps)


def flow_seek(net: Subnetwork, d: int, u: int, v: int,
              caps: CapacityMap | None = None) -> WitnessFlows:
    """Sequential witness flows for the seek direction.

    Witnesses are processed nearest first; for each witness x the flow
    from u is computed with v removed from the network and vice versa,
    so neither page can piggyback on the other's links.  Both flows see
    the same pre-witness capacities; only the reduction step mutates the
    map.
    """
    witnesses = make_seek_witness_list(net, d, u, v)
    caps = CapacityMap.from_subnetwork(net) if caps is None else caps
    entries = []
    for entry in witnesses.entries:
        x = entry.witness
        fu = max_flow(net, caps, u, x, excluded=(v,))
        fv = max_flow(net, caps, v, x, excluded=(u,))
        entries.append(WitnessFlow(x, fu.value, fv.value,
                                   min(fu.value, fv.value)))
        reduce_seek_capacity(x, fu, fv, caps)
    return WitnessFlows("seek", tuple(entries))


def flow_fact(net: Subnetwork, d: int, u: int, v: int,
              caps: CapacityMap | None = None) -> WitnessFlows:
    """Sequential witness flows for the fact direction.

    Witness candidates come from the reversed graph, but flows run on
    the forward graph from the witness to each page, and the reduction
    removes capacity from the witness's outgoing edges.
    """
    witnesses = make_fact_witness_list(net, d, u, v)
    caps = CapacityMap.from_subnetwork(net) if caps is None else caps
    entries = []
    for entry in witnesses.entries:
        x = entry.witness
        fu = max_flow(net, caps, x, u, excluded=(v,))
        fv = max_flow(net, caps, x, v, excluded=(u,))
        entries.append(WitnessFlow(x, fu.value, fv.value,
                                   min(fu.value, fv.value)))
        reduce_fact_capacity(x, fu, fv, caps)
    return WitnessFlows("fact", tuple(entries))


@dataclass(frozen=True)
class RelScores:
    """The four scores for one page pair.

    seekrel and factrel are symmetric in the pair; the two surfrel
    components are directional.
    """

    seekrel: float
    factrel: float
    surfrel_uv: float
    surfrel_vu: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.seekrel, self.factrel, self.surfrel_uv, self.surfrel_vu)


def _subnet_for(web: WebGraph, keyword: str,
                options: BuildOptions | None,
                subnets: MutableMapping[str, Subnetwork] | None) -> Subnetwork:
    if subnets is not None and keyword in subnets:
        return subnets[keyword]
    net = build_subnetwork(web, keyword, options)
    if subnets is not None:
        subnets[keyword] = net
    return net


def _pair_ready(net: Subnetwork, u: int, v: int) -> bool:
    # a degenerate subnetwork or a missing endpoint contributes score 0
    # rather than an error, so one bad keyword cannot poison an aggregate
    return not net.is_degenerate and net.has_node(u) and net.has_node(v)


def seekrel(web: WebGraph, ku: KeywordSet, kv: KeywordSet, u: int, v: int,
            *, k: int = 5, d: int = 3, options: BuildOptions | None = None,
            subnets: MutableMapping[str, Subnetwork] | None = None) -> float:
    """Keyword-weighted total of seek witness flows for the pair."""
    if u == v:
        raise ValueError(f"cannot score a page against itself ({u})")
    total = 0.0
    for kw, gamma in select_keywords(ku, kv, k).entries:
        net = _subnet_for(web, kw, options, subnets)
        if _pair_ready(net, u, v):
            total += gamma / net.maxwt * flow_seek(net, d, u, v).total
    return total


def factrel(web: WebGraph, ku: KeywordSet, kv: KeywordSet, u: int, v: int,
            *, k: int = 5, d: int = 3, options: BuildOptions | None = None,
            subnets: MutableMapping[str, Subnetwork] | None = None) -> float:
    """Keyword-weighted total of fact witness flows for the pair."""
    if u == v:
        raise ValueError(f"cannot score a page against itself ({u})")
    total = 0.0
    for kw, gamma in select_keywords(ku, kv, k).entries:
        net = _subnet_for(web, kw, options, subnets)
        if _pair_ready(net, u, v):
            total += gamma / net.maxwt * flow_fact(net, d, u, v).total
    return total


def surfrel(web: WebGraph, ku: KeywordSet, kv: KeywordSet, u: int, v: int,
            *, k: int = 5, options: BuildOptions | None = None,
            subnets: MutableMapping[str, Subnetwork] | None = None
            ) -> tuple[float, float]:
    """Plain max flow u->v and v->u, no witnesses and no reductions."""
    if u == v:
        raise ValueError(f"cannot score a page against itself ({u})")
    fwd = back = 0.0
    for kw, gamma in select_keywords(ku, kv, k).entries:
        net = _subnet_for(web, kw, options, subnets)
        if _pair_ready(net, u, v):
            scale = gamma / net.maxwt
            fwd += scale * max_flow(net, net.capacity, u, v).value
            back += scale * max_flow(net, net.capacity, v, u).value
    return fwd, back


def score_pair(web: WebGraph, u: int, v: int,
               *, k: int = 5, d: int = 3,
               options: BuildOptions | None = None,
               subnets: MutableMapping[str, Subnetwork] | None = None
               ) -> RelScores:
    """All four scores for a pair, deriving each page's keywords from the
    graph's keyword index and sharing built subnetworks across scores."""
    if u == v:
        raise ValueError(f"cannot score a page against itself ({u})")
    if subnets is None:
        subnets = {}
    ku, kv = page_keywords(web, u), page_keywords(web, v)
    args = dict(k=k, options=options, subnets=subnets)
    surf_uv, surf_vu = surfrel(web, ku, kv, u, v, **args)
    return RelScores(
        seekrel(web, ku, kv, u, v, d=d, **args),
        factrel(web, ku, kv, u, v, d=d, **args),
        surf_uv, surf_vu,
    )


def rank_related(web: WebGraph, target: int, relation: str, n: int,
                 *, k: int = 5, d: int = 3,
                 options: BuildOptions | None = None,
                 subnets: MutableMapping[str, Subnetwork] | None = None
                 ) -> list[tuple[int, float]]:
    """Top-n pages related to ``target`` under one relation.

    Candidates are the pages sharing at least one keyword with the
    target; zero-scoring pairs are dropped so the list stays meaningful.
    Ordering is descending score with page-id tie-breaks.
    """
    if relation not in RELATIONS:
        raise ValueError(f"relation must be one of {RELATIONS}, got {relation!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ku = page_keywords(web, target)
    candidates: set[int] = set()
    for kw, _ in ku.entries:
        candidates.update(web.keyword_index[kw])
    candidates.discard(target)
    if subnets is None:
        subnets = {}

    scored = []
    for v in sorted(candidates):
        kv = page_keywords(web, v)
        args = dict(k=k, options=options, subnets=subnets)
        if relation == "seek":
            s = seekrel(web, ku, kv, target, v, d=d, **args)
        elif relation == "fact":
            s = factrel(web, ku, kv, target, v, d=d, **args)
        else:
            fwd, back = surfrel(web, ku, kv, target, v, **args)
            s = fwd if relation == "surf" else back
        if s > ZERO_EPS:
            scored.append((v, s))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return scored[:n]
