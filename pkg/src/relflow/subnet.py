"""Per-keyword capacitated subnetworks.

A subnetwork starts from the core pages containing a keyword, grows by
one round of link expansion (in-linkers and out-linked pages), then adds
two co-citation refinements: pages sharing an outlink with a core page,
and the other pages linked by each in-linker (limited to a window of
links around the in-linker's link to the core page).  Hub/authority
values are computed on the induced subgraph and every directed edge gets
the hub value of its origin as capacity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import GraphError, ParseError
from .hits import compute_hits
from .webgraph import Edge, GraphView, WebGraph, limit_outlinks_near


@dataclass(frozen=True)
class KeywordSet:
    """Keywords with significance weights, ordered by descending weight.

    Weights (gamma) lie in (0, 1]; keywords are distinct.
    """

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        names = [kw for kw, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("duplicate keyword in keyword set")
        for kw, g in self.entries:
            if not 0.0 < g <= 1.0:
                raise ValueError(f"gamma for {kw!r} must be in (0, 1], got {g}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, float]]) -> "KeywordSet":
        """Build a set ordered by descending gamma, ties by keyword."""
        ordered = sorted(pairs, key=lambda p: (-p[1], p[0]))
        return cls(tuple(ordered))

    def names(self) -> list[str]:
        return [kw for kw, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


def select_keywords(ku: KeywordSet, kv: KeywordSet, k: int) -> KeywordSet:
    """Top-k shared keywords, ranked by the sum of the two weights.

    The output weight of each keyword is the mean of its two input
    weights.  An empty intersection is not an error: callers treat the
    empty set as "pages unrelated" and score 0.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    gu = dict(ku.entries)
    gv = dict(kv.entries)
    common = set(gu) & set(gv)
    ranked = sorted(common, key=lambda kw: (-(gu[kw] + gv[kw]), kw))[:k]
    return KeywordSet(tuple((kw, (gu[kw] + gv[kw]) / 2.0) for kw in ranked))


def page_keywords(web: WebGraph, page: int) -> KeywordSet:
    """The keywords whose core page set contains ``page``."""
    if not 0 <= page < web.n_nodes:
        raise GraphError(f"unknown page id {page}")
    pairs = [(kw, web.keyword_gamma[kw])
             for kw, pages in web.keyword_index.items() if page in pages]
    return KeywordSet.from_pairs(pairs)


@dataclass(frozen=True)
class BuildOptions:
    """Expansion bounds for subnetwork construction."""

    inlink_cap: int = 1000
    sibling_window: int = 5
    hits_tolerance: float = 1e-9
    hits_max_iterations: int = 1000

    def __post_init__(self):
        if self.inlink_cap < 0:
            raise ValueError("inlink_cap must be >= 0")
        if self.sibling_window < 0:
            raise ValueError("sibling_window must be >= 0")


@dataclass(frozen=True)
class Subnetwork:
    """A keyword's capacitated directed graph.

    Invariants: ``capacity[(x, y)] == hub[x]`` for every edge, and
    ``maxwt`` is the maximum edge capacity (0.0 for a degenerate,
    edgeless subnetwork).
    """

    keyword: str
    nodes: tuple[int, ...]
    succ: Mapping[int, tuple[int, ...]]
    pred: Mapping[int, tuple[int, ...]]
    capacity: Mapping[Edge, float]
    hub: Mapping[int, float]
    auth: Mapping[int, float]
    maxwt: float

    @property
    def is_degenerate(self) -> bool:
        return not self.capacity

    @property
    def n_edges(self) -> int:
        return len(self.capacity)

    def edges(self) -> list[Edge]:
        return sorted(self.capacity)

    def has_node(self, x: int) -> bool:
        return x in self.succ

    def view(self, reverse: bool = False,
             exclude: Iterable[int] = ()) -> GraphView:
        return GraphView(self.succ, self.pred, reverse, frozenset(exclude))


def build_subnetwork(web: WebGraph, keyword: str,
                     options: BuildOptions | None = None) -> Subnetwork:
    """Grow, induce and capacitate the subnetwork for one keyword.

    Expansion runs a single pass of each step; augmentation pages do not
    recursively pull in further pages.  In-linkers are capped per core
    page (lowest page ids first) and an in-linker's contributed siblings
    are windowed around its link to the core page, with outlinks taken
    in page-id order.
    """
    options = options or BuildOptions()
    if keyword not in web.keyword_index:
        raise GraphError(f"unknown keyword {keyword!r}")
    core = web.keyword_index[keyword]
    if not core:
        raise GraphError(f"keyword {keyword!r} has an empty page set")

    grown: set[int] = set(core)
    inlinkers: dict[int, tuple[int, ...]] = {}
    for p in sorted(core):
        grown.update(web.succ[p])
        capped = web.pred[p][:options.inlink_cap]  # pred is sorted by id
        inlinkers[p] = capped
        grown.update(capped)
    # pages sharing an outlink with a core page
    co_cited = {t for p in core for t in web.succ[p]}
    for t in sorted(co_cited):
        grown.update(web.pred[t])
    # other pages linked by the in-linkers, windowed around the core link
    for p in sorted(core):
        for q in inlinkers[p]:
            near = limit_outlinks_near(q, p, web.succ[q],
                                       options.sibling_window)
            grown.update(near)

    nodes = tuple(sorted(grown))
    member = set(nodes)
    succ = {x: tuple(y for y in web.succ[x] if y in member) for x in nodes}
    pred = {x: tuple(y for y in web.pred[x] if y in member) for x in nodes}

    scores = compute_hits(GraphView(succ, pred),
                          tolerance=options.hits_tolerance,
                          max_iterations=options.hits_max_iterations)
    capacity = {(x, y): scores.hub[x] for x in nodes for y in succ[x]}
    maxwt = max(capacity.values(), default=0.0)
    return Subnetwork(keyword, nodes, succ, pred, capacity,
                      dict(scores.hub), dict(scores.auth), maxwt)


def format_subnetwork(net: Subnetwork) -> str:
    """Cache file text: ``keyword<TAB>maxwt`` header, node lines, edge lines.

    Floats are written with full repr precision so a reloaded cache
    scores bit-identically to a fresh build.
    """
    lines = [f"{net.keyword}\t{net.maxwt!r}", "# nodes"]
    for x in net.nodes:
        lines.append(f"{x}\t{net.hub[x]!r}\t{net.auth[x]!r}")
    lines.append("# edges")
    for (s, t) in net.edges():
        lines.append(f"{s}\t{t}\t{net.capacity[(s, t)]!r}")
    return "\n".join(lines) + "\n"


def save_subnetwork(net: Subnetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_subnetwork(net))


def load_subnetwork(path) -> Subnetwork:
    """Inverse of :func:`save_subnetwork`."""
    with open(path, encoding="utf-8") as fh:
        raw = [line.rstrip("\n") for line in fh]
    if not raw:
        raise ParseError(path, 0, "empty subnetwork cache")
    header = raw[0].split("\t")
    if len(header) != 2:
        raise ParseError(path, 1, f"bad header {raw[0]!r}")
    keyword, maxwt = header[0], float(header[1])

    hub: dict[int, float] = {}
    auth: dict[int, float] = {}
    capacity: dict[Edge, float] = {}
    section = "nodes"
    for no, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            marker = line.lstrip("#").strip()
            if marker in ("nodes", "edges"):
                section = marker
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(path, no, f"expected 3 fields, got {line!r}")
        try:
            if section == "nodes":
                x = int(parts[0])
                hub[x] = float(parts[1])
                auth[x] = float(parts[2])
            else:
                capacity[(int(parts[0]), int(parts[1]))] = float(parts[2])
        except ValueError:
            raise ParseError(path, no, f"bad {section} line {line!r}") from None

    nodes = tuple(sorted(hub))
    known = set(nodes)
    for (s, t) in capacity:
        if s not in known or t not in known:
            raise ParseError(path, 0, f"edge ({s}, {t}) names an unknown node")
    succ = {x: tuple(sorted(t for (s, t) in capacity if s == x)) for x in nodes}
    pred = {x: tuple(sorted(s for (s, t) in capacity if t == x)) for x in nodes}
    return Subnetwork(keyword, nodes, succ, pred, capacity, hub, auth, maxwt)
