"""Directed Web-graph storage, file ingestion, and read-only graph views.

Pages are dense integer ids (``PageId``) indexing a separate URL table;
all inner loops work on ids and URLs appear only at I/O boundaries.  The
edge set is simple and directed: self-loops and duplicate edges are
dropped at ingestion (flow to self is meaningless in every score, and
capacities are per-edge functions of the source node, so multiplicity
would double-count a hub's credibility).

File formats (line oriented, UTF-8, ``#`` starts a comment line):

* node file     -- ``id<TAB>url``, ids dense from 0
* edge file     -- ``src_id dst_id`` (whitespace separated)
* keyword file  -- ``keyword<TAB>page_id`` with an optional third
  ``gamma`` column carrying the keyword's significance weight; when the
  file carries no weights every keyword gets the uniform 1/|K|.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence
from urllib.parse import urlsplit

from .errors import GraphError, ParseError

log = logging.getLogger(__name__)

PageId = int
Edge = tuple[int, int]


def _host_of(url: str) -> str:
    if "://" in url:
        return urlsplit(url).netloc
    return url.split("/", 1)[0]


@dataclass(frozen=True)
class GraphView:
    """Read-only adjacency view with optional edge reversal and node exclusion.

    Views are cheap immutable descriptors over a graph's adjacency maps;
    neighbor queries never return excluded nodes or edges incident to
    them, and flipping twice restores the base adjacency.
    """

    succ: Mapping[int, tuple[int, ...]]
    pred: Mapping[int, tuple[int, ...]]
    reverse: bool = False
    excluded: frozenset[int] = frozenset()

    def __contains__(self, x: int) -> bool:
        return x in self.succ and x not in self.excluded

    def _check(self, x: int) -> None:
        if x not in self.succ:
            raise GraphError(f"unknown page id {x}")
        if x in self.excluded:
            raise GraphError(f"page id {x} is excluded from this view")

    def out_neighbors(self, x: int) -> set[int]:
        """Successors of ``x`` under the view's direction and exclusions."""
        self._check(x)
        base = self.pred[x] if self.reverse else self.succ[x]
        return {y for y in base if y not in self.excluded}

    def in_neighbors(self, x: int) -> set[int]:
        """Predecessors of ``x`` under the view's direction and exclusions."""
        self._check(x)
        base = self.succ[x] if self.reverse else self.pred[x]
        return {y for y in base if y not in self.excluded}

    def nodes(self) -> list[int]:
        return [x for x in self.succ if x not in self.excluded]

    def node_count(self) -> int:
        return len(self.nodes())

    def flipped(self) -> "GraphView":
        return GraphView(self.succ, self.pred, not self.reverse, self.excluded)

    def excluding(self, pages: Iterable[int]) -> "GraphView":
        return GraphView(self.succ, self.pred, self.reverse,
                         self.excluded | frozenset(pages))


@dataclass(frozen=True)
class WebGraph:
    """Immutable directed page graph with URL table and keyword index.

    ``keyword_index`` maps each keyword to the set of pages containing
    it (the per-keyword core page sets); ``keyword_gamma`` carries each
    keyword's significance weight in (0, 1].
    """

    urls: tuple[str, ...]
    succ: Mapping[int, tuple[int, ...]]
    pred: Mapping[int, tuple[int, ...]]
    keyword_index: Mapping[str, frozenset[int]] = field(default_factory=dict)
    keyword_gamma: Mapping[str, float] = field(default_factory=dict)
    dropped_self_loops: int = 0
    dropped_duplicates: int = 0
    dropped_intra_host: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.urls)

    @property
    def n_edges(self) -> int:
        return sum(len(t) for t in self.succ.values())

    def edges(self) -> list[Edge]:
        return [(s, t) for s in sorted(self.succ) for t in self.succ[s]]

    def has_edge(self, src: int, dst: int) -> bool:
        return src in self.succ and dst in self.succ[src]

    def url_of(self, page: int) -> str:
        if not 0 <= page < len(self.urls):
            raise GraphError(f"unknown page id {page}")
        return self.urls[page]

    def id_of(self, url: str) -> int:
        try:
            return self._url_ids[url]
        except KeyError:
            raise GraphError(f"unknown url {url!r}") from None

    def __post_init__(self):
        object.__setattr__(self, "_url_ids",
                           {u: i for i, u in enumerate(self.urls)})

    def view(self, reverse: bool = False,
             exclude: Iterable[int] = ()) -> GraphView:
        return GraphView(self.succ, self.pred, reverse, frozenset(exclude))

    @classmethod
    def from_edges(cls, urls: Sequence[str], edges: Iterable[Edge],
                   keywords: Mapping[str, Iterable[int]] | None = None,
                   gammas: Mapping[str, float] | None = None,
                   drop_intra_host: bool = False) -> "WebGraph":
        """Build a graph in memory, applying the ingestion cleaning rules.

        Self-loops and duplicate edges are silently dropped and counted;
        with ``drop_intra_host`` edges between pages on the same URL host
        are removed as well.
        """
        urls = tuple(urls)
        n = len(urls)
        if len(set(urls)) != n:
            raise GraphError("duplicate url in node table")
        kept: set[Edge] = set()
        self_loops = dups = intra = 0
        for src, dst in edges:
            if not (0 <= src < n):
                raise GraphError(f"edge endpoint {src} is not a known page id")
            if not (0 <= dst < n):
                raise GraphError(f"edge endpoint {dst} is not a known page id")
            if src == dst:
                self_loops += 1
                continue
            if (src, dst) in kept:
                dups += 1
                continue
            kept.add((src, dst))
        if drop_intra_host:
            hosts = [_host_of(u) for u in urls]
            same = {e for e in kept if hosts[e[0]] == hosts[e[1]]}
            intra = len(same)
            kept -= same
        if self_loops or dups or intra:
            log.warning("dropped %d self-loop(s), %d duplicate edge(s), "
                        "%d intra-host edge(s)", self_loops, dups, intra)

        succ = {x: tuple(sorted(t for s, t in kept if s == x)) for x in range(n)}
        pred = {x: tuple(sorted(s for s, t in kept if t == x)) for x in range(n)}

        index: dict[str, frozenset[int]] = {}
        if keywords:
            for kw, pages in keywords.items():
                pages = frozenset(pages)
                for p in pages:
                    if not 0 <= p < n:
                        raise GraphError(
                            f"keyword {kw!r} maps to unknown page id {p}")
                index[kw] = pages
        gamma: dict[str, float] = {}
        if index:
            if gammas is None:
                uniform = 1.0 / len(index)
                gamma = {kw: uniform for kw in index}
            else:
                for kw in index:
                    g = gammas.get(kw)
                    if g is None:
                        raise GraphError(f"keyword {kw!r} has no gamma weight")
                    if not 0.0 < g <= 1.0:
                        raise GraphError(
                            f"gamma for keyword {kw!r} must be in (0, 1], got {g}")
                    gamma[kw] = g
        return cls(urls, succ, pred, index, gamma,
                   self_loops, dups, intra)


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield no, line


def parse_node_file(node_file) -> tuple[str, ...]:
    """Read the URL table; ids must be dense from 0 and URLs unique."""
    by_id: dict[int, str] = {}
    for no, line in _data_lines(node_file):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(node_file, no,
                             f"expected 'id<TAB>url', got {line!r}")
        try:
            pid = int(parts[0])
        except ValueError:
            raise ParseError(node_file, no, f"bad page id {parts[0]!r}") from None
        if pid < 0:
            raise ParseError(node_file, no, f"negative page id {pid}")
        if pid in by_id:
            raise ParseError(node_file, no, f"duplicate page id {pid}")
        by_id[pid] = parts[1]
    n = len(by_id)
    missing = [i for i in range(n) if i not in by_id]
    if missing:
        raise ParseError(node_file, 0,
                         f"page ids are not dense from 0: missing {missing[:5]}")
    urls = tuple(by_id[i] for i in range(n))
    if len(set(urls)) != n:
        raise ParseError(node_file, 0, "duplicate url in node table")
    return urls


def parse_edge_file(edge_file, n: int) -> list[Edge]:
    """Read edge pairs; endpoints must be known page ids."""
    edges: list[Edge] = []
    for no, line in _data_lines(edge_file):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(edge_file, no,
                             f"expected 'src_id dst_id', got {line!r}")
        try:
            src, dst = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(edge_file, no, f"bad edge line {line!r}") from None
        for endpoint in (src, dst):
            if not 0 <= endpoint < n:
                raise ParseError(edge_file, no,
                                 f"unknown page id {endpoint} in edge")
        edges.append((src, dst))
    return edges


def parse_keyword_file(keyword_file, n: int
                       ) -> tuple[dict[str, set[int]], dict[str, float] | None]:
    """Read the keyword index; gamma column must be all-present or absent."""
    keywords: dict[str, set[int]] = {}
    seen_gamma: dict[str, float] = {}
    weighted = unweighted = 0
    for no, line in _data_lines(keyword_file):
        parts = line.split("\t")
        if len(parts) not in (2, 3) or not parts[0]:
            raise ParseError(keyword_file, no,
                             f"expected 'keyword<TAB>page_id[<TAB>gamma]', got {line!r}")
        kw = parts[0]
        try:
            pid = int(parts[1])
        except ValueError:
            raise ParseError(keyword_file, no,
                             f"bad page id {parts[1]!r}") from None
        if not 0 <= pid < n:
            raise ParseError(keyword_file, no, f"unknown page id {pid}")
        keywords.setdefault(kw, set()).add(pid)
        if len(parts) == 3:
            weighted += 1
            try:
                g = float(parts[2])
            except ValueError:
                raise ParseError(keyword_file, no,
                                 f"bad gamma {parts[2]!r}") from None
            if kw in seen_gamma and seen_gamma[kw] != g:
                raise ParseError(keyword_file, no,
                                 f"conflicting gamma for keyword {kw!r}")
            seen_gamma[kw] = g
        else:
            unweighted += 1
    if weighted and unweighted:
        raise ParseError(keyword_file, 0,
                         "keyword file mixes weighted and unweighted lines")
    gammas = None
    if weighted:
        missing_g = sorted(set(keywords) - set(seen_gamma))
        if missing_g:
            raise ParseError(keyword_file, 0,
                             f"keywords without gamma: {missing_g[:5]}")
        gammas = seen_gamma
    return keywords, gammas


def load_edge_list(node_file, edge_file, keyword_file=None, *,
                   drop_intra_host: bool = False) -> WebGraph:
    """Load a WebGraph from node/edge/keyword files.

    Malformed lines raise :class:`ParseError` with the file and line
    number; edges naming an unknown page id are an error rather than a
    silent drop.
    """
    urls = parse_node_file(node_file)
    edges = parse_edge_file(edge_file, len(urls))
    keywords = gammas = None
    if keyword_file is not None:
        keywords, gammas = parse_keyword_file(keyword_file, len(urls))
    return WebGraph.from_edges(urls, edges, keywords, gammas,
                               drop_intra_host=drop_intra_host)


def save_edge_list(web: WebGraph, node_file, edge_file,
                   keyword_file=None) -> None:
    """Write a graph back out in canonical (sorted) file form."""
    with open(node_file, "w", encoding="utf-8") as fh:
        for i, url in enumerate(web.urls):
            fh.write(f"{i}\t{url}\n")
    with open(edge_file, "w", encoding="utf-8") as fh:
        for src, dst in web.edges():
            fh.write(f"{src} {dst}\n")
    if keyword_file is not None:
        with open(keyword_file, "w", encoding="utf-8") as fh:
            for kw in sorted(web.keyword_index):
                g = repr(web.keyword_gamma[kw])
                for pid in sorted(web.keyword_index[kw]):
                    fh.write(f"{kw}\t{pid}\t{g}\n")


def limit_outlinks_near(anchor_page: int, core_page: int,
                        ordered_outlinks: Sequence[int],
                        window: int) -> list[int]:
    """Keep only the outlinks around the link to ``core_page``.

    Returns at most ``2 * window + 1`` links: the link to the core page
    plus ``window`` links immediately preceding and following it, in
    their original order.
    """
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    try:
        i = list(ordered_outlinks).index(core_page)
    except ValueError:
        raise GraphError(
            f"page {core_page} not among the outlinks of page {anchor_page}"
        ) from None
    lo = max(0, i - window)
    return list(ordered_outlinks[lo:i + window + 1])
