"""Command-line pipeline: build subnetwork caches, score pairs, rank
related pages, run baselines, evaluate ranked runs.

Subcommands map to pipeline stages so each stage is independently
testable and cacheable.  All commands are deterministic given identical
input files and flags; outputs are written via write-then-rename so a
failure never leaves a partial file behind.  The ``RELFLOW_CACHE``
environment variable supplies the default cache directory.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from urllib.parse import quote, unquote

from . import baselines, evaluation
from .errors import GraphError, RelflowError
from .relscore import RELATIONS, rank_related, score_pair
from .subnet import (BuildOptions, Subnetwork, build_subnetwork,
                     format_subnetwork, load_subnetwork, page_keywords,
                     select_keywords)
from .webgraph import (WebGraph, load_edge_list, parse_keyword_file,
                       parse_node_file)

CACHE_ENV = "RELFLOW_CACHE"


@dataclass(frozen=True)
class Config:
    """Tunables shared across subcommands.

    Keyword significance weights come from the keyword file's optional
    gamma column (uniform 1/|K| otherwise), so they live on the loaded
    graph rather than here.
    """

    depth: int = 3
    topk: int = 5
    tolerance: float = 1e-9
    max_iterations: int = 1000
    inlink_cap: int = 1000
    sibling_window: int = 5
    drop_intra_host: bool = False
    paper_scale: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.topk < 1:
            raise ValueError("topk must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def build_options(self) -> BuildOptions:
        return BuildOptions(self.inlink_cap, self.sibling_window,
                            self.tolerance, self.max_iterations)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cache_name(keyword: str) -> str:
    return quote(keyword, safe="") + ".subnet"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _atomic_write(Path(out), text)


def _build_one(keyword: str, web: WebGraph,
               options: BuildOptions) -> tuple[str, Subnetwork]:
    return keyword, build_subnetwork(web, keyword, options)


def cmd_build(args, config: Config) -> int:
    web = load_edge_list(args.nodes, args.edges, args.keywords,
                         drop_intra_host=config.drop_intra_host)
    if not web.keyword_index:
        raise GraphError("keyword file defines no keywords")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    keywords = sorted(web.keyword_index)
    worker = partial(_build_one, web=web, options=config.build_options())
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            built = dict(pool.map(worker, keywords))
    else:
        built = dict(map(worker, keywords))

    for i, kw in enumerate(keywords, start=1):
        net = built[kw]
        _atomic_write(out_dir / _cache_name(kw), format_subnetwork(net))
        if args.dump_hits:
            lines = [f"{x}\t{net.hub[x]:.9g}\t{net.auth[x]:.9g}\n"
                     for x in net.nodes]
            _atomic_write(out_dir / (quote(kw, safe="") + ".hits"),
                          "".join(lines))
        print(f"[{i}/{len(keywords)}] {kw}: {len(net.nodes)} nodes, "
              f"{net.n_edges} edges, maxwt {net.maxwt:.6g}", file=sys.stderr)

    _atomic_write(out_dir / "nodes.tsv",
                  "".join(f"{i}\t{u}\n" for i, u in enumerate(web.urls)))
    kw_lines = []
    for kw in keywords:
        g = repr(web.keyword_gamma[kw])
        for pid in sorted(web.keyword_index[kw]):
            kw_lines.append(f"{kw}\t{pid}\t{g}\n")
    _atomic_write(out_dir / "keywords.tsv", "".join(kw_lines))
    return 0


def _cache_dir(args) -> Path:
    cache = args.cache or os.environ.get(CACHE_ENV)
    if not cache:
        raise GraphError(
            f"no cache directory: pass --cache or set ${CACHE_ENV}")
    path = Path(cache)
    if not path.is_dir():
        raise GraphError(f"cache directory {path} does not exist")
    return path


def _load_cache(cache_dir: Path) -> tuple[WebGraph, dict[str, Subnetwork]]:
    urls = parse_node_file(cache_dir / "nodes.tsv")
    keywords, gammas = parse_keyword_file(cache_dir / "keywords.tsv", len(urls))
    web = WebGraph.from_edges(urls, [], keywords, gammas)
    subnets = {}
    for path in sorted(cache_dir.glob("*.subnet")):
        net = load_subnetwork(path)
        if unquote(path.name[:-len(".subnet")]) != net.keyword:
            raise GraphError(f"cache file {path.name} names keyword "
                             f"{net.keyword!r}; the file was renamed?")
        subnets[net.keyword] = net
    missing = sorted(set(keywords) - set(subnets))
    if missing:
        raise GraphError(f"cache is missing subnetworks for {missing[:5]}")
    return web, subnets


def _paper_scale_factor(subnets: dict[str, Subnetwork],
                        chosen_keywords: list[str]) -> float:
    if len(chosen_keywords) != 1:
        raise GraphError(
            "--paper-scale shows flows at the 1000*maxwt display scale, "
            "which is only defined when exactly one keyword subnetwork "
            f"is in play (got {len(chosen_keywords)})")
    return 1000.0 * subnets[chosen_keywords[0]].maxwt


def cmd_score(args, config: Config) -> int:
    web, subnets = _load_cache(_cache_dir(args))
    u, v = web.id_of(args.u_url), web.id_of(args.v_url)
    if u == v:
        raise GraphError("the two urls name the same page")
    scores = score_pair(web, u, v, k=config.topk, d=config.depth,
                        subnets=subnets)
    scale = 1.0
    if config.paper_scale:
        chosen = select_keywords(page_keywords(web, u), page_keywords(web, v),
                                 config.topk)
        scale = _paper_scale_factor(subnets, chosen.names())
    vals = "\t".join(f"{s * scale:.6g}" for s in scores.as_tuple())
    _emit(f"{args.u_url}\t{args.v_url}\t{vals}\n", args.out)
    return 0


def _rank_one(v, web, target, relation, config, subnets):
    from . import relscore
    ku = page_keywords(web, target)
    kv = page_keywords(web, v)
    if relation == "seek":
        s = relscore.seekrel(web, ku, kv, target, v, k=config.topk,
                             d=config.depth, subnets=subnets)
    elif relation == "fact":
        s = relscore.factrel(web, ku, kv, target, v, k=config.topk,
                             d=config.depth, subnets=subnets)
    else:
        fwd, back = relscore.surfrel(web, ku, kv, target, v, k=config.topk,
                                     subnets=subnets)
        s = fwd if relation == "surf" else back
    return v, s


def cmd_rank(args, config: Config) -> int:
    from .flow import ZERO_EPS

    web, subnets = _load_cache(_cache_dir(args))
    target = web.id_of(args.target_url)
    if config.jobs > 1:
        candidates = sorted(
            {p for kw, _ in page_keywords(web, target).entries
             for p in web.keyword_index[kw]} - {target})
        worker = partial(_rank_one, web=web, target=target,
                         relation=args.relation, config=config,
                         subnets=subnets)
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            scored = [(v, s) for v, s in pool.map(worker, candidates)
                      if s > ZERO_EPS]
        scored.sort(key=lambda t: (-t[1], t[0]))
        ranked = scored[:args.n]
    else:
        ranked = rank_related(web, target, args.relation, args.n,
                              k=config.topk, d=config.depth, subnets=subnets)
    scale = 1.0
    if config.paper_scale:
        if len(subnets) != 1:
            raise GraphError("--paper-scale with rank requires a "
                             "single-keyword cache")
        scale = 1000.0 * next(iter(subnets.values())).maxwt
    lines = [f"{i}\t{web.url_of(p)}\t{s * scale:.6g}\n"
             for i, (p, s) in enumerate(ranked, start=1)]
    _emit("".join(lines), args.out)
    return 0


def cmd_baseline(args, config: Config) -> int:
    web = load_edge_list(args.nodes, args.edges,
                         drop_intra_host=config.drop_intra_host)
    if args.algorithm == "simrank":
        decay = 1.0 if args.decay is None else args.decay
        matrix = baselines.simrank(web, decay=decay,
                                   iterations=args.iterations)
    else:
        decay = 0.8 if args.decay is None else args.decay
        matrix = baselines.pagesim(web, decay=decay, radius=args.radius,
                                   damping=args.damping)
    lines = [f"{a}\t{b}\t{matrix.values[(a, b)]:.6g}\n"
             for a, b in sorted(matrix.values)]
    _emit("".join(lines), args.out)
    return 0


def cmd_eval(args, config: Config) -> int:
    runs = evaluation.load_runs(args.runs)
    judgments = evaluation.load_judgments(args.judgments)
    on_missing = "error" if args.strict_judgments else "warn"
    table = evaluation.precision_table(runs, judgments, args.r_max,
                                       on_missing=on_missing)
    lines = [f"{algo}\t{question}\t{r}\t{precision:.6g}\n"
             for algo, question, r, precision in table]
    _emit("".join(lines), args.out)
    return 0


def _add_tuning_flags(sub):
    sub.add_argument("--depth", "-d", type=int, default=3,
                     help="witness search depth in hops (default 3)")
    sub.add_argument("--topk", "-k", type=int, default=5,
                     help="keywords kept per pair (default 5)")
    sub.add_argument("--paper-scale", action="store_true",
                     help="display flows multiplied by 1000*maxwt "
                          "(single-keyword graphs only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relflow",
        description="Intent-based page relationship scoring over "
                    "keyword subnetworks.")
    commands = parser.add_subparsers(dest="command", required=True)

    b = commands.add_parser("build", help="build per-keyword subnetwork caches")
    b.add_argument("--nodes", required=True, help="node file (id<TAB>url)")
    b.add_argument("--edges", required=True, help="edge file (src dst)")
    b.add_argument("--keywords", required=True,
                   help="keyword file (keyword<TAB>page_id[<TAB>gamma])")
    b.add_argument("--out", default=None,
                   help=f"cache directory (default ${CACHE_ENV})")
    b.add_argument("--inlink-cap", type=int, default=1000,
                   help="max in-linkers pulled in per core page")
    b.add_argument("--sibling-window", type=int, default=5,
                   help="outlinks kept on each side of an in-linker's "
                        "link to a core page")
    b.add_argument("--drop-intra-host", action="store_true",
                   help="drop edges whose endpoints share a URL host")
    b.add_argument("--tolerance", type=float, default=1e-9,
                   help="hub/authority convergence tolerance")
    b.add_argument("--max-iterations", type=int, default=1000,
                   help="hub/authority sweep cap")
    b.add_argument("--dump-hits", action="store_true",
                   help="also write per-keyword hub/authority dumps")
    b.add_argument("--jobs", type=int, default=1,
                   help="parallel subnetwork builds")
    b.set_defaults(func=cmd_build)

    s = commands.add_parser("score", help="score one pair of pages")
    s.add_argument("u_url")
    s.add_argument("v_url")
    s.add_argument("--cache", default=None,
                   help=f"cache directory (default ${CACHE_ENV})")
    s.add_argument("--out", default=None, help="output file (default stdout)")
    _add_tuning_flags(s)
    s.set_defaults(func=cmd_score)

    r = commands.add_parser("rank", help="rank pages related to a target")
    r.add_argument("target_url")
    r.add_argument("--relation", choices=RELATIONS, default="fact")
    r.add_argument("-n", type=int, default=10, help="list length (default 10)")
    r.add_argument("--cache", default=None,
                   help=f"cache directory (default ${CACHE_ENV})")
    r.add_argument("--out", default=None, help="output file (default stdout)")
    r.add_argument("--jobs", type=int, default=1,
                   help="parallel candidate scoring")
    _add_tuning_flags(r)
    r.set_defaults(func=cmd_rank)

    base = commands.add_parser("baseline", help="run a baseline similarity")
    base.add_argument("--nodes", required=True)
    base.add_argument("--edges", required=True)
    base.add_argument("--algorithm", choices=("simrank", "pagesim"),
                      required=True)
    base.add_argument("--decay", type=float, default=None,
                      help="simrank decay (default 1) or pagesim per-hop "
                           "decay (default 0.8)")
    base.add_argument("--iterations", type=int, default=20,
                      help="simrank iterations")
    base.add_argument("--radius", type=int, default=3,
                      help="pagesim propagation radius")
    base.add_argument("--damping", type=float, default=0.85,
                      help="pagesim internal PageRank damping")
    base.add_argument("--drop-intra-host", action="store_true")
    base.add_argument("--out", default=None, help="output file (default stdout)")
    base.set_defaults(func=cmd_baseline)

    e = commands.add_parser("eval", help="precision-at-r over judged runs")
    e.add_argument("--runs", required=True,
                   help="runs file (target<TAB>algorithm<TAB>rank<TAB>url)")
    e.add_argument("--judgments", required=True,
                   help="judgments file "
                        "(target<TAB>result<TAB>question<TAB>yes<TAB>total)")
    e.add_argument("--r-max", type=int, default=10)
    e.add_argument("--strict-judgments", action="store_true",
                   help="error on results missing from the judgment set")
    e.add_argument("--out", default=None, help="output file (default stdout)")
    e.set_defaults(func=cmd_eval)
    return parser


def _make_config(args) -> Config:
    fields = dict(
        depth=getattr(args, "depth", 3),
        topk=getattr(args, "topk", 5),
        tolerance=getattr(args, "tolerance", 1e-9),
        max_iterations=getattr(args, "max_iterations", 1000),
        inlink_cap=getattr(args, "inlink_cap", 1000),
        sibling_window=getattr(args, "sibling_window", 5),
        drop_intra_host=getattr(args, "drop_intra_host", False),
        paper_scale=getattr(args, "paper_scale", False),
        jobs=getattr(args, "jobs", 1),
    )
    return Config(**fields)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "out", None) is None and args.command == "build":
        args.out = os.environ.get(CACHE_ENV)
        if not args.out:
            print(f"relflow: error: build needs --out or ${CACHE_ENV}",
                  file=sys.stderr)
            return 2
    try:
        config = _make_config(args)
        return args.func(args, config)
    except (RelflowError, ValueError, OSError) as exc:
        print(f"relflow: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
