"""Intent-based Web page relationship scoring over keyword subnetworks.

Three scores relate a pair of pages by routing flow through per-keyword
subnetworks whose edge capacities are the hub values of the originating
pages:

* seek  -- flow both pages can independently push to shared witnesses;
  high when the pages offer similar outgoing navigation.
* fact  -- flow shared witnesses can independently push to each page;
  high when the pages are co-endorsed information sources.
* surf  -- directional max flow from one page to the other through
  credible hub chains.

SimRank and PageSim baselines and a precision-at-r evaluation harness
round out the toolkit.  See the ``relflow`` CLI for the file-based
pipeline.
"""

from .baselines import SimilarityMatrix, pagesim, simrank
from .errors import GraphError, ParseError, RelflowError
from .evaluation import (Judgment, JudgmentSet, RankedRun, load_judgments,
                         load_runs, macro_precision, precision_at_r,
                         precision_table, rel)
from .flow import FlowResult, max_flow
from .hits import HitsScores, compute_hits, dump_hits
from .relscore import (CapacityMap, RelScores, WitnessFlow, WitnessFlows,
                       factrel, flow_fact, flow_seek, rank_related,
                       reduce_fact_capacity, reduce_seek_capacity, score_pair,
                       seekrel, surfrel)
from .subnet import (BuildOptions, KeywordSet, Subnetwork, build_subnetwork,
                     load_subnetwork, page_keywords, save_subnetwork,
                     select_keywords)
from .webgraph import (GraphView, WebGraph, limit_outlinks_near,
                       load_edge_list, save_edge_list)
from .witness import (WitnessEntry, WitnessList, make_fact_witness_list,
                      make_seek_witness_list)

__version__ = "0.1.0"

__all__ = [
    "BuildOptions", "CapacityMap", "FlowResult", "GraphError", "GraphView",
    "HitsScores", "Judgment", "JudgmentSet", "KeywordSet", "ParseError",
    "RankedRun", "RelScores", "RelflowError", "SimilarityMatrix",
    "Subnetwork", "WebGraph", "WitnessEntry", "WitnessFlow", "WitnessFlows",
    "WitnessList", "build_subnetwork", "compute_hits", "dump_hits",
    "factrel", "flow_fact", "flow_seek", "limit_outlinks_near",
    "load_edge_list", "load_judgments", "load_runs", "load_subnetwork",
    "macro_precision", "make_fact_witness_list", "make_seek_witness_list",
    "max_flow", "page_keywords", "pagesim", "precision_at_r",
    "precision_table", "rank_related", "reduce_fact_capacity",
    "reduce_seek_capacity", "rel", "save_edge_list", "save_subnetwork",
    "score_pair", "seekrel", "select_keywords", "simrank", "surfrel",
]
