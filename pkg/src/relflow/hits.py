"""Hub/authority scoring by alternating power iteration.

Each sweep updates authority values from hub values along in-edges,
renormalizes, then updates hub values from the fresh authority values
along out-edges and renormalizes again.  Euclidean (L2) normalization is
part of the contract: it is the normalization under which the bundled
toy network reproduces its reference values.  Iteration stops when the
max-norm change of both vectors falls below ``tolerance`` or the sweep
cap is hit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import GraphError
from .webgraph import GraphView


@dataclass(frozen=True)
class HitsScores:
    """Hub and authority values plus convergence bookkeeping.

    Both vectors have Euclidean norm 1 unless identically zero; a node
    with no out-edges has hub 0 and a node with no in-edges has auth 0.
    """

    hub: Mapping[int, float]
    auth: Mapping[int, float]
    iterations: int
    converged: bool


def sweep_once(view: GraphView, hub: Mapping[int, float],
               auth: Mapping[int, float]) -> tuple[dict, dict]:
    """One alternating update: auth from hub, then hub from new auth."""
    new_auth = {}
    for x in hub:
        new_auth[x] = sum(hub[y] for y in sorted(view.in_neighbors(x)))
    _normalize(new_auth)
    new_hub = {}
    for x in hub:
        new_hub[x] = sum(new_auth[y] for y in sorted(view.out_neighbors(x)))
    _normalize(new_hub)
    return new_hub, new_auth


def _normalize(vec: dict) -> None:
    norm = math.sqrt(sum(v * v for v in vec.values()))
    if norm > 0.0:
        for x in vec:
            vec[x] /= norm


def compute_hits(view: GraphView, tolerance: float = 1e-9,
                 max_iterations: int = 1000) -> HitsScores:
    """Run the alternating iteration to (near) fixed point.

    Starts from all-ones vectors.  The dominant eigenvector is unique up
    to sign for these non-negative matrices, so initialization affects
    only the iteration count.  Edgeless graphs short-circuit to the
    all-zero vectors instead of dividing by zero.
    """
    if tolerance <= 0.0:
        raise ValueError(f"tolerance must be > 0, got {tolerance}")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {max_iterations}")
    nodes = sorted(view.nodes())
    if not nodes:
        raise GraphError("cannot run hub/authority scoring on an empty graph")

    hub = dict.fromkeys(nodes, 1.0)
    auth = dict.fromkeys(nodes, 1.0)
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iterations + 1):
        new_hub, new_auth = sweep_once(view, hub, auth)
        delta = max(
            max(abs(new_hub[x] - hub[x]) for x in nodes),
            max(abs(new_auth[x] - auth[x]) for x in nodes),
        )
        hub, auth = new_hub, new_auth
        if not any(hub.values()) and not any(auth.values()):
            converged = True  # degenerate: stays all-zero forever
            break
        if delta < tolerance:
            converged = True
            break
    return HitsScores(hub, auth, sweeps, converged)


def dump_hits(scores: HitsScores, path) -> None:
    """Write ``page_id<TAB>hub<TAB>auth`` lines, 9 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for x in sorted(scores.hub):
            fh.write(f"{x}\t{scores.hub[x]:.9g}\t{scores.auth[x]:.9g}\n")
