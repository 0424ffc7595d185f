"""Relevance-judgment ingestion and precision-at-r.

Judgments arrive as aggregated yes-counts per (target, result, question)
row: the survey question only ever feeds the yes/total ratio, so the
file format does not encode respondent identity.  Precision-at-r is the
mean judged relevance of the first r ranked results, and the macro
variant averages it unweighted across target pages.

File formats (TSV, ``#`` comments):

* judgments -- ``target_url<TAB>result_url<TAB>question<TAB>yes<TAB>total``
* runs      -- ``target_url<TAB>algorithm<TAB>rank<TAB>result_url``
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import GraphError, ParseError

log = logging.getLogger(__name__)

QUESTIONS = ("visit", "similar", "relevant")


@dataclass(frozen=True)
class Judgment:
    yes: int
    total: int

    def __post_init__(self):
        if self.total < 1:
            raise ValueError(f"total respondents must be >= 1, got {self.total}")
        if not 0 <= self.yes <= self.total:
            raise ValueError(f"yes count {self.yes} outside [0, {self.total}]")


@dataclass(frozen=True)
class JudgmentSet:
    """Aggregated yes/total counts for one target page and one question."""

    target: str
    question: str
    scores: Mapping[str, Judgment]

    def __post_init__(self):
        if self.question not in QUESTIONS:
            raise ValueError(f"question must be one of {QUESTIONS}, "
                             f"got {self.question!r}")


@dataclass(frozen=True)
class RankedRun:
    """One algorithm's ordered results for one target page."""

    target: str
    algorithm: str
    results: tuple[str, ...]

    def __post_init__(self):
        if not self.results:
            raise ValueError("a ranked run cannot be empty")
        if len(set(self.results)) != len(self.results):
            raise ValueError("duplicate result url within a run")


def rel(judgments: JudgmentSet, result_url: str) -> float:
    """Fraction of respondents answering yes for one result."""
    try:
        j = judgments.scores[result_url]
    except KeyError:
        raise GraphError(f"no judgment for result {result_url!r} "
                         f"(target {judgments.target!r})") from None
    return j.yes / j.total


def precision_at_r(run: RankedRun, judgments: JudgmentSet, r: int,
                   *, on_missing: str = "warn") -> float:
    """Mean judged relevance over the first r ranks.

    Results missing from the judgment set score 0 with a warning by
    default; pass ``on_missing="error"`` to make that a hard failure.
    """
    if not 1 <= r <= len(run.results):
        raise ValueError(f"r must be in [1, {len(run.results)}], got {r}")
    if on_missing not in ("warn", "error"):
        raise ValueError(f"on_missing must be 'warn' or 'error', got {on_missing!r}")
    acc = 0.0
    for url in run.results[:r]:
        if url in judgments.scores:
            acc += rel(judgments, url)
        elif on_missing == "error":
            raise GraphError(f"no judgment for result {url!r} "
                             f"(target {run.target!r})")
        else:
            log.warning("no judgment for %r (target %r); scoring rel = 0",
                        url, run.target)
    return acc / r


def macro_precision(runs: Iterable[RankedRun],
                    judgments: Mapping[str, JudgmentSet], r: int,
                    *, on_missing: str = "warn") -> float:
    """Unweighted mean of precision-at-r across target pages."""
    runs = list(runs)
    if not runs:
        raise ValueError("cannot average over zero runs")
    values = []
    for run in runs:
        if run.target not in judgments:
            raise GraphError(f"no judgments for target {run.target!r}")
        values.append(precision_at_r(run, judgments[run.target], r,
                                     on_missing=on_missing))
    return sum(values) / len(values)


def load_judgments(path) -> dict[tuple[str, str], JudgmentSet]:
    """Parse a judgments file into sets keyed by (target, question)."""
    rows: dict[tuple[str, str], dict[str, Judgment]] = {}
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ParseError(path, no, f"expected 5 fields, got {line!r}")
            target, result, question = parts[0], parts[1], parts[2]
            if question not in QUESTIONS:
                raise ParseError(path, no, f"unknown question {question!r}")
            try:
                judgment = Judgment(int(parts[3]), int(parts[4]))
            except ValueError as exc:
                raise ParseError(path, no, str(exc)) from None
            bucket = rows.setdefault((target, question), {})
            if result in bucket:
                raise ParseError(path, no,
                                 f"duplicate judgment for {result!r}")
            bucket[result] = judgment
    return {key: JudgmentSet(key[0], key[1], scores)
            for key, scores in rows.items()}


def load_runs(path) -> list[RankedRun]:
    """Parse a runs file; ranks must form 1..n within each run."""
    rows: dict[tuple[str, str], dict[int, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(path, no, f"expected 4 fields, got {line!r}")
            target, algorithm, rank_s, result = parts
            try:
                rank = int(rank_s)
            except ValueError:
                raise ParseError(path, no, f"bad rank {rank_s!r}") from None
            bucket = rows.setdefault((target, algorithm), {})
            if rank in bucket:
                raise ParseError(path, no, f"duplicate rank {rank}")
            bucket[rank] = result
    if not rows:
        raise ParseError(path, 0, "runs file contains no runs")
    runs = []
    for (target, algorithm), by_rank in sorted(rows.items()):
        expected = list(range(1, len(by_rank) + 1))
        if sorted(by_rank) != expected:
            raise ParseError(path, 0,
                             f"ranks for ({target!r}, {algorithm!r}) are not 1..n")
        runs.append(RankedRun(target, algorithm,
                              tuple(by_rank[i] for i in expected)))
    return runs


def precision_table(runs: Iterable[RankedRun],
                    judgments: Mapping[tuple[str, str], JudgmentSet],
                    r_max: int, *, on_missing: str = "warn"
                    ) -> list[tuple[str, str, int, float]]:
    """Rows of (algorithm, question, r, macro precision) for r in 1..r_max."""
    if r_max < 1:
        raise ValueError(f"r_max must be >= 1, got {r_max}")
    runs = list(runs)
    algorithms = sorted({run.algorithm for run in runs})
    questions = sorted({q for (_, q) in judgments})
    table = []
    for algorithm in algorithms:
        algo_runs = [run for run in runs if run.algorithm == algorithm]
        for question in questions:
            judged = {run.target: judgments[(run.target, question)]
                      for run in algo_runs if (run.target, question) in judgments}
            covered = [run for run in algo_runs if run.target in judged]
            if not covered:
                continue
            for r in range(1, r_max + 1):
                table.append((algorithm, question, r,
                              macro_precision(covered, judged, r,
                                              on_missing=on_missing)))
    return table
