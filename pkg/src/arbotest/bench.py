"""Trial runner with query accounting, CSV reporting, sweeps, and figures.

Trials are independent: trial i runs with seed base+i and its own session,
so a batch is deterministic no matter how it is scheduled. Timing can be
disabled to make the CSV byte-reproducible.
"""

from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .activity import is_active
from .generators import gen_matching_bipartite
from .graph import QueryGraph, QuerySession
from .samplers import EdgeCountError, estimate_edge_count, sample_edge_almost_uniform
from .tester import TesterConfig, test_variant

CSV_COLUMNS = ("trial", "seed", "verdict", "stage", "m_bar",
               "degree_queries", "neighbor_queries", "wall_ms")

OPERATIONS = ("test", "isactive", "estimate-m", "sample-edge")


@dataclass
class TrialReport:
    trial: int
    seed: int
    verdict: str
    stage: str
    m_bar: Optional[int]
    degree_queries: int
    neighbor_queries: int
    wall_ms: int

    @property
    def total_queries(self) -> int:
        return self.degree_queries + self.neighbor_queries

    def row(self) -> Tuple:
        return (self.trial, self.seed, self.verdict, self.stage,
                "" if self.m_bar is None else self.m_bar,
                self.degree_queries, self.neighbor_queries, self.wall_ms)


def _execute(graph: QueryGraph, operation: str, params: Dict, trial: int,
             seed: int, timing: bool) -> TrialReport:
    rng = random.Random(seed)
    session = QuerySession(graph)
    start = time.perf_counter()
    verdict = ""
    stage = ""
    m_bar: Optional[int] = None

    if operation == "test":
        result = test_variant(session, rng, graph.n, params["config"])
        verdict, stage, m_bar = result.answer, result.stage, result.m_bar
    elif operation == "isactive":
        result = is_active(session, rng, params["alpha"], params["gamma"],
                           params["delta"], params["vertex"], params["level"])
        verdict = result.answer
    elif operation == "estimate-m":
        try:
            est = estimate_edge_count(session, rng, graph.n, params["delta"])
            m_bar = est.m_bar
            # the harness knows the true m, so it can flag a broken hint contract
            verdict = "OK" if 2 * m_bar >= graph.m and m_bar <= graph.m else "OUT_OF_RANGE"
        except EdgeCountError:
            verdict = "NO_EDGES"
    elif operation == "sample-edge":
        m_hint = params.get("m_hint") or graph.m
        edge = sample_edge_almost_uniform(session, rng, graph.n, params["eps_s"],
                                          params["delta"], m_hint)
        verdict = "FAIL" if edge is None else f"{edge[0]}-{edge[1]}"
    else:
        raise ValueError(f"unknown operation {operation!r}, expected one of {OPERATIONS}")

    wall = int(round((time.perf_counter() - start) * 1000)) if timing else 0
    return TrialReport(trial=trial, seed=seed, verdict=verdict, stage=stage,
                       m_bar=m_bar, degree_queries=session.degree_queries,
                       neighbor_queries=session.neighbor_queries, wall_ms=wall)


_WORKER_STATE: Dict = {}


def _pool_init(graph, operation, params, timing):
    _WORKER_STATE["args"] = (graph, operation, params, timing)


def _pool_run(job):
    trial, seed = job
    graph, operation, params, timing = _WORKER_STATE["args"]
    return _execute(graph, operation, params, trial, seed, timing)


def run_trials(graph: QueryGraph, operation: str, params: Dict, trials: int,
               seed: int, *, workers: int = 1, timing: bool = True) -> List[TrialReport]:
    """Run one operation ``trials`` times with seeds seed, seed+1, ..."""
    if trials < 1:
        raise ValueError(f"trial count must be >= 1, got {trials}")
    jobs = [(i, seed + i) for i in range(trials)]
    if workers <= 1:
        return [_execute(graph, operation, params, t, s, timing) for t, s in jobs]
    import multiprocessing as mp

    ctx = mp.get_context("fork")
    with ctx.Pool(workers, initializer=_pool_init,
                  initargs=(graph, operation, params, timing)) as pool:
        return pool.map(_pool_run, jobs)


def write_reports(reports: Sequence[TrialReport], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow(report.row())


def reports_csv(reports: Sequence[TrialReport]) -> str:
    buf = io.StringIO()
    write_reports(reports, buf)
    return buf.getvalue()


# --- scaling sweeps ----------------------------------------------------------


@dataclass
class SweepPoint:
    n: int
    m: int
    trials: int
    mean_queries: float
    mean_degree_queries: float
    mean_neighbor_queries: float


def run_sweep(sizes: Sequence[int], alpha: int, eps, trials: int, seed: int,
              *, variant: str = "standard", workers: int = 1) -> List[SweepPoint]:
    """Matching-bipartite instances with m = alpha * n / 2 across ``sizes``."""
    points = []
    for idx, n in enumerate(sizes):
        side = n // 2
        m = side * alpha
        graph = gen_matching_bipartite(n, m, alpha, seed=seed + 7919 * idx)
        config = TesterConfig(alpha=alpha, eps=eps, variant=variant,
                              known_m=m if variant == "known_m" else None)
        reports = run_trials(graph, "test", {"config": config}, trials,
                             seed + 104729 * idx, workers=workers, timing=False)
        total = [r.total_queries for r in reports]
        points.append(SweepPoint(
            n=n, m=graph.m, trials=trials,
            mean_queries=sum(total) / len(total),
            mean_degree_queries=sum(r.degree_queries for r in reports) / len(reports),
            mean_neighbor_queries=sum(r.neighbor_queries for r in reports) / len(reports),
        ))
    return points


def fit_power_law(points: Sequence[SweepPoint]) -> Tuple[float, float]:
    """Least-squares slope and intercept of log(mean queries) vs log(n)."""
    import numpy as np

    xs = np.log([p.n for p in points])
    ys = np.log([p.mean_queries for p in points])
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def fitted_envelope_constant(points: Sequence[SweepPoint]) -> float:
    """Largest ratio of mean queries to (n/sqrt(m)) * ln(n)^3 over the sweep."""
    best = 0.0
    for p in points:
        envelope = (p.n / math.sqrt(p.m)) * math.log(p.n) ** 3
        best = max(best, p.mean_queries / envelope)
    return best


# --- figures ------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_trial_figure(reports: Sequence[TrialReport], path) -> None:
    """Per-trial query counts, colored by verdict, next to the CSV."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    verdicts = sorted({r.verdict for r in reports})
    cmap = plt.get_cmap("tab10")
    for k, verdict in enumerate(verdicts):
        xs = [r.trial for r in reports if r.verdict == verdict]
        ys = [r.total_queries for r in reports if r.verdict == verdict]
        ax.scatter(xs, ys, s=14, color=cmap(k % 10), label=verdict or "(none)")
    ax.set_xlabel("trial")
    ax.set_ylabel("total queries")
    ax.set_title("Queries per trial")
    if verdicts:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_sweep_figure(points: Sequence[SweepPoint], path, *,
                        label: str = "standard") -> None:
    """Log-log mean queries vs n with the fitted power law and the
    (n/sqrt(m)) * ln(n)^3 envelope."""
    plt = _pyplot()
    slope, intercept = fit_power_law(points)
    c = fitted_envelope_constant(points)
    fig, ax = plt.subplots(figsize=(7, 5))
    ns = [p.n for p in points]
    qs = [p.mean_queries for p in points]
    ax.loglog(ns, qs, "o-", label=f"measured ({label})")
    fit = [math.exp(intercept) * n ** slope for n in ns]
    ax.loglog(ns, fit, "--", label=f"fit: slope {slope:.2f}")
    env = [c * (p.n / math.sqrt(p.m)) * math.log(p.n) ** 3 for p in points]
    ax.loglog(ns, env, ":", label=f"{c:.1f} * (n/sqrt(m)) ln^3 n")
    ax.set_xlabel("n")
    ax.set_ylabel("mean total queries")
    ax.set_title("Query scaling")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
