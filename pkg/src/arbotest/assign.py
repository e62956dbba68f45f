"""Deterministic iterative edge assignment and its forest certificate.

The full-access algorithm repeatedly deactivates every vertex whose degree
inside the surviving subgraph is at most 3*alpha + gamma*d(v) (d(v) the
original degree), assigning it its surviving incident edges. The trace it
leaves behind is the ground truth that the randomized local procedures are
measured against, and the kept edges admit an acyclic orientation with
out-degree at most 3*alpha, i.e. a decomposition into at most 3*alpha
forests after a bounded number of removals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from .graph import QueryGraph
from .ratio import Ratio, as_fraction, frac_floor, peel_iterations


@dataclass
class ActivityTrace:
    """Everything the peeling run decided, per vertex and per iteration."""

    alpha: int
    gamma: Fraction
    ell: int
    inactivated_at: List[int]          # iteration in [1, ell], or 0 if still active
    assigned: List[List[int]]          # per vertex: neighbors of its assigned edges
    remaining_edges: List[int]         # |E| of the surviving subgraph, index 0..ell
    B: List[Set[int]]                  # B[i-1] = vertices deactivated at iteration i
    A: List[Set[int]]                  # A[i] = vertices still active after iteration i

    @property
    def a(self) -> List[int]:
        """Per-vertex assigned-edge counts."""
        return [len(lst) for lst in self.assigned]

    def is_active(self, v: int) -> bool:
        return self.inactivated_at[v] == 0

    @property
    def n(self) -> int:
        return len(self.inactivated_at)


def peel(graph: QueryGraph, alpha: int, gamma: Ratio, ell: int) -> ActivityTrace:
    """Run exactly ``ell`` deactivation iterations at slack ``gamma``."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if ell < 0:
        raise ValueError(f"iteration count must be >= 0, got {ell}")
    g = as_fraction(gamma)
    if g < 0:
        raise ValueError(f"gamma must be >= 0, got {g}")

    n = graph.n
    adj = graph.adjacency
    degrees = [len(nbrs) for nbrs in adj]
    # deg <= 3a + g*d(v) for integer deg is deg <= floor(3a + g*d(v))
    cap = [3 * alpha + frac_floor(g * d) for d in degrees]

    active = bytearray([1]) * n
    cur = degrees[:]
    inactivated_at = [0] * n
    assigned: List[List[int]] = [[] for _ in range(n)]
    remaining = [graph.m]
    b_sets: List[Set[int]] = []
    a_sets: List[Set[int]] = [set(range(n))]

    for i in range(1, ell + 1):
        batch = [v for v in range(n) if active[v] and cur[v] <= cap[v]]
        for v in batch:
            # snapshot before any deactivation: fellow batch members count too
            assigned[v] = [u for u in adj[v] if active[u]]
        for v in batch:
            active[v] = 0
            inactivated_at[v] = i
        for v in batch:
            for u in adj[v]:
                if active[u]:
                    cur[u] -= 1
            cur[v] = 0
        b_sets.append(set(batch))
        a_sets.append(a_sets[-1] - b_sets[-1])
        remaining.append(sum(cur[v] for v in range(n) if active[v]) // 2)

    return ActivityTrace(
        alpha=alpha,
        gamma=g,
        ell=ell,
        inactivated_at=inactivated_at,
        assigned=assigned,
        remaining_edges=remaining,
        B=b_sets,
        A=a_sets,
    )


def assign_edges(graph: QueryGraph, alpha: int, eps: Ratio, gamma: Ratio = 0,
                 *, ell: Optional[int] = None) -> ActivityTrace:
    """Peel for ceil(log_{6/5}(1/eps)) iterations (override with ``ell``)."""
    e = as_fraction(eps)
    if not 0 < e <= 1:
        raise ValueError(f"eps must be in (0, 1], got {e}")
    if ell is None:
        ell = peel_iterations(e)
    return peel(graph, alpha, gamma, ell)


@dataclass
class ForestDecomposition:
    """Certificate that the kept edges split into at most 3*alpha forests."""

    alpha: int
    removed_edges: Set[Tuple[int, int]]            # normalized (u, v) with u < v
    oriented_edges: List[Tuple[int, int]]          # kept edges as (tail, head)
    forest_label: Dict[Tuple[int, int], int]       # keyed by (tail, head), in [1, 3*alpha]

    def out_degrees(self, n: int) -> List[int]:
        out = [0] * n
        for tail, _ in self.oriented_edges:
            out[tail] += 1
        return out


def forest_decomposition(graph: QueryGraph, trace: ActivityTrace, alpha: int) -> ForestDecomposition:
    """Remove the surviving edges plus per-vertex excess, orient the rest.

    Orientation goes from the endpoint deactivated first to the one
    deactivated later; ties within the same iteration go from the smaller id
    to the larger. Excess removals take the last-assigned edges in adjacency
    order, which keeps the construction deterministic.
    """
    n = graph.n
    if trace.n != n:
        raise ValueError(f"trace covers {trace.n} vertices but graph has {n}")
    if trace.alpha != alpha:
        raise ValueError(f"trace was built with alpha={trace.alpha}, not {alpha}")

    limit = 3 * alpha
    norm = lambda u, v: (u, v) if u < v else (v, u)

    removed: Set[Tuple[int, int]] = set()
    it = trace.inactivated_at
    for u, v in graph.edges():
        if it[u] == 0 and it[v] == 0:
            removed.add((u, v))
    for v in range(n):
        extra = len(trace.assigned[v]) - limit
        if extra > 0:
            for u in trace.assigned[v][limit:]:
                removed.add(norm(u, v))

    never = trace.ell + 1  # rank for vertices that stayed active
    oriented: List[Tuple[int, int]] = []
    forest_label: Dict[Tuple[int, int], int] = {}
    slot_used = [0] * n
    for u, v in graph.edges():
        if (u, v) in removed:
            continue
        ku = (it[u] if it[u] else never, u)
        kv = (it[v] if it[v] else never, v)
        tail, head = (u, v) if ku < kv else (v, u)
        slot_used[tail] += 1
        if slot_used[tail] > limit:
            raise AssertionError(f"vertex {tail} exceeded {limit} kept out-edges")
        oriented.append((tail, head))
        forest_label[(tail, head)] = slot_used[tail]

    return ForestDecomposition(alpha=alpha, removed_edges=removed,
                               oriented_edges=oriented, forest_label=forest_label)


@dataclass
class PeelBoundsReport:
    """Measured survivor counts against the close/far thresholds."""

    alpha: int
    eps: Fraction
    gamma: Fraction
    beta: Fraction
    m: int
    ell: int
    edges_after_peel_zero: int
    close_threshold: Fraction          # 5 * eps * m
    close_bound_holds: bool            # survivors at slack 0 <= close_threshold
    edges_after_peel_gamma: int
    far_threshold: Fraction            # (beta - 2*gamma) * m
    far_bound_holds: bool              # survivors at slack gamma > far_threshold


def verify_peel_bounds(graph: QueryGraph, alpha: int, eps: Ratio, gamma: Ratio,
                  beta: Ratio) -> PeelBoundsReport:
    """Peel at slack 0 and at ``gamma`` and compare survivor counts.

    Makes no claim about which side of the dichotomy the graph is on; the
    caller supplies ``beta`` (normally an exact distance from the oracles).
    """
    e = as_fraction(eps)
    g = as_fraction(gamma)
    b = as_fraction(beta)
    ell = peel_iterations(e)
    trace0 = peel(graph, alpha, 0, ell)
    trace_g = trace0 if g == 0 else peel(graph, alpha, g, ell)
    m = graph.m
    survivors0 = trace0.remaining_edges[-1]
    survivors_g = trace_g.remaining_edges[-1]
    close_threshold = 5 * e * m
    far_threshold = (b - 2 * g) * m
    return PeelBoundsReport(
        alpha=alpha,
        eps=e,
        gamma=g,
        beta=b,
        m=m,
        ell=ell,
        edges_after_peel_zero=survivors0,
        close_threshold=close_threshold,
        close_bound_holds=survivors0 <= close_threshold,
        edges_after_peel_gamma=survivors_g,
        far_threshold=far_threshold,
        far_bound_holds=survivors_g > far_threshold,
    )
