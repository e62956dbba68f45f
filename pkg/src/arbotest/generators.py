"""Instance generators for benchmark fixtures and adversarial families.

Families built from edge-disjoint cyclic shift matchings have an exact,
declared edge count; every instance gets a uniform random vertex relabeling
from its seed. Certification labels (arboricity, distances) are always
recomputed by the exact oracles, never trusted from the generator.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exact import distance_to_arboricity, exact_arboricity
from .graph import QueryGraph, load_graph
from .ratio import Ratio, as_fraction

FAMILIES = ("matching-bipartite", "planted-clique", "far-bipartite",
            "preferential-attachment", "erdos-renyi", "forest")

DESK_SCALE_N = 50_000
DESK_SCALE_M = 200_000


@dataclass
class InstanceDescriptor:
    """Parameters of one generated instance."""

    family: str
    n: int
    seed: int
    alpha: int = 1
    m_bar: Optional[int] = None        # base edge count for the matching families
    eps: Optional[Fraction] = None     # far-bipartite multiplicity 3*alpha*(1+2*eps)
    clique: Optional[int] = None       # planted-clique size override
    p: Optional[float] = None          # erdos-renyi edge probability
    max_degree: Optional[int] = None   # forest attachment cap
    relabel: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.eps is not None:
            self.eps = as_fraction(self.eps)


def _relabel(edges: List[Tuple[int, int]], n: int, rng: random.Random) -> List[Tuple[int, int]]:
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[u], perm[v]) for u, v in edges]


def _finish(edges: List[Tuple[int, int]], n: int, rng: random.Random,
            relabel: bool) -> QueryGraph:
    if relabel:
        edges = _relabel(edges, n, rng)
    return load_graph(edges, n)


def _shift_matchings(side: int, count: int, left0: int, right0: int) -> List[Tuple[int, int]]:
    """``count`` edge-disjoint perfect matchings between two sides of ``side``
    vertices, realized as cyclic shifts; distinct shifts never share an edge."""
    edges = []
    for shift in range(count):
        for i in range(side):
            edges.append((left0 + i, right0 + (i + shift) % side))
    return edges


def gen_matching_bipartite(n: int, m_bar: int, alpha: int, seed: int,
                           *, relabel: bool = True) -> QueryGraph:
    """Two sides of m_bar/alpha vertices joined by alpha disjoint matchings."""
    if alpha < 1 or m_bar < 1:
        raise ValueError("alpha and m_bar must be >= 1")
    if m_bar % alpha != 0:
        raise ValueError(f"m_bar={m_bar} must be a multiple of alpha={alpha}")
    side = m_bar // alpha
    if alpha > side:
        raise ValueError(f"need alpha <= side for disjoint matchings, got {alpha} > {side}")
    if 2 * side > n:
        raise ValueError(f"n={n} too small for two sides of {side}")
    rng = random.Random(seed)
    edges = _shift_matchings(side, alpha, 0, side)
    return _finish(edges, n, rng, relabel)


def gen_planted_clique(n: int, m_bar: int, alpha: int, seed: int,
                       *, clique: Optional[int] = None,
                       relabel: bool = True) -> QueryGraph:
    """Matching-bipartite block plus a clique on fresh vertices.

    Default clique size is ceil(sqrt(m_bar)); pass ``clique`` to control the
    planted density directly.
    """
    if m_bar % alpha != 0:
        raise ValueError(f"m_bar={m_bar} must be a multiple of alpha={alpha}")
    side = m_bar // alpha
    q = clique if clique is not None else math.isqrt(m_bar - 1) + 1
    if q < 2:
        raise ValueError(f"clique size must be >= 2, got {q}")
    if 2 * side + q > n:
        raise ValueError(f"n={n} too small for sides of {side} plus a {q}-clique")
    rng = random.Random(seed)
    edges = _shift_matchings(side, alpha, 0, side)
    base = 2 * side
    for i in range(q):
        for j in range(i + 1, q):
            edges.append((base + i, base + j))
    return _finish(edges, n, rng, relabel)


def gen_far_bipartite(n: int, m: int, alpha: int, eps: Ratio, seed: int,
                      *, relabel: bool = True) -> QueryGraph:
    """Sides of m/(3*alpha*(1+2*eps)) vertices with that many shift matchings."""
    e = as_fraction(eps)
    multiplicity = 3 * alpha * (1 + 2 * e)
    if multiplicity.denominator != 1:
        raise ValueError(
            f"3*alpha*(1+2*eps) = {multiplicity} is not an integer; pick compatible alpha/eps"
        )
    count = int(multiplicity)
    if m % count != 0:
        raise ValueError(f"m={m} must be a multiple of {count}")
    side = m // count
    if count > side:
        raise ValueError(f"need matching count <= side, got {count} > {side}")
    if 2 * side > n:
        raise ValueError(f"n={n} too small for two sides of {side}")
    rng = random.Random(seed)
    edges = _shift_matchings(side, count, 0, side)
    return _finish(edges, n, rng, relabel)


def gen_preferential_attachment(n: int, alpha: int, seed: int,
                                *, relabel: bool = True) -> QueryGraph:
    """Each arriving vertex attaches alpha edges to degree-proportional
    targets (distinct per arrival), seeded from a small clique."""
    k = alpha
    if k < 1:
        raise ValueError("alpha must be >= 1")
    if n < k + 1:
        raise ValueError(f"n={n} too small for {k} attachments per vertex")
    rng = random.Random(seed)
    edges: List[Tuple[int, int]] = []
    endpoints: List[int] = []
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            edges.append((i, j))
            endpoints.append(i)
            endpoints.append(j)
    choice = rng.choice
    for v in range(k + 1, n):
        targets = set()
        while len(targets) < k:
            targets.add(choice(endpoints))
        for u in sorted(targets):
            edges.append((u, v))
            endpoints.append(u)
            endpoints.append(v)
    return _finish(edges, n, rng, relabel)


def gen_erdos_renyi(n: int, p: float, seed: int, *, relabel: bool = True) -> QueryGraph:
    """G(n, p) by geometric gap skipping over the pair sequence."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = random.Random(seed)
    edges: List[Tuple[int, int]] = []
    if p >= 1:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif p > 0:
        logq = math.log(1.0 - p)
        v, w = 1, -1
        while v < n:
            w += 1 + int(math.log(1.0 - rng.random()) / logq)
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                edges.append((w, v))
    return _finish(edges, n, rng, relabel)


def gen_forest(n: int, seed: int, *, max_degree: Optional[int] = None,
               relabel: bool = True) -> QueryGraph:
    """Random attachment tree; ``max_degree`` caps every vertex degree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_degree is not None and max_degree < 2:
        raise ValueError("max_degree must be >= 2 to grow a tree")
    rng = random.Random(seed)
    deg = [0] * n
    edges: List[Tuple[int, int]] = []
    randrange = rng.randrange
    for v in range(1, n):
        while True:
            u = randrange(v)
            if max_degree is None or deg[u] < max_degree:
                break
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    return _finish(edges, n, rng, relabel)


def gen_instance(desc: InstanceDescriptor) -> QueryGraph:
    """Build the graph a descriptor names."""
    if desc.family == "matching-bipartite":
        return gen_matching_bipartite(desc.n, desc.m_bar, desc.alpha, desc.seed,
                                      relabel=desc.relabel)
    if desc.family == "planted-clique":
        return gen_planted_clique(desc.n, desc.m_bar, desc.alpha, desc.seed,
                                  clique=desc.clique, relabel=desc.relabel)
    if desc.family == "far-bipartite":
        if desc.eps is None:
            raise ValueError("far-bipartite needs eps")
        return gen_far_bipartite(desc.n, desc.m_bar, desc.alpha, desc.eps, desc.seed,
                                 relabel=desc.relabel)
    if desc.family == "preferential-attachment":
        return gen_preferential_attachment(desc.n, desc.alpha, desc.seed,
                                           relabel=desc.relabel)
    if desc.family == "erdos-renyi":
        if desc.p is None:
            raise ValueError("erdos-renyi needs p")
        return gen_erdos_renyi(desc.n, desc.p, desc.seed, relabel=desc.relabel)
    if desc.family == "forest":
        return gen_forest(desc.n, desc.seed, max_degree=desc.max_degree,
                          relabel=desc.relabel)
    raise ValueError(f"unknown family {desc.family!r}")


def certify(graph: QueryGraph, alpha: int) -> Dict[str, object]:
    """Recompute exact labels for an instance (desk-scale graphs only)."""
    if graph.n > DESK_SCALE_N or graph.m > DESK_SCALE_M:
        raise ValueError(
            f"certification is capped at n <= {DESK_SCALE_N}, m <= {DESK_SCALE_M}"
        )
    report_alpha = distance_to_arboricity(graph, alpha)
    report_3alpha = distance_to_arboricity(graph, 3 * alpha)
    return {
        "n": graph.n,
        "m": graph.m,
        "alpha": alpha,
        "arboricity": exact_arboricity(graph),
        "distance_alpha": report_alpha,
        "distance_3alpha": report_3alpha,
    }
