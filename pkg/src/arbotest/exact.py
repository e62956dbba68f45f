"""Exact ground-truth computations: forest packings, arboricity, distance.

The workhorse is a graphic matroid union: the largest edge set coverable by
k edge-disjoint forests, computed by augmenting paths in the exchange graph.
For each augmentation run the forests are rooted once and fundamental cycles
are walked with union-find skipping, so every forest edge is scanned at most
once per run and per color. Failed augmentations certify a saturated vertex
set, which later insertions inside it skip outright; that keeps dense
pockets (planted cliques) cheap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .assign import peel
from .graph import QueryGraph
from .ratio import Ratio

BRUTE_FORCE_LIMIT = 16


class _ForestPacking:
    """k edge-disjoint forests over a fixed edge list, with augmentation."""

    def __init__(self, n: int, edges: List[Tuple[int, int]], k: int):
        self.n = n
        self.edges = edges
        self.k = k
        self.color = [-1] * len(edges)
        # per color: {v: {u: edge_id}}
        self.adj: List[Dict[int, Dict[int, int]]] = [dict() for _ in range(k)]
        # per color: union-find over vertices for the no-cycle fast path
        self.uf: List[List[int]] = [list(range(n)) for _ in range(k)]
        self.dirty = [False] * k
        # saturated regions: union-find over vertices + flag on roots
        self.sat = list(range(n))
        self.saturated = [False] * n
        self.covered = 0

    # --- union-find helpers --------------------------------------------------

    @staticmethod
    def _find(parent: List[int], x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def _color_find(self, j: int, x: int) -> int:
        if self.dirty[j]:
            self._rebuild(j)
        return self._find(self.uf[j], x)

    def _rebuild(self, j: int) -> None:
        parent = list(range(self.n))
        find = self._find
        for v, nbrs in self.adj[j].items():
            for u in nbrs:
                if u > v:
                    ru, rv = find(parent, u), find(parent, v)
                    if ru != rv:
                        parent[ru] = rv
        self.uf[j] = parent
        self.dirty[j] = False

    # --- forest mutation ------------------------------------------------------

    def _forest_add(self, j: int, eid: int) -> None:
        u, v = self.edges[eid]
        self.adj[j].setdefault(u, {})[v] = eid
        self.adj[j].setdefault(v, {})[u] = eid

    def _forest_remove(self, j: int, eid: int) -> None:
        u, v = self.edges[eid]
        del self.adj[j][u][v]
        del self.adj[j][v][u]

    # --- per-run rooted view of one forest ------------------------------------

    def _root_forest(self, j: int):
        """Rooted parents, depths and component ids; valid until mutation."""
        parent_v: Dict[int, int] = {}
        parent_e: Dict[int, int] = {}
        depth: Dict[int, int] = {}
        comp: Dict[int, int] = {}
        adj = self.adj[j]
        cid = 0
        for root in adj:
            if root in depth:
                continue
            depth[root] = 0
            comp[root] = cid
            queue = deque([root])
            while queue:
                x = queue.popleft()
                dx = depth[x]
                for y, eid in adj[x].items():
                    if y in depth:
                        continue
                    depth[y] = dx + 1
                    comp[y] = cid
                    parent_v[y] = x
                    parent_e[y] = eid
                    queue.append(y)
            cid += 1
        # skip pointers for walked-over edges (one scan per edge per run)
        skip: Dict[int, int] = {}
        return parent_v, parent_e, depth, comp, skip

    @staticmethod
    def _skip_find(skip: Dict[int, int], x: int) -> int:
        root = x
        while root in skip:
            root = skip[root]
        while x in skip:
            skip[x], x = root, skip[x]
        return root

    # --- insertion --------------------------------------------------------------

    def insert(self, eid: int) -> bool:
        u, v = self.edges[eid]
        ru, rv = self._find(self.sat, u), self._find(self.sat, v)
        if ru == rv and self.saturated[ru]:
            return False

        # happy path: some forest joins two components
        for j in range(self.k):
            if self._color_find(j, u) != self._color_find(j, v):
                self._forest_add(j, eid)
                self.color[eid] = j
                uf = self.uf[j]
                uf[self._find(uf, u)] = self._find(uf, v)
                self.covered += 1
                return True

        # exchange search over covered edges, breadth first
        rooted = [None] * self.k
        parent: Dict[int, Optional[Tuple[int, int]]] = {eid: None}
        queue = deque([eid])
        touched = {u, v}
        while queue:
            x = queue.popleft()
            xu, xv = self.edges[x]
            for j in range(self.k):
                if self.color[x] == j:
                    continue
                if rooted[j] is None:
                    rooted[j] = self._root_forest(j)
                parent_v, parent_e, depth, comp, skip = rooted[j]
                cu = comp.get(xu, -1 - xu)
                cv = comp.get(xv, -1 - xv)
                if cu != cv:
                    self._apply_chain(x, j, parent)
                    self.covered += 1
                    return True
                # walk the fundamental cycle, skipping edges scanned earlier
                find = self._skip_find
                a = find(skip, xu)
                b = find(skip, xv)
                while a != b:
                    if depth[a] < depth[b]:
                        a, b = b, a
                    y = parent_e[a]
                    if y not in parent:
                        parent[y] = (x, j)
                        ya, yb = self.edges[y]
                        touched.add(ya)
                        touched.add(yb)
                        queue.append(y)
                    skip[a] = parent_v[a]
                    a = find(skip, a)

        self._mark_saturated(touched)
        return False

    def _apply_chain(self, sink: int, free_color: int,
                     parent: Dict[int, Optional[Tuple[int, int]]]) -> None:
        chain: List[Tuple[int, int]] = [(sink, free_color)]
        cur = sink
        while True:
            link = parent[cur]
            if link is None:
                break
            prev, j = link
            chain.append((prev, j))
            cur = prev
        changed = set()
        for e2, newcol in chain:
            old = self.color[e2]
            if old >= 0:
                self._forest_remove(old, e2)
                changed.add(old)
            self._forest_add(newcol, e2)
            self.color[e2] = newcol
            changed.add(newcol)
        for j in changed:
            self.dirty[j] = True

    def _mark_saturated(self, vertices) -> None:
        it = iter(vertices)
        root = self._find(self.sat, next(it))
        for v in it:
            rv = self._find(self.sat, v)
            if rv != root:
                self.sat[rv] = root
        root = self._find(self.sat, root)
        self.saturated[root] = True

    # --- validity check (used by tests) ----------------------------------------

    def forests_valid(self) -> bool:
        seen = set()
        for j in range(self.k):
            parent = list(range(self.n))
            find = self._find
            for v, nbrs in self.adj[j].items():
                for u, eid in nbrs.items():
                    if u > v:
                        continue
                    if self.color[eid] != j or eid in seen:
                        return False
                    seen.add(eid)
                    ru, rv = find(parent, u), find(parent, v)
                    if ru == rv:
                        return False
                    parent[ru] = rv
        return len(seen) == self.covered


def build_forest_packing(graph: QueryGraph, alpha: int) -> _ForestPacking:
    """Insert every edge once; the result holds the matroid-union optimum."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    edges = list(graph.edges())
    packing = _ForestPacking(graph.n, edges, alpha)
    for eid in range(len(edges)):
        packing.insert(eid)
    return packing


def max_forest_union(graph: QueryGraph, alpha: int) -> int:
    """Largest number of edges coverable by ``alpha`` edge-disjoint forests."""
    return build_forest_packing(graph, alpha).covered


def _component_density_floor(graph: QueryGraph) -> int:
    """max over components of ceil(m_c / (n_c - 1)); a lower bound on arboricity."""
    n = graph.n
    comp = [-1] * n
    cid = 0
    best = 0
    for start in range(n):
        if comp[start] != -1 or not graph.adjacency[start]:
            continue
        comp[start] = cid
        stack = [start]
        vertices = 0
        degsum = 0
        while stack:
            x = stack.pop()
            vertices += 1
            nbrs = graph.adjacency[x]
            degsum += len(nbrs)
            for y in nbrs:
                if comp[y] == -1:
                    comp[y] = cid
                    stack.append(y)
        edges_c = degsum // 2
        if vertices >= 2:
            best = max(best, -(-edges_c // (vertices - 1)))
        cid += 1
    return best


def _degeneracy(graph: QueryGraph) -> int:
    """Iterative min-degree peeling; an upper bound on arboricity."""
    n = graph.n
    deg = [len(nbrs) for nbrs in graph.adjacency]
    maxdeg = max(deg, default=0)
    buckets: List[List[int]] = [[] for _ in range(maxdeg + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    removed = [False] * n
    best = 0
    cur = 0
    for _ in range(n):
        while cur <= maxdeg and not buckets[cur]:
            cur += 1
        if cur > maxdeg:
            break
        v = buckets[cur].pop()
        if removed[v] or deg[v] != cur:
            continue
        removed[v] = True
        best = max(best, cur)
        for u in graph.adjacency[v]:
            if not removed[u]:
                deg[u] -= 1
                buckets[deg[u]].append(u)
                if deg[u] < cur:
                    cur = deg[u]
    return best


def exact_arboricity(graph: QueryGraph) -> int:
    """Minimum number of forests partitioning the edges (0 for empty graphs)."""
    m = graph.m
    if m == 0:
        return 0
    lo = max(1, _component_density_floor(graph))
    hi = max(lo, _degeneracy(graph))
    if max_forest_union(graph, lo) == m:
        return lo
    lo += 1
    while lo < hi:
        mid = (lo + hi) // 2
        if max_forest_union(graph, mid) == m:
            hi = mid
        else:
            lo = mid + 1
    return hi


def brute_force_arboricity_small(graph: QueryGraph) -> int:
    """Density maximum max_S ceil(|E(S)| / (|S|-1)) over all vertex subsets.

    Independent oracle for exact_arboricity; the two agree by the classical
    forest-partition equality. Exhaustive, so capped at 16 vertices.
    """
    n = graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is capped at n <= {BRUTE_FORCE_LIMIT}, got {n}")
    masks = [0] * n
    for v in range(n):
        for u in graph.neighbors_of(v):
            masks[v] |= 1 << u
    best = 0
    edge_count = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & (-s)
        v = low.bit_length() - 1
        rest = s ^ low
        e = edge_count[rest] + (masks[v] & rest).bit_count()
        edge_count[s] = e
        size = s.bit_count()
        if size >= 2 and e:
            value = -(-e // (size - 1))
            if value > best:
                best = value
    return best


@dataclass
class DistanceReport:
    """Exact deletion distance to arboricity at most ``alpha_target``."""

    alpha_target: int
    max_forest_union_size: int
    deletions_needed: int
    eps_exact: Fraction  # deletions / m, 0 for empty graphs

    def is_close(self, eps: Fraction) -> bool:
        return self.eps_exact <= eps

    def is_far(self, eps: Fraction) -> bool:
        return self.eps_exact > eps


def distance_to_arboricity(graph: QueryGraph, alpha: int) -> DistanceReport:
    """Fewest edge deletions bringing arboricity down to ``alpha``.

    Only deletions can lower arboricity, so deletion distance equals
    modification distance for this property.
    """
    m = graph.m
    if m == 0:
        return DistanceReport(alpha, 0, 0, Fraction(0))
    union = max_forest_union(graph, alpha)
    deletions = m - union
    return DistanceReport(alpha, union, deletions, Fraction(deletions, m))


def exact_activity_membership(graph: QueryGraph, alpha: int, gamma: Ratio,
                              ell: int, v: int) -> bool:
    """Whether ``v`` survives ``ell`` peel iterations at slack ``gamma``."""
    return peel(graph, alpha, gamma, ell).is_active(v)
