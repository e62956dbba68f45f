"""Shared graph builders and trial helpers for the suite."""

from __future__ import annotations

import itertools
import multiprocessing
import os
import random

from arbotest.graph import QueryGraph, load_graph

WORKERS = max(1, min(2, os.cpu_count() or 1))


def complete_graph(k: int, n: int | None = None) -> QueryGraph:
    """K_k, optionally padded with isolated vertices up to n."""
    return load_graph(list(itertools.combinations(range(k), 2)), n or k)


def star(leaves: int) -> QueryGraph:
    return load_graph([(0, i) for i in range(1, leaves + 1)], leaves + 1)


def path_graph(n: int) -> QueryGraph:
    return load_graph([(i, i + 1) for i in range(n - 1)], n)


def cycle_graph(n: int) -> QueryGraph:
    return load_graph([(i, (i + 1) % n) for i in range(n)], n)


def gnp(n: int, p: float, seed: int) -> QueryGraph:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return load_graph(edges, n)


def sunflower(middles: int, leaves_per_middle: int) -> QueryGraph:
    """Center joined to ``middles`` hubs, each hub carrying its own leaves.

    Leaves die in the first peel round, hubs in the second, the center in
    the third (alpha=1), giving certified inactive vertices at depth > 1.
    """
    edges = []
    nxt = 1 + middles
    for hub in range(1, middles + 1):
        edges.append((0, hub))
        for _ in range(leaves_per_middle):
            edges.append((hub, nxt))
            nxt += 1
    return load_graph(edges, nxt)


def pool_map(fn, jobs):
    """Map over jobs with fork workers; falls back to serial for one core."""
    if WORKERS <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(WORKERS) as pool:
        return pool.map(fn, jobs)


def check_trace_invariants(graph, trace):
    """Batch disjointness, slack caps, and per-edge conservation."""
    n = graph.n
    assert trace.A[0] == set(range(n))
    for i in range(1, trace.ell + 1):
        assert trace.A[i] == trace.A[i - 1] - trace.B[i - 1]
    batches = [v for b in trace.B for v in b]
    assert len(batches) == len(set(batches)), "batches must be pairwise disjoint"
    g = trace.gamma
    for v in range(n):
        cap = 3 * trace.alpha + g * graph.degree_of(v)
        if trace.inactivated_at[v]:
            assert len(trace.assigned[v]) <= cap
        else:
            assert trace.assigned[v] == []
    it = trace.inactivated_at
    assigned_pairs = {}
    for v in range(n):
        for u in trace.assigned[v]:
            key = (min(u, v), max(u, v))
            assigned_pairs[key] = assigned_pairs.get(key, 0) + 1
    survivors = 0
    for u, v in graph.edges():
        if it[u] == 0 and it[v] == 0:
            survivors += 1
            assert (u, v) not in assigned_pairs
        else:
            count = assigned_pairs.get((u, v), 0)
            assert count in (1, 2)
            if count == 2:
                assert it[u] == it[v] != 0
    assert survivors == trace.remaining_edges[-1]


def topological_ok(n, oriented):
    indeg = {v: 0 for v in range(n)}
    out = {v: [] for v in range(n)}
    for tail, head in oriented:
        out[tail].append(head)
        indeg[head] += 1
    queue = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == n


def validate_decomposition(graph, trace, alpha):
    """Acyclicity, out-degree cap, forest labels, and the removal budget."""
    from arbotest.assign import forest_decomposition

    dec = forest_decomposition(graph, trace, alpha)
    n = graph.n
    assert topological_ok(n, dec.oriented_edges)
    assert max(dec.out_degrees(n), default=0) <= 3 * alpha
    assert set(dec.forest_label) == set(dec.oriented_edges)
    labels = set(dec.forest_label.values())
    assert labels <= set(range(1, 3 * alpha + 1))
    for label in labels:
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (tail, head), lab in dec.forest_label.items():
            if lab != label:
                continue
            ru, rv = find(tail), find(head)
            assert ru != rv, f"label {label} holds a cycle"
            parent[ru] = rv
    excess = sum(max(len(trace.assigned[v]) - 3 * alpha, 0) for v in range(n))
    assert len(dec.removed_edges) <= trace.remaining_edges[-1] + excess
    assert len(dec.removed_edges) + len(dec.oriented_edges) == graph.m
    return dec
