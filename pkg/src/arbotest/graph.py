"""Immutable graph storage behind a counted degree/neighbor query oracle.

The stored edge count ``m`` exists for exact oracles and the harness only.
Sublinear code paths receive a :class:`QuerySession` plus the vertex count
and must discover everything else through counted queries.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, Sequence, Tuple, Union


class GraphFormatError(ValueError):
    """Raised for malformed edge lists or graph files."""


class _OutOfRange:
    """Answer to a neighbor query whose index exceeds the degree."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "OUT_OF_RANGE"


OUT_OF_RANGE = _OutOfRange()

NeighborAnswer = Union[int, _OutOfRange]


class QueryGraph:
    """Simple undirected graph with a frozen neighbor order per vertex.

    Neighbor order is first-appearance order in the input edge list and
    never changes afterwards, which keeps randomized trials reproducible.
    """

    __slots__ = ("n", "m", "adjacency")

    def __init__(self, n: int, adjacency: list, m: int):
        self.n = n
        self.adjacency = adjacency
        self.m = m

    def degree_of(self, v: int) -> int:
        """Uncounted degree read for oracle-side code."""
        return len(self.adjacency[v])

    def neighbors_of(self, v: int) -> Sequence[int]:
        """Uncounted neighbor list read for oracle-side code."""
        return self.adjacency[v]

    def edges(self) -> Iterator[Tuple[int, int]]:
        """All undirected edges as (u, v) with u < v, deterministic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    def precedes(self, u: int, v: int) -> bool:
        """Vertex order: ascending degree, ties broken by ascending id."""
        if u == v:
            return False
        du = len(self.adjacency[u])
        dv = len(self.adjacency[v])
        return (du, u) < (dv, v)

    def __repr__(self) -> str:
        return f"QueryGraph(n={self.n}, m={self.m})"


class QuerySession:
    """Counted oracle access to one graph.

    Single-owner: each trial creates its own session. Counters are monotone
    and every oracle access increments exactly one of them.
    """

    __slots__ = ("graph", "_adj", "_n", "degree_queries", "neighbor_queries")

    def __init__(self, graph: QueryGraph):
        self.graph = graph
        self._adj = graph.adjacency
        self._n = graph.n
        self.degree_queries = 0
        self.neighbor_queries = 0

    @property
    def n(self) -> int:
        return self._n

    @property
    def total_queries(self) -> int:
        return self.degree_queries + self.neighbor_queries

    def degree(self, v: int) -> int:
        if not 0 <= v < self._n:
            raise ValueError(f"vertex id {v} out of range [0, {self._n})")
        self.degree_queries += 1
        return len(self._adj[v])

    def neighbor(self, v: int, i: int) -> NeighborAnswer:
        if not 0 <= v < self._n:
            raise ValueError(f"vertex id {v} out of range [0, {self._n})")
        if i < 1:
            raise ValueError(f"neighbor index must be >= 1, got {i}")
        self.neighbor_queries += 1
        nbrs = self._adj[v]
        if i > len(nbrs):
            return OUT_OF_RANGE
        return nbrs[i - 1]


def load_graph(edge_list: Iterable[Tuple[int, int]], n: int) -> QueryGraph:
    """Build a QueryGraph from vertex pairs.

    Duplicate pairs (in either orientation) collapse; neighbor order is
    first-appearance order. Self-loops and out-of-range ids are rejected.
    """
    if n < 0:
        raise GraphFormatError(f"vertex count must be nonnegative, got {n}")
    adjacency: list = [[] for _ in range(n)]
    seen = set()
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) has an id outside [0, {n})")
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u} is not allowed")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        adjacency[u].append(v)
        adjacency[v].append(u)
    return QueryGraph(n, adjacency, len(seen))


def parse_edge_list(text: str) -> QueryGraph:
    """Parse the text format: header "n m", one "u v" pair per line, '#' comments."""
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: non-integer token in {raw!r}") from exc
        if header is None:
            header = (a, b)
        else:
            pairs.append((a, b))
    if header is None:
        raise GraphFormatError("missing 'n m' header line")
    n, m_declared = header
    graph = load_graph(pairs, n)
    if graph.m != m_declared:
        raise GraphFormatError(
            f"header declares m={m_declared} but the file holds {graph.m} distinct edges"
        )
    return graph


def read_graph_file(path) -> QueryGraph:
    return parse_edge_list(Path(path).read_text())


def write_graph_file(graph: QueryGraph, path) -> None:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    Path(path).write_text("\n".join(lines) + "\n")
