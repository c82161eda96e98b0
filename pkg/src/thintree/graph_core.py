"""Weighted undirected graphs, vertex-set weights, partitions and quotients.

Vertices are dense integers ``0..N-1``.  Vertex sets may be passed as any
iterable of ints or as an int bitmask (bit ``v`` set means ``v`` is in the
set); bitmasks are what the tree code uses internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    pass


def as_mask(vertices) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with strictly positive edge weights.

    ``edges`` holds ``(u, v, w)`` with ``u < v``, sorted, one entry per pair.
    ``labels`` is optional I/O metadata and is ignored by every computation.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] | None = None
    _adj: tuple[dict[int, float], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[dict[int, float]] = [dict() for _ in range(self.vertex_count)]
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        object.__setattr__(self, "_adj", tuple(adj))

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def neighbors(self, v: int) -> dict[int, float]:
        return self._adj[v]

    def degree(self, v: int) -> float:
        return sum(self._adj[v].values())

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def with_labels(self, labels: Sequence[str]) -> "WeightedGraph":
        if len(labels) != self.vertex_count:
            raise GraphError("label count does not match vertex count")
        return WeightedGraph(self.vertex_count, self.edges, tuple(labels))


def build_graph(edge_list: Iterable[tuple[int, int, float]], vertex_count: int | None = None,
                labels: Sequence[str] | None = None) -> WeightedGraph:
    """Build a graph from ``(u, v, weight)`` triples.

    Entries for the same unordered pair are merged by summing their weights.
    When ``vertex_count`` is omitted it is one more than the largest endpoint.
    """
    merged: dict[tuple[int, int], float] = {}
    top = -1
    for u, v, w in edge_list:
        u, v, w = int(u), int(v), float(w)
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if not w > 0:
            raise GraphError(f"nonpositive weight {w} on ({u}, {v})")
        if u < 0 or v < 0:
            raise GraphError(f"negative vertex id in ({u}, {v})")
        if vertex_count is not None and max(u, v) >= vertex_count:
            raise GraphError(f"vertex out of range in ({u}, {v}) for N={vertex_count}")
        key = (u, v) if u < v else (v, u)
        merged[key] = merged.get(key, 0.0) + w
        top = max(top, u, v)
    n = top + 1 if vertex_count is None else vertex_count
    edges = tuple((u, v, w) for (u, v), w in sorted(merged.items()))
    return WeightedGraph(n, edges, None if labels is None else tuple(labels))


def _check_vertex(g: WeightedGraph, v: int):
    if not 0 <= v < g.vertex_count:
        raise GraphError(f"vertex {v} out of range [0, {g.vertex_count - 1}]")


def pair_weight(g: WeightedGraph, u: int, v: int) -> float:
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise GraphError("pair_weight needs two distinct vertices")
    return g.neighbors(u).get(v, 0.0)


def set_weight(g: WeightedGraph, A, B) -> float:
    """Sum of w(a, b) over ordered pairs a in A, b in B.

    If A and B overlap, an edge inside the overlap is counted once per
    ordering, exactly as the double sum is written.
    """
    a_mask, b_mask = as_mask(A), as_mask(B)
    total = 0.0
    for u, v, w in g.edges:
        if (a_mask >> u) & 1 and (b_mask >> v) & 1:
            total += w
        if (a_mask >> v) & 1 and (b_mask >> u) & 1:
            total += w
    return total


def cut_weight(g: WeightedGraph, mask: int) -> float:
    """Weight of edges with exactly one endpoint in ``mask``."""
    total = 0.0
    for u, v, w in g.edges:
        if ((mask >> u) ^ (mask >> v)) & 1:
            total += w
    return total


def boundary(g: WeightedGraph, A) -> float:
    """w(A, V \\ A); same summation order as :func:`set_weight`."""
    return cut_weight(g, as_mask(A) & g.full_mask)


@dataclass(frozen=True)
class Partition:
    blocks: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.blocks)

    def block_of(self) -> list[int]:
        owner = {}
        for i, b in enumerate(self.blocks):
            for v in b:
                owner[v] = i
        return [owner[v] for v in sorted(owner)]


def make_partition(g: WeightedGraph, blocks: Iterable[Iterable[int]]) -> Partition:
    out = []
    seen: set[int] = set()
    for b in blocks:
        b = mask_to_set(b) if isinstance(b, int) else frozenset(b)
        if not b:
            raise GraphError("partition has an empty block")
        for v in b:
            _check_vertex(g, v)
        if seen & b:
            raise GraphError("partition blocks overlap")
        seen |= b
        out.append(b)
    if len(seen) != g.vertex_count:
        raise GraphError("partition does not cover every vertex")
    return Partition(tuple(out))


@dataclass(frozen=True)
class QuotientGraph:
    partition: Partition
    graph: WeightedGraph  # vertex i stands for block i

    @property
    def quotient_edges(self):
        return self.graph.edges


def quotient_graph(g: WeightedGraph, p: Partition | Iterable[Iterable[int]]) -> QuotientGraph:
    """Collapse each block to a vertex; edges inside a block are dropped."""
    if not isinstance(p, Partition):
        p = make_partition(g, p)
    else:
        p = make_partition(g, p.blocks)
    owner = [0] * g.vertex_count
    for i, b in enumerate(p.blocks):
        for v in b:
            owner[v] = i
    qedges = []
    for u, v, w in g.edges:
        if owner[u] != owner[v]:
            qedges.append((owner[u], owner[v], w))
    return QuotientGraph(p, build_graph(qedges, vertex_count=len(p.blocks)))
