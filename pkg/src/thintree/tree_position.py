"""Tree positions: a 3-Cayley tree whose leaves are the vertices of a graph.

Node ids: for positions built here, leaf node ``v`` carries graph vertex ``v``
and interior nodes are ``N..2N-3``.  Edge ids are stable under branch shifts;
the leaf edge of vertex ``v`` has id ``v`` (for N >= 3).

Every tree edge ``f`` splits the graph vertices in two.  Those splits are
held as int bitmasks, derived from a rooted index that is rebuilt lazily
after each mutation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph_core import WeightedGraph, cut_weight, mask_to_set

EPS = 1e-9


class TreeError(ValueError):
    pass


def lex_compare(a: Sequence[float], b: Sequence[float], eps: float = EPS) -> int:
    """Compare two nonincreasing width sequences; -1 if ``a`` is thinner."""
    for x, y in zip(a, b):
        if x < y - eps:
            return -1
        if x > y + eps:
            return 1
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    return 0


@dataclass(frozen=True)
class WidthProfile:
    widths: tuple[float, ...]

    @classmethod
    def of(cls, widths) -> "WidthProfile":
        return cls(tuple(sorted(widths, reverse=True)))

    def compare(self, other: "WidthProfile", eps: float = EPS) -> int:
        return lex_compare(self.widths, other.widths, eps)

    def __lt__(self, other: "WidthProfile") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "WidthProfile") -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: "WidthProfile") -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: "WidthProfile") -> bool:
        return self.compare(other) >= 0

    def __len__(self):
        return len(self.widths)

    def __iter__(self):
        return iter(self.widths)


class _RootedIndex:
    """Parent pointers, Euler intervals and leaf masks for one tree snapshot."""

    def __init__(self, pos: "TreePosition"):
        n_nodes = len(pos.inc)
        root = pos.leaf_of[0]
        parent = [-1] * n_nodes
        parent_edge = [-1] * n_nodes
        depth = [0] * n_nodes
        tin = [0] * n_nodes
        tout = [0] * n_nodes
        sub = [0] * n_nodes
        order = []
        stack = [root]
        seen = [False] * n_nodes
        seen[root] = True
        clock = 0
        # iterative preorder, then reverse for subtree masks
        while stack:
            node = stack.pop()
            tin[node] = clock
            clock += 1
            order.append(node)
            for e in pos.inc[node]:
                a, b = pos.ends[e]
                other = b if a == node else a
                if not seen[other]:
                    seen[other] = True
                    parent[other] = node
                    parent_edge[other] = e
                    depth[other] = depth[node] + 1
                    stack.append(other)
        size = [1] * n_nodes
        node_vertex = pos.node_vertex
        for node in reversed(order):
            v = node_vertex.get(node)
            if v is not None:
                sub[node] |= 1 << v
            p = parent[node]
            if p >= 0:
                sub[p] |= sub[node]
                size[p] += size[node]
        for node in range(n_nodes):
            tout[node] = tin[node] + size[node]
        child = [0] * len(pos.ends)
        for e, (a, b) in enumerate(pos.ends):
            child[e] = b if parent[b] == a else a
        self.root = root
        self.parent = parent
        self.parent_edge = parent_edge
        self.depth = depth
        self.tin = tin
        self.tout = tout
        self.sub = sub
        self.child = child
        self.full = pos.graph.full_mask
        self.reached = len(order)

    def below(self, node: int, top: int) -> bool:
        return self.tin[top] <= self.tin[node] < self.tout[top]

    def edge_below(self, g: int, f: int) -> bool:
        """True if edge ``g`` lies in the subtree hanging below edge ``f``."""
        return g != f and self.below(self.child[g], self.child[f])

    def side_with_node(self, f: int, node: int) -> int:
        c = self.child[f]
        return self.sub[c] if self.below(node, c) else self.full ^ self.sub[c]

    def side_away(self, f: int, g: int) -> int:
        """Leaf mask of the side of ``f`` that does not contain ``g``."""
        c = self.child[f]
        if self.edge_below(g, f):
            return self.full ^ self.sub[c]
        return self.sub[c]

    def node_path(self, a: int, b: int) -> list[int]:
        left, right = [a], [b]
        while a != b:
            if self.depth[a] >= self.depth[b]:
                a = self.parent[a]
                left.append(a)
            else:
                b = self.parent[b]
                right.append(b)
        right.pop()
        return left + right[::-1]


class TreePosition:
    """A 3-Cayley tree together with the vertex-to-leaf map and edge widths."""

    def __init__(self, graph: WeightedGraph, ends: Sequence[Sequence[int]], leaf_of: Sequence[int],
                 widths: Sequence[float] | None = None, n_nodes: int | None = None):
        self.graph = graph
        self.ends = [list(e) for e in ends]
        if n_nodes is None:
            n_nodes = 1 + max((max(e) for e in self.ends), default=-1)
        self.inc: list[list[int]] = [[] for _ in range(n_nodes)]
        for e, (a, b) in enumerate(self.ends):
            self.inc[a].append(e)
            self.inc[b].append(e)
        self.leaf_of = list(leaf_of)
        self.node_vertex = {node: v for v, node in enumerate(self.leaf_of)}
        self._index: _RootedIndex | None = None
        self.certified = False
        if widths is None:
            self.widths = self.recompute_widths()
        else:
            self.widths = list(widths)

    # -- structure -----------------------------------------------------
    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return len(self.ends)

    def copy(self) -> "TreePosition":
        new = TreePosition.__new__(TreePosition)
        new.graph = self.graph
        new.ends = [list(e) for e in self.ends]
        new.inc = [list(i) for i in self.inc]
        new.leaf_of = list(self.leaf_of)
        new.node_vertex = dict(self.node_vertex)
        new._index = self._index
        new.certified = False
        new.widths = list(self.widths)
        return new

    def is_leaf(self, node: int) -> bool:
        return node in self.node_vertex

    def other_end(self, e: int, node: int) -> int:
        a, b = self.ends[e]
        return b if a == node else a

    def adjacent(self, e: int, g: int) -> bool:
        return bool(set(self.ends[e]) & set(self.ends[g]))

    def edge_between(self, a: int, b: int) -> int:
        for e in self.inc[a]:
            if b in self.ends[e]:
                return e
        raise TreeError(f"no tree edge between nodes {a} and {b}")

    def leaf_edge(self, v: int) -> int:
        return self.inc[self.leaf_of[v]][0]

    @property
    def index(self) -> _RootedIndex:
        if self._index is None:
            self._index = _RootedIndex(self)
        return self._index

    def _touch(self):
        self._index = None
        self.certified = False

    # -- widths --------------------------------------------------------
    def side_mask(self, f: int) -> int:
        """Leaf mask on the ``ends[f][1]`` side of ``f``."""
        return self.index.side_with_node(f, self.ends[f][1])

    def recompute_width(self, f: int) -> float:
        return cut_weight(self.graph, self.side_mask(f))

    def recompute_widths(self) -> list[float]:
        return [self.recompute_width(f) for f in range(len(self.ends))]

    def profile(self) -> WidthProfile:
        return WidthProfile.of(self.widths)

    def __repr__(self):
        return f"TreePosition(N={self.n}, edges={self.ends})"


# ---------------------------------------------------------------------------
# construction

def _star_ends(n: int, leaves: Sequence[int]):
    return [[v, n] for v in sorted(leaves)]


def caterpillar_position(g: WeightedGraph, order: Sequence[int] | None = None) -> TreePosition:
    """Tree whose interior nodes form a path, leaves hung in ``order``.

    The first two and the last two vertices of the order share the end
    interior nodes, so its internal edges carry the prefix cuts of the order.
    """
    n = g.vertex_count
    if n < 2:
        raise TreeError("a tree position needs at least two vertices")
    order = list(range(n)) if order is None else [int(v) for v in order]
    if sorted(order) != list(range(n)):
        raise TreeError("order must be a permutation of the vertices")
    if n == 2:
        return TreePosition(g, [[0, 1]], [0, 1])
    if n == 3:
        return TreePosition(g, _star_ends(3, order), list(range(3)))
    ends: list[list[int]] = [None] * n  # type: ignore[list-item]
    spine = [n + j for j in range(n - 2)]
    hang = [spine[0], spine[0]] + spine[1:-1] + [spine[-1], spine[-1]]
    for t, v in enumerate(order):
        ends[v] = [v, hang[t]]
    for j in range(len(spine) - 1):
        ends.append([spine[j], spine[j + 1]])
    return TreePosition(g, ends, list(range(n)))


def _insert_leaf(ends: list[list[int]], e: int, leaf: int, new_node: int, leaf_ids: set[int]):
    """Subdivide edge ``e`` with ``new_node`` and hang ``leaf`` from it.

    ``e`` keeps its leaf-side endpoint so leaf edge ids stay equal to vertex ids.
    """
    a, b = ends[e]
    if a in leaf_ids:
        a, b = b, a
    ends[e] = [new_node, b]
    ends[leaf] = [leaf, new_node]
    ends.append([a, new_node])


def _grow(n: int, choices) -> list[list[int]]:
    # leaf edges occupy ids 0..n-1, internal edges are appended after
    ends: list = [None] * n
    ends[0], ends[1], ends[2] = [0, n], [1, n], [2, n]
    leaf_ids = set(range(n))
    for k in range(3, n):
        live = [e for e in range(len(ends)) if ends[e] is not None]
        e = choices(k, live)
        _insert_leaf(ends, e, k, n + k - 2, leaf_ids)
    return ends


def random_position(g: WeightedGraph, seed: int) -> TreePosition:
    """Uniformly random leaf-labelled 3-Cayley tree by sequential subdivision."""
    n = g.vertex_count
    if n < 2:
        raise TreeError("a tree position needs at least two vertices")
    if n == 2:
        return TreePosition(g, [[0, 1]], [0, 1])
    rng = random.Random(seed)
    ends = _grow(n, lambda k, live: live[rng.randrange(len(live))])
    return TreePosition(g, ends, list(range(n)))


def enumerate_positions(g: WeightedGraph) -> Iterator[TreePosition]:
    """Every leaf-labelled 3-Cayley tree on the vertices, each exactly once."""
    n = g.vertex_count
    if n < 2:
        raise TreeError("a tree position needs at least two vertices")
    if n == 2:
        yield TreePosition(g, [[0, 1]], [0, 1])
        return
    leaf_ids = set(range(n))

    def rec(ends, k):
        if k == n:
            yield TreePosition(g, ends, list(range(n)))
            return
        for e in range(len(ends)):
            if ends[e] is None:
                continue
            nxt = [None if x is None else list(x) for x in ends]
            _insert_leaf(nxt, e, k, n + k - 2, leaf_ids)
            yield from rec(nxt, k + 1)

    start: list = [None] * n
    start[0], start[1], start[2] = [0, n], [1, n], [2, n]
    yield from rec(start, 3)


def double_factorial_count(n: int) -> int:
    """(2n-5)!!, the number of leaf-labelled 3-Cayley trees on n >= 3 leaves."""
    out = 1
    for k in range(2 * n - 5, 0, -2):
        out *= k
    return out


def splits(pos: TreePosition) -> frozenset[frozenset[int]]:
    """Canonical split system: for each edge, the side not containing vertex 0."""
    out = set()
    for f in range(pos.edge_count):
        m = pos.side_mask(f)
        if m & 1:
            m = pos.graph.full_mask ^ m
        out.add(mask_to_set(m))
    return frozenset(out)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def validate(pos: TreePosition, eps: float = EPS, check_cache: bool = True) -> list[Violation]:
    """Structural and cache checks; an empty list means the position is valid."""
    out: list[Violation] = []
    n = pos.graph.vertex_count
    n_nodes = len(pos.inc)
    for e, ends in enumerate(pos.ends):
        if len(ends) != 2 or ends[0] == ends[1]:
            out.append(Violation("bad-edge", f"edge {e} has endpoints {ends}"))
            return out
        if not all(0 <= x < n_nodes for x in ends):
            out.append(Violation("bad-edge", f"edge {e} endpoint out of range"))
            return out
    if len(pos.ends) != n_nodes - 1:
        out.append(Violation("not-a-tree", f"{len(pos.ends)} edges on {n_nodes} nodes"))
    if sorted(pos.leaf_of) != sorted(set(pos.leaf_of)) or len(pos.leaf_of) != n:
        out.append(Violation("leaf-map", "vertex-to-leaf map is not one to one"))
    boundary_nodes = {x for x in range(n_nodes) if len(pos.inc[x]) == 1}
    if set(pos.leaf_of) != boundary_nodes:
        out.append(Violation("leaf-map", "vertex-to-leaf map is not onto the boundary nodes"))
    for x in range(n_nodes):
        d = len(pos.inc[x])
        if x in pos.node_vertex:
            if d != 1:
                out.append(Violation("boundary-degree", f"boundary node {x} has degree {d}"))
        elif d != 3:
            out.append(Violation("interior-degree", f"interior degree != 3 at node {x} (degree {d})"))
    interior = n_nodes - len(boundary_nodes)
    if n >= 3 and interior != len(boundary_nodes) - 2:
        out.append(Violation("node-count", f"{interior} interior vs {len(boundary_nodes)} boundary nodes"))
    if out:
        return out
    # connectivity (with the edge count above this also gives acyclicity)
    seen = {pos.leaf_of[0]}
    stack = [pos.leaf_of[0]]
    while stack:
        x = stack.pop()
        for e in pos.inc[x]:
            y = pos.other_end(e, x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != n_nodes:
        out.append(Violation("disconnected", f"{n_nodes - len(seen)} nodes unreachable"))
        return out
    if not check_cache:
        return out
    fresh = TreePosition(pos.graph, pos.ends, pos.leaf_of)
    if len(pos.widths) != len(pos.ends):
        out.append(Violation("cache-mismatch", "width cache has the wrong length"))
    else:
        for f, (w_cached, w_true) in enumerate(zip(pos.widths, fresh.widths)):
            if abs(w_cached - w_true) > eps:
                out.append(Violation("cache-mismatch", f"cache mismatch on edge {f}: {w_cached} vs {w_true}"))
    return out


# ---------------------------------------------------------------------------
# cuts, pass-through sets, widths

@dataclass(frozen=True)
class Subtree:
    """One side of a cut: the component containing ``anchor`` once ``edge`` is removed."""

    edge: int
    anchor: int
    nodes: frozenset[int]
    leaves: frozenset[int]


@dataclass(frozen=True)
class CutPair:
    containing: Subtree  # C_{f -> g}
    opposite: Subtree    # C_{f -/-> g}


def _component_nodes(pos: TreePosition, f: int, anchor: int) -> set[int]:
    nodes = {anchor}
    stack = [anchor]
    inc, ends = pos.inc, pos.ends
    while stack:
        x = stack.pop()
        for e in inc[x]:
            if e == f:
                continue
            a, b = ends[e]
            y = b if a == x else a
            if y not in nodes:
                nodes.add(y)
                stack.append(y)
    return nodes


def _subtree(pos: TreePosition, f: int, anchor: int, nodes) -> Subtree:
    nv = pos.node_vertex
    leaves = frozenset(nv[x] for x in nodes if x in nv)
    return Subtree(f, anchor, frozenset(nodes), leaves)


def cut(pos: TreePosition, f: int, g: int) -> CutPair:
    """The two sides of ``f``: the one holding ``g`` first, then the other."""
    if f == g:
        raise TreeError("cut needs two distinct edges")
    a, b = pos.ends[f]
    nodes_a = _component_nodes(pos, f, a)
    nodes_b = set(range(len(pos.inc))) - nodes_a
    side_a = _subtree(pos, f, a, nodes_a)
    side_b = _subtree(pos, f, b, nodes_b)
    if pos.ends[g][0] in nodes_a:
        return CutPair(side_a, side_b)
    return CutPair(side_b, side_a)


def leaf_set(pos: TreePosition, subtree: Subtree) -> frozenset[int]:
    return frozenset(pos.node_vertex[x] for x in subtree.nodes if x in pos.node_vertex)


def passes_through(pos: TreePosition, f: int) -> set[tuple[int, int]]:
    """Graph edges (u, v) whose endpoints are separated by tree edge ``f``."""
    m = pos.side_mask(f)
    return {(u, v) for u, v, _ in pos.graph.edges if ((m >> u) ^ (m >> v)) & 1}


def tree_path_edges(pos: TreePosition, a: int, b: int) -> list[int]:
    nodes = pos.index.node_path(a, b)
    return [pos.edge_between(x, y) for x, y in zip(nodes, nodes[1:])]


def width(pos: TreePosition, f: int, recompute: bool = False) -> float:
    if recompute:
        return pos.recompute_width(f)
    return pos.widths[f]


def width_profile(pos: TreePosition) -> WidthProfile:
    return pos.profile()


# ---------------------------------------------------------------------------
# adjacency weight and slope

def _dense_weight(g: WeightedGraph, a_mask: int, b_mask: int) -> float:
    W = _dense_matrix(g)
    n = g.vertex_count
    ia = np.array([(a_mask >> v) & 1 for v in range(n)], dtype=float)
    ib = np.array([(b_mask >> v) & 1 for v in range(n)], dtype=float)
    return float(ia @ W @ ib)


def _dense_matrix(g: WeightedGraph) -> np.ndarray:
    W = g.__dict__.get("_dense")
    if W is None:
        W = np.zeros((g.vertex_count, g.vertex_count))
        for u, v, w in g.edges:
            W[u, v] = W[v, u] = w
        object.__setattr__(g, "_dense", W)
    return W


def _edge_weight(g: WeightedGraph, a_mask: int, b_mask: int) -> float:
    total = 0.0
    for u, v, w in g.edges:
        if ((a_mask >> u) & 1 and (b_mask >> v) & 1) or ((a_mask >> v) & 1 and (b_mask >> u) & 1):
            total += w
    return total


def _pick_method(g: WeightedGraph, method: str) -> str:
    if method != "auto":
        return method
    n = g.vertex_count
    return "vertex" if 4 * len(g.edges) >= n * (n - 1) else "edge"


def adjacency_weight(pos: TreePosition, e: int, g: int, method: str = "auto") -> float:
    """Weight of graph edges passing through both ``e`` and ``g``.

    ``method`` is ``"vertex"`` (dense product over the two far-side vertex
    sets), ``"edge"`` (sum over R(e) & R(g)) or ``"auto"`` (by density).
    """
    if e == g:
        raise TreeError("adjacency weight needs two distinct edges")
    idx = pos.index
    far_e = idx.side_away(e, g)
    far_g = idx.side_away(g, e)
    if _pick_method(pos.graph, method) == "vertex":
        return _dense_weight(pos.graph, far_e, far_g)
    return _edge_weight(pos.graph, far_e, far_g)


def slope(pos: TreePosition, e: int, g: int) -> float:
    """w(R(g) minus R(e)) - w(R(g) & R(e)): change in b(e) if g's branch moves past e."""
    if e == g:
        raise TreeError("slope needs two distinct edges")
    me, mg = pos.side_mask(e), pos.side_mask(g)
    total = 0.0
    for u, v, w in pos.graph.edges:
        if ((mg >> u) ^ (mg >> v)) & 1:
            if ((me >> u) ^ (me >> v)) & 1:
                total -= w
            else:
                total += w
    return total


# ---------------------------------------------------------------------------
# the x -> y path

@dataclass(frozen=True)
class BranchShiftPath:
    """Labelled path between two nonadjacent tree edges.

    ``nodes[0]`` is the endpoint of ``x`` on the path and ``nodes[-1]`` that
    of ``y``; ``path_edges[t-1]`` is p_t.  ``side_edges`` lists f_2..f_i, where
    f_t hangs off ``nodes[t-1]``.
    """

    x: int
    y: int
    nodes: tuple[int, ...]
    path_edges: tuple[int, ...]
    p0: int
    p_last: int
    side_edges: tuple[int, ...]

    @property
    def i(self) -> int:
        return len(self.path_edges)

    def block_edges(self) -> tuple[int, ...]:
        """Edges whose far sides give blocks P_0..P_{i+2}, in order."""
        return (self.p0, self.x) + self.side_edges + (self.y, self.p_last)


def path_between_edges(pos: TreePosition, x: int, y: int) -> BranchShiftPath:
    if x == y or pos.adjacent(x, y):
        raise TreeError(f"edges {x} and {y} are adjacent or equal")
    xa, xb = pos.ends[x]
    ya, yb = pos.ends[y]
    nodes = pos.index.node_path(xa, ya)
    if len(nodes) > 1 and nodes[1] == xb:
        nodes = nodes[1:]
    if len(nodes) > 1 and nodes[-2] == yb:
        nodes = nodes[:-1]
    path = tuple(pos.edge_between(a, b) for a, b in zip(nodes, nodes[1:]))

    def third(node, *used):
        for e in pos.inc[node]:
            if e not in used:
                return e
        raise TreeError(f"node {node} is not interior")

    p0 = third(nodes[0], x, path[0])
    p_last = third(nodes[-1], y, path[-1])
    sides = tuple(third(nodes[t - 1], path[t - 2], path[t - 1]) for t in range(2, len(path) + 1))
    return BranchShiftPath(x, y, tuple(nodes), path, p0, p_last, sides)


def nonadjacent_pairs(pos: TreePosition) -> Iterator[tuple[int, int]]:
    """Ordered pairs (x, y) of nonadjacent edges in ascending id order."""
    E = pos.edge_count
    ends = [set(e) for e in pos.ends]
    for x in range(E):
        for y in range(E):
            if x != y and not (ends[x] & ends[y]):
                yield x, y

