"""Local-minimum edges of thin positions and the pinch clusters they cut off."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import WeightedGraph, as_mask, cut_weight, mask_to_set
from .tree_position import EPS, TreePosition


class ClusterError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LocalMinEdge:
    edge: int
    width: float
    witness_neighbors: tuple[int, int]  # one strictly wider edge per endpoint


@dataclass(frozen=True)
class PinchClusterPair:
    edge: int
    cluster_a: frozenset[int]  # the side holding the smallest vertex id
    cluster_b: frozenset[int]
    boundary: float


def _witness(pos: TreePosition, e: int, node: int, eps: float) -> int | None:
    if pos.is_leaf(node):
        return None
    limit = pos.widths[e] + eps
    for f in sorted(pos.inc[node]):
        if f != e and pos.widths[f] > limit and not pos.is_leaf(pos.other_end(f, node)):
            return f
    return None


def local_minima(pos: TreePosition, eps: float = EPS, plateau: bool = False) -> list[LocalMinEdge]:
    """Edges each of whose endpoints meets a strictly wider edge leading to an interior node.

    ``plateau=True`` is reserved for plateau-tolerant detection and is not
    implemented.
    """
    if plateau:
        raise NotImplementedError("plateau-tolerant local minima are not supported")
    out = []
    for e in range(pos.edge_count):
        a, b = pos.ends[e]
        wa = _witness(pos, e, a, eps)
        if wa is None:
            continue
        wb = _witness(pos, e, b, eps)
        if wb is None:
            continue
        out.append(LocalMinEdge(e, pos.widths[e], (wa, wb)))
    return out


def clusters_from_minimum(pos: TreePosition, e: LocalMinEdge | int, eps: float = EPS) -> PinchClusterPair:
    if not pos.certified:
        raise ClusterError("position is not certified thin; run thin() or certify() first")
    edge = e.edge if isinstance(e, LocalMinEdge) else e
    if edge not in {m.edge for m in local_minima(pos, eps)}:
        raise ClusterError(f"edge {edge} is not a local minimum")
    mask = pos.side_mask(edge)
    if mask & 1 == 0:
        mask = pos.graph.full_mask ^ mask
    return PinchClusterPair(edge, mask_to_set(mask), mask_to_set(pos.graph.full_mask ^ mask),
                            pos.widths[edge])


@dataclass(frozen=True)
class Counterexample:
    mode: str  # "add" or "remove"
    sequence: tuple[int, ...]
    boundary_before: float
    boundary_after: float


def verify_pinch_cluster(g: WeightedGraph, A, max_len: int, eps: float = EPS,
                         budget: int = 2_000_000) -> Counterexample | None:
    """Brute-force check that ``A`` is a pinch cluster, up to sequences of ``max_len``.

    A sequence of distinct vertices all added to A (or all removed from it)
    that ends at a strictly smaller boundary must pass through a strictly
    larger boundary at some proper prefix.  Sequences that empty A or fill
    V are not moves.  Returns the first violating sequence in lexicographic
    order, adds before removes, or None.  Raises :class:`BudgetExceeded`
    rather than truncating the search.
    """
    a_mask = as_mask(A)
    full = g.full_mask
    if a_mask == 0 or a_mask == full:
        raise ClusterError("A must be a nonempty proper subset of V")
    base = cut_weight(g, a_mask)
    visited = 0

    def search(mode: str, pool: list[int]):
        nonlocal visited
        # explicit DFS in lexicographic preorder
        stack = [(a_mask, ())]
        while stack:
            cur, seq = stack.pop()
            if seq:
                visited += 1
                if visited > budget:
                    raise BudgetExceeded(f"more than {budget} sequences needed")
                b = cut_weight(g, cur)
                if b < base - eps:
                    return Counterexample(mode, seq, base, b)
                # a strictly higher prefix clears every extension
                if b > base + eps or len(seq) >= max_len:
                    continue
            children = []
            for v in pool:
                if v in seq:
                    continue
                nxt = cur | (1 << v) if mode == "add" else cur & ~(1 << v)
                if nxt == 0 or nxt == full:
                    continue
                children.append((nxt, seq + (v,)))
            stack.extend(reversed(children))
        return None

    outside = [v for v in range(g.vertex_count) if not (a_mask >> v) & 1]
    inside = [v for v in range(g.vertex_count) if (a_mask >> v) & 1]
    return search("add", outside) or search("remove", inside)


@dataclass
class ClusterReport:
    pairs: list[PinchClusterPair]
    profile: tuple[float, ...]
    edge_labels: dict[int, str] = field(default_factory=dict)
    zero_width_edges: list[int] = field(default_factory=list)


def extract_all_clusters(pos: TreePosition, eps: float = EPS) -> ClusterReport:
    if not pos.certified:
        raise ClusterError("position is not certified thin; run thin() or certify() first")
    minima = local_minima(pos, eps)
    pairs = [clusters_from_minimum(pos, m, eps) for m in minima]
    pairs.sort(key=lambda p: (p.boundary, p.edge))
    labels = {f: f"{w:g}" for f, w in enumerate(pos.widths)}
    zero = [p.edge for p in pairs if abs(p.boundary) <= eps]
    return ClusterReport(pairs, pos.profile().widths, labels, zero)
