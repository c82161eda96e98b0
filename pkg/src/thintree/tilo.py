"""Linear orderings (TILO) and the quotient graph induced by a branch shift.

A linear ordering is a sequence ``seq`` with ``seq[p]`` the vertex at
position ``p``.  The checks at the bottom compare quantities on a tree
position with the same quantities on the identity ordering of the quotient
graph cut out along an x->y path.  They use the generic graph and cut
routines, not the bitmask shortcuts of the shift engine, so each check is an
independent route to the number it verifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph_core import (
    GraphError, QuotientGraph, WeightedGraph, boundary, pair_weight, quotient_graph, set_weight,
)
from .tree_position import (
    EPS, BranchShiftPath, TreePosition, _component_nodes, adjacency_weight, path_between_edges, slope,
)
from .shift_engine import BranchShift, apply_branch_shift


def _check_order(g: WeightedGraph, seq: Sequence[int]):
    if sorted(seq) != list(range(g.vertex_count)):
        raise GraphError("ordering is not a bijection onto the vertices")


def tilo_widths(g: WeightedGraph, seq: Sequence[int]) -> list[float]:
    """b_i = w(A_i, complement) for the prefixes A_i = seq[:i+1], 0 <= i <= N-2."""
    _check_order(g, seq)
    out = []
    prefix = 0
    for v in seq[:-1]:
        prefix |= 1 << v
        out.append(boundary(g, prefix))
    return out


def tilo_slope(g: WeightedGraph, seq: Sequence[int], i: int, k: int) -> float:
    """Weight from seq[k] to the far side of cut i minus weight to the near side."""
    n = g.vertex_count
    if not 0 <= i <= n - 2 or not 0 <= k <= n - 1:
        raise IndexError(f"slope indices ({i}, {k}) out of range for N={n}")
    v = seq[k]
    near = set(seq[:i + 1]) - {v}
    far = set(seq[i + 1:]) - {v}
    return set_weight(g, [v], far) - set_weight(g, [v], near)


def tilo_adjacency(g: WeightedGraph, seq: Sequence[int], i: int, j: int) -> float:
    return pair_weight(g, seq[i], seq[j])


def tilo_shift(seq: Sequence[int], a: int, b: int) -> tuple[int, ...]:
    """Cyclically permute positions a..b so the entry at ``a`` lands at ``b``."""
    n = len(seq)
    if a == b:
        raise ValueError("shift needs two distinct positions")
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"shift positions ({a}, {b}) out of range for N={n}")
    seq = list(seq)
    v = seq.pop(a)
    seq.insert(b, v)
    return tuple(seq)


def tilo_reductions(g: WeightedGraph, seq: Sequence[int], eps: float = EPS) -> Iterator[tuple[int, int]]:
    """Every (k, i), k < i, meeting the sufficient conditions for a width-lowering shift.

    Conditions: s_{i,k} > 0, b_{t-1} <= b_t for k < t <= i, and
    s_{i,k} - s_{i,i+1} - 2 a_{k,i+1} > 0.  The move they certify sends the
    vertex at position k just past position i+1, see :func:`reduction_move`.
    Pairs come in order of i, then k.
    """
    _check_order(g, seq)
    n = g.vertex_count
    b = tilo_widths(g, seq)
    for i in range(1, n - 1):
        for k in range(i):
            if any(b[t - 1] > b[t] + eps for t in range(k + 1, i + 1)):
                continue
            s_ik = tilo_slope(g, seq, i, k)
            if not s_ik > eps:
                continue
            if s_ik - tilo_slope(g, seq, i, i + 1) - 2 * tilo_adjacency(g, seq, k, i + 1) > eps:
                yield k, i


def tilo_reducible(g: WeightedGraph, seq: Sequence[int], eps: float = EPS) -> tuple[int, int] | None:
    """First pair from :func:`tilo_reductions`, or None."""
    return next(tilo_reductions(g, seq, eps), None)


def reduction_move(seq: Sequence[int], k: int, i: int) -> tuple[int, ...]:
    return tilo_shift(seq, k, i + 1)


def tilo_profile(g: WeightedGraph, seq: Sequence[int]) -> list[float]:
    return sorted(tilo_widths(g, seq), reverse=True)


# ---------------------------------------------------------------------------
# quotient induced by a branch shift

@dataclass(frozen=True)
class InducedQuotient:
    quotient: QuotientGraph
    ordering: tuple[int, ...]
    path: BranchShiftPath

    @property
    def blocks(self):
        return self.quotient.partition.blocks


def induced_quotient(pos: TreePosition, x: int, y: int) -> InducedQuotient:
    """Blocks P_0..P_{i+2}: the far sides of p_0, x, f_2..f_i, y, p_{i+1}."""
    path = path_between_edges(pos, x, y)
    nv = pos.node_vertex
    blocks = []
    for e in path.block_edges():
        ref = x if e == y else y
        # plain walk from an endpoint of e, not the rooted index the engine uses
        a, b = pos.ends[e]
        nodes = _component_nodes(pos, e, a)
        if pos.ends[ref][0] in nodes:
            nodes = _component_nodes(pos, e, b)
        blocks.append(frozenset(nv[n] for n in nodes if n in nv))
    q = quotient_graph(pos.graph, blocks)
    return InducedQuotient(q, tuple(range(len(blocks))), path)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def _path_position_edges(path: BranchShiftPath) -> list[int]:
    # cut t of the identity ordering sits on p_t, with p_0 and p_{i+1} at the ends
    return [path.p0, *path.path_edges, path.p_last]


class ShiftInstance:
    """Quotients before and after one shift, built once and shared by the checks."""

    def __init__(self, pos: TreePosition, x: int, y: int):
        self.pos, self.x, self.y = pos, x, y
        self._before = self._after = self._shifted = None

    @property
    def before(self) -> InducedQuotient:
        if self._before is None:
            self._before = induced_quotient(self.pos, self.x, self.y)
        return self._before

    @property
    def shifted(self) -> TreePosition:
        if self._shifted is None:
            self._shifted = apply_branch_shift(self.pos, BranchShift(self.x, self.y), self.before.path)
        return self._shifted

    @property
    def after(self) -> InducedQuotient:
        if self._after is None:
            path = self.before.path
            first = path.side_edges[0] if path.side_edges else path.y
            self._after = induced_quotient(self.shifted, first, self.x)
        return self._after

    @property
    def relabel(self) -> list[int]:
        # block j of the new quotient is block relabel[j] of the old one
        i = self.before.path.i
        return [0] + [t + 1 for t in range(1, i + 1)] + [1, i + 2]


def _instance(pos, x, y, inst):
    return inst if inst is not None else ShiftInstance(pos, x, y)


def check_width_equivalence(pos: TreePosition, x: int, y: int, eps: float = EPS, inst=None) -> CheckResult:
    iq = _instance(pos, x, y, inst).before
    bq = tilo_widths(iq.quotient.graph, iq.ordering)
    for t, e in enumerate(_path_position_edges(iq.path)):
        if abs(bq[t] - pos.widths[e]) > eps:
            return CheckResult(False, f"t={t}: quotient width {bq[t]} vs tree width {pos.widths[e]}")
    return CheckResult(True)


def check_quotient_invariance(pos: TreePosition, x: int, y: int, eps: float = EPS, inst=None) -> CheckResult:
    inst = _instance(pos, x, y, inst)
    before, after, relabel = inst.before, inst.after, inst.relabel
    if len(after.blocks) != len(before.blocks):
        return CheckResult(False, "block counts differ")
    for j, old in enumerate(relabel):
        if after.blocks[j] != before.blocks[old]:
            return CheckResult(False, f"block {j} after shift is not old block {old}")
    old_edges = {(u, v): w for u, v, w in before.quotient.graph.edges}
    new_edges = {}
    for u, v, w in after.quotient.graph.edges:
        a, b = relabel[u], relabel[v]
        new_edges[(min(a, b), max(a, b))] = w
    if new_edges != old_edges:
        return CheckResult(False, "quotient edge weights differ after relabelling")
    return CheckResult(True)


def check_cyclic_correspondence(pos: TreePosition, x: int, y: int, eps: float = EPS, inst=None) -> CheckResult:
    inst = _instance(pos, x, y, inst)
    before, after = inst.before, inst.after
    lookup = {b: j for j, b in enumerate(before.blocks)}
    try:
        induced = tuple(lookup[b] for b in after.blocks)
    except KeyError:
        return CheckResult(False, "a block after the shift is not a block before it")
    expected = tilo_shift(before.ordering, 1, before.path.i + 1)
    if induced != expected:
        return CheckResult(False, f"induced order {induced} != {expected}")
    return CheckResult(True)


def check_slope_translation(pos: TreePosition, x: int, y: int, eps: float = EPS, inst=None) -> CheckResult:
    """Tree slope s(p_t, g_k) against the quotient slope s_{t,k}, sign flipped for k <= t."""
    iq = _instance(pos, x, y, inst).before
    q, order = iq.quotient.graph, iq.ordering
    path = iq.path
    for t, p in enumerate(path.path_edges, start=1):
        for k, f in enumerate(path.block_edges()):
            s_tree = slope(pos, p, f)
            s_lin = tilo_slope(q, order, t, k)
            expected = -s_lin if k <= t else s_lin
            if abs(s_tree - expected) > eps:
                return CheckResult(False, f"t={t} k={k}: tree slope {s_tree} vs {expected}")
    a_xy = q.neighbors(1).get(path.i + 1, 0.0)
    if abs(adjacency_weight(pos, x, y) - a_xy) > eps:
        return CheckResult(False, "a(x, y) differs from the quotient edge weight")
    return CheckResult(True)


ALL_CHECKS = {
    "width_equivalence": check_width_equivalence,
    "quotient_invariance": check_quotient_invariance,
    "cyclic_correspondence": check_cyclic_correspondence,
    "slope_translation": check_slope_translation,
}


def run_checks(pos: TreePosition, x: int, y: int, eps: float = EPS, inst=None) -> dict[str, CheckResult]:
    inst = _instance(pos, x, y, inst)
    return {name: fn(pos, x, y, eps, inst) for name, fn in ALL_CHECKS.items()}
