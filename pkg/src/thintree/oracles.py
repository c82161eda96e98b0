"""Brute-force cross-checks shared by the test suite and ``thintree verify``.

Each function returns a list of human-readable failure strings; an empty list
is a pass.  Every string starts with a bracketed category: identity,
quotient, cache, prediction, soundness, structure or pinch.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .clustering import clusters_from_minimum, local_minima, verify_pinch_cluster
from .generators import random_clustered_graph, random_weighted_graph
from .graph_core import WeightedGraph, cut_weight
from .shift_engine import (
    BranchShift, ThinConfig, apply_branch_shift, meets_reduction_criteria, predicted_path_widths,
    run_thin,
)
from .tilo import ShiftInstance, run_checks
from .tree_position import (
    EPS, TreePosition, adjacency_weight, enumerate_positions, lex_compare, nonadjacent_pairs,
    path_between_edges, random_position, slope, tree_path_edges, validate,
)


def position_identities(pos: TreePosition, eps: float = EPS) -> list[str]:
    """Width, adjacency and slope identities that hold on any tree position."""
    out = []
    g = pos.graph
    E = pos.edge_count
    b = pos.widths
    # b(f) through the tree paths of graph edges, against the cut formula
    through = [0.0] * E
    for u, v, w in g.edges:
        for f in tree_path_edges(pos, pos.leaf_of[u], pos.leaf_of[v]):
            through[f] += w
    for f in range(E):
        if abs(through[f] - b[f]) > eps:
            out.append(f"[identity] edge {f}: path-sum width {through[f]} vs cut width {b[f]}")
    for v in range(g.vertex_count):
        f = pos.leaf_edge(v)
        if abs(b[f] - g.degree(v)) > eps:
            out.append(f"[identity] leaf edge of {v}: width {b[f]} vs degree {g.degree(v)}")
    for e in range(E):
        for f in range(E):
            if e == f:
                continue
            a_vertex = adjacency_weight(pos, e, f, "vertex")
            a_edge = adjacency_weight(pos, e, f, "edge")
            if abs(a_vertex - a_edge) > eps:
                out.append(f"[identity] a({e},{f}): vertex form {a_vertex} vs edge form {a_edge}")
            s = slope(pos, e, f)
            if abs(s - (b[f] - 2 * a_edge)) > eps:
                out.append(f"[identity] s({e},{f}) = {s} but b - 2a = {b[f] - 2 * a_edge}")
    for node in range(len(pos.inc)):
        if pos.is_leaf(node):
            continue
        trio = pos.inc[node]
        for e in trio:
            f, h = [x for x in trio if x != e]
            a_ef, a_eh, a_fh = (adjacency_weight(pos, e, f), adjacency_weight(pos, e, h),
                                adjacency_weight(pos, f, h))
            if abs(b[e] - (a_ef + a_eh)) > eps:
                out.append(f"[identity] node {node}: b({e}) != a({e},{f}) + a({e},{h})")
            if abs(b[e] - (b[f] + b[h] - 2 * a_fh)) > eps:
                out.append(f"[identity] node {node}: b({e}) != b({f}) + b({h}) - 2a({f},{h})")
            s_fh = slope(pos, f, h)
            if abs(s_fh - (a_eh - a_fh)) > eps or abs(s_fh - (b[e] - b[f])) > eps:
                out.append(f"[identity] node {node}: s({f},{h}) = {s_fh} breaks the interior identities")
    return out


def shift_instance(pos: TreePosition, x: int, y: int, eps: float = EPS) -> list[str]:
    """Quotient checks, prediction, cache consistency and criteria soundness for one pair."""
    out = []
    inst = ShiftInstance(pos, x, y)
    for name, res in run_checks(pos, x, y, eps, inst).items():
        if not res:
            out.append(f"[quotient] {name} ({x}->{y}): {res.detail}")
    new = inst.shifted
    on_path = set(inst.before.path.path_edges)
    fresh = new.recompute_widths()
    for f in range(pos.edge_count):
        if abs(new.widths[f] - fresh[f]) > eps:
            out.append(f"[cache] ({x}->{y}): edge {f} cached {new.widths[f]} vs {fresh[f]}")
        if f not in on_path and new.widths[f] != pos.widths[f]:
            out.append(f"[cache] off-path width of edge {f} changed under {x}->{y}")
    for e, w in predicted_path_widths(pos, BranchShift(x, y)).items():
        if abs(w - fresh[e]) > eps:
            out.append(f"[prediction] ({x}->{y}): edge {e} predicted {w} vs {fresh[e]}")
    if meets_reduction_criteria(pos, BranchShift(x, y), eps):
        if lex_compare(sorted(fresh, reverse=True), sorted(pos.widths, reverse=True), eps) >= 0:
            out.append(f"[soundness] criteria hit {x}->{y} did not lower the width profile")
    bad = validate(new, eps, check_cache=False)  # cache compared above
    if bad:
        out.append(f"[structure] invalid position after {x}->{y}: {bad[0].detail}")
    return out


def replay_trace(start: TreePosition, steps, eps: float = EPS) -> tuple[int, list[str]]:
    """Re-apply a thinning trace, checking cache and off-path widths at each shift."""
    out = []
    cur = start
    for k, st in enumerate(steps):
        m = BranchShift(st.x, st.y)
        on_path = set(path_between_edges(cur, m.x, m.y).path_edges)
        nxt = apply_branch_shift(cur, m)
        fresh = nxt.recompute_widths()
        for f in range(cur.edge_count):
            if abs(nxt.widths[f] - fresh[f]) > eps:
                out.append(f"[cache] step {k}: edge {f} cached {nxt.widths[f]} vs {fresh[f]}")
            if f not in on_path and nxt.widths[f] != cur.widths[f]:
                out.append(f"[cache] step {k}: off-path width of edge {f} changed")
        cur = nxt
    return len(steps), out


def position_suite(pos: TreePosition, eps: float = EPS) -> tuple[int, list[str]]:
    """Identities plus every nonadjacent ordered pair; returns (pairs checked, failures)."""
    out = position_identities(pos, eps)
    pairs = 0
    for x, y in nonadjacent_pairs(pos):
        pairs += 1
        out.extend(shift_instance(pos, x, y, eps))
    return pairs, out


@dataclass
class SuiteSummary:
    label: str
    instances: int = 0
    pairs: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"{status} {self.label}: {self.instances} positions, {self.pairs} pairs, "
                f"{len(self.failures)} failures, {self.seconds:.1f}s")


def exhaustive_instances(n: int, seeds):
    """(label, position) for every leaf-labelled tree of each seeded random graph."""
    for seed in seeds:
        g = random_weighted_graph(n, seed)
        for pos in enumerate_positions(g):
            yield f"n={n} seed={seed}", pos


def random_instances(count: int, max_n: int = 12, seed: int = 0):
    """(label, position): random graphs on 4..max_n vertices, random trees."""
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(4, max_n)
        gseed = rng.randrange(2**31)
        g = random_weighted_graph(n, gseed, p=rng.choice([0.3, 0.5, 0.8]))
        yield f"instance {k} (N={n}, seed={gseed})", random_position(g, gseed)


def _run_suite(label: str, instances, eps: float) -> SuiteSummary:
    summary = SuiteSummary(label)
    t0 = time.perf_counter()
    for name, pos in instances:
        summary.instances += 1
        pairs, fails = position_suite(pos, eps)
        summary.pairs += pairs
        summary.failures.extend(f"{name}: {f}" for f in fails)
    summary.seconds = time.perf_counter() - t0
    return summary


def exhaustive_suite(n: int, seeds, eps: float = EPS) -> SuiteSummary:
    """All leaf-labelled trees on ``n`` leaves for each seeded random graph."""
    seeds = list(seeds)
    return _run_suite(f"exhaustive n={n} seeds={seeds[0]}..{seeds[-1]}", exhaustive_instances(n, seeds), eps)


def random_suite(count: int, max_n: int = 12, seed: int = 0, eps: float = EPS) -> SuiteSummary:
    return _run_suite(f"random N<={max_n} count={count} seed={seed}", random_instances(count, max_n, seed), eps)


def pinch_suite(count: int, max_n: int = 7, seed: int = 0, eps: float = EPS) -> SuiteSummary:
    """Thin random clustered graphs, then brute-force every local-minimum cut."""
    rng = random.Random(seed)
    summary = SuiteSummary(f"pinch clusters N<={max_n} count={count} seed={seed}")
    t0 = time.perf_counter()
    for k in range(count):
        n = rng.randint(min(5, max_n), max_n)  # four leaves leave no room for a local minimum
        gseed = rng.randrange(2**31)
        g = random_clustered_graph(n, gseed)
        start = random_position(g, gseed)
        res = run_thin(start, ThinConfig(epsilon=eps, seed=gseed))
        pos = res.position
        summary.instances += 1
        summary.failures.extend(replay_trace(start, res.trace, eps)[1])
        for m in local_minima(pos, eps):
            summary.pairs += 1
            pair = clusters_from_minimum(pos, m, eps)
            for side in (pair.cluster_a, pair.cluster_b):
                cx = verify_pinch_cluster(g, side, n - 1, eps)
                if cx is not None:
                    summary.failures.append(f"[pinch] graph seed={gseed}: side {sorted(side)} fails by {cx}")
    summary.seconds = time.perf_counter() - t0
    return summary


def brute_force_optimum(g: WeightedGraph, eps: float = EPS):
    """Thinnest width profile over every tree position, and how many attain it."""
    best, count = None, 0
    for pos in enumerate_positions(g):
        prof = sorted(pos.widths, reverse=True)
        c = -1 if best is None else lex_compare(prof, best, eps)
        if c < 0:
            best, count = prof, 1
        elif c == 0:
            count += 1
    return best, count


def boundary_of(g: WeightedGraph, vertices) -> float:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return cut_weight(g, mask)
