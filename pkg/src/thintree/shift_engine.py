"""Branch shifts and the descent to a thin tree position.

A branch shift of ``x`` to ``y`` detaches the interior node ``u`` where ``x``
meets the x->y path and re-inserts it on the far end of the path, next to
``y``.  In edge-id terms (path p_1..p_i, p_0 and p_{i+1} the other edges at
the two path ends):

* p_1 is unhooked from n_1 and rehooked at n_i,
* p_0 moves from u to n_1,
* p_{i+1} moves from n_i to u.

Only the widths of p_1..p_i change.  After the move p_t (t >= 2) separates
the same blocks as before minus the x branch, and p_1 separates the x branch
plus the p_{i+1} branch from everything else.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .tree_position import (
    EPS, BranchShiftPath, TreeError, TreePosition, WidthProfile, lex_compare,
    nonadjacent_pairs, path_between_edges,
)

log = logging.getLogger(__name__)


class IterationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class BranchShift:
    x: int
    y: int


@dataclass
class ShiftOutcome:
    new_path_widths: dict[int, float]
    profile_delta: tuple[WidthProfile, WidthProfile]
    accepted: bool


@dataclass
class ThinConfig:
    epsilon: float = EPS
    scan_strategy: str = "first"  # or "best"
    init: str = "caterpillar"     # or "random"
    seed: int = 0
    max_iterations: int = 100_000
    parallel_scan: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.scan_strategy not in ("first", "best"):
            raise ValueError(f"unknown scan strategy {self.scan_strategy!r}")
        if self.init not in ("caterpillar", "random"):
            raise ValueError(f"unknown init {self.init!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def _cross(edges, a: int, b: int) -> float:
    total = 0.0
    for u, v, w in edges:
        if ((a >> u) & 1 and (b >> v) & 1) or ((a >> v) & 1 and (b >> u) & 1):
            total += w
    return total


class _PathTerms:
    """Block masks along one x->y path and the slope terms built from them."""

    def __init__(self, pos: TreePosition, path: BranchShiftPath):
        idx = pos.index
        edges = pos.graph.edges
        self.pos = pos
        self.path = path
        blocks = [idx.side_away(e, path.y) for e in path.block_edges()]
        i = path.i
        blocks[i + 1] = idx.side_away(path.y, path.x)
        self.blocks = blocks
        x_block, y_block = blocks[1], blocks[i + 1]
        full = pos.graph.full_mask
        self.b_x = pos.widths[path.x]
        self.b_y = pos.widths[path.y]
        self.a_xy = _cross(edges, x_block, y_block)
        # far side of p_i from x is blocks i+1.. ; from y it is blocks 0..i
        right_of_pi = blocks[i + 1] | blocks[i + 2]
        self.s_pi_x = self.b_x - 2 * _cross(edges, x_block, right_of_pi)
        self.s_pi_y = self.b_y - 2 * _cross(edges, y_block, full ^ right_of_pi)

    def meets_criteria(self, eps: float) -> bool:
        path = self.path
        if not self.s_pi_x < -eps:
            return False
        w = self.pos.widths
        pe = path.path_edges
        for t in range(1, len(pe)):
            if w[pe[t - 1]] > w[pe[t]] + eps:
                return False
        return self.s_pi_x + self.s_pi_y + 2 * self.a_xy < -eps

    def predicted(self) -> dict[int, float]:
        pos, path = self.pos, self.path
        edges = pos.graph.edges
        pe = path.path_edges
        i = path.i
        out = {pe[0]: pos.widths[pe[-1]] + self.s_pi_x + self.s_pi_y + 2 * self.a_xy}
        x_block = self.blocks[1]
        right = self.blocks[i + 1] | self.blocks[i + 2]
        for t in range(i, 1, -1):
            # edge p_t keeps the blocks it had minus the x branch
            if t < i:
                right |= self.blocks[t + 1]
            s_pt_x = self.b_x - 2 * _cross(edges, x_block, right)
            out[pe[t - 1]] = pos.widths[pe[t - 1]] + s_pt_x
        return out

    def predicted_profile(self) -> list[float]:
        new = list(self.pos.widths)
        for e, w in self.predicted().items():
            new[e] = w
        new.sort(reverse=True)
        return new


def _reattach(pos: TreePosition, e: int, old: int, new: int):
    ends = pos.ends[e]
    ends[ends.index(old)] = new
    pos.inc[old].remove(e)
    pos.inc[new].append(e)


def apply_branch_shift(pos: TreePosition, m: BranchShift, path: BranchShiftPath | None = None) -> TreePosition:
    """Return a new position with ``m.x`` shifted to ``m.y``; ``pos`` is untouched."""
    if path is None:
        path = path_between_edges(pos, m.x, m.y)
    elif (path.x, path.y) != (m.x, m.y):
        raise TreeError("path does not belong to this shift")
    new = pos.copy()
    nodes, pe = path.nodes, path.path_edges
    u, v, s = nodes[0], nodes[1], nodes[-1]
    if v != s:
        _reattach(new, pe[0], v, s)
    _reattach(new, path.p0, u, v)
    _reattach(new, path.p_last, s, u)
    new._touch()
    for e in pe:
        new.widths[e] = new.recompute_width(e)
    return new


def inverse_shift(pos: TreePosition, m: BranchShift) -> BranchShift:
    """The shift that undoes ``m``, where ``pos`` is the position *before* ``m``.

    It moves x back past the branch that followed it originally: f_2 when the
    path has length >= 2, otherwise y itself.
    """
    path = path_between_edges(pos, m.x, m.y)
    target = path.side_edges[0] if path.side_edges else path.y
    return BranchShift(m.x, target)


def predicted_path_widths(pos: TreePosition, m: BranchShift) -> dict[int, float]:
    """Widths of the path edges after shifting, keyed by (stable) edge id.

    Edge p_1 ends up carrying the cut that p_i carried with the x and y
    branches swapped across it; edge p_t (t >= 2) carries its old cut with the
    x branch moved to the far side.
    """
    return _PathTerms(pos, path_between_edges(pos, m.x, m.y)).predicted()


def meets_reduction_criteria(pos: TreePosition, m: BranchShift, eps: float = EPS) -> bool:
    return _PathTerms(pos, path_between_edges(pos, m.x, m.y)).meets_criteria(eps)


def evaluate_shift(pos: TreePosition, m: BranchShift, eps: float = EPS) -> ShiftOutcome:
    terms = _PathTerms(pos, path_between_edges(pos, m.x, m.y))
    new_widths = terms.predicted()
    old = pos.profile()
    new = WidthProfile(tuple(terms.predicted_profile()))
    return ShiftOutcome(new_widths, (old, new), new.compare(old, eps) < 0)


# ---------------------------------------------------------------------------
# scans

def _scan_pairs(pos: TreePosition, pairs, eps: float, strategy: str):
    """Reduction-criteria hits over ``pairs`` in order; stops at the first unless ``best``."""
    hits = []
    for x, y in pairs:
        terms = _PathTerms(pos, path_between_edges(pos, x, y))
        if terms.meets_criteria(eps):
            profile = terms.predicted_profile() if strategy == "best" else None
            hits.append((BranchShift(x, y), profile))
            if strategy == "first":
                break
    return hits


def _select(hits, eps: float, strategy: str) -> BranchShift | None:
    if not hits:
        return None
    if strategy == "first":
        return hits[0][0]
    best, best_profile = hits[0]
    for shift, profile in hits[1:]:
        if lex_compare(profile, best_profile, eps) < 0:
            best, best_profile = shift, profile
    return best


def reduction_scan(pos: TreePosition, cfg: ThinConfig | None = None) -> BranchShift | None:
    """Find a shift meeting the three sufficient reduction conditions.

    For x, y with path p_1..p_i: s(p_i, x) < 0, b(p_1) <= ... <= b(p_i) and
    s(p_i, x) + s(p_i, y) + 2 a(x, y) < 0.  Strict inequalities need a margin
    of ``epsilon``; the monotone chain tolerates ``epsilon``.
    """
    cfg = cfg or ThinConfig()
    if cfg.parallel_scan:
        return parallel_candidate_scan(pos, cfg)
    hits = _scan_pairs(pos, nonadjacent_pairs(pos), cfg.epsilon, cfg.scan_strategy)
    return _select(hits, cfg.epsilon, cfg.scan_strategy)


def parallel_candidate_scan(pos: TreePosition, cfg: ThinConfig) -> BranchShift | None:
    """Same answer as the sequential scan, with candidates split across threads.

    Each worker scans a contiguous block of ``x`` ids against a read-only
    snapshot; hits are merged back in scan order before selection.
    """
    pairs = list(nonadjacent_pairs(pos))
    workers = max(1, cfg.workers)
    if not pairs:
        return None
    pos.index  # build the shared index before fanning out
    size = -(-len(pairs) // workers)
    chunks = [pairs[k:k + size] for k in range(0, len(pairs), size)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(lambda c: _scan_pairs(pos, c, cfg.epsilon, cfg.scan_strategy), chunks))
    hits = [h for chunk_hits in results for h in chunk_hits]
    return _select(hits, cfg.epsilon, cfg.scan_strategy)


def independent_shifts(pos: TreePosition, shifts) -> list[BranchShift]:
    """Greedy subset of ``shifts`` whose x->y paths share no tree node."""
    used: set[int] = set()
    out = []
    for m in shifts:
        p = path_between_edges(pos, m.x, m.y)
        touched = set(p.nodes)
        if touched & used:
            continue
        used |= touched
        out.append(m)
    return out


def is_weakly_reducible_exhaustive(pos: TreePosition, eps: float = EPS) -> BranchShift | None:
    """First ordered pair (x, y) whose shift strictly lowers the width profile."""
    current = sorted(pos.widths, reverse=True)
    for x, y in nonadjacent_pairs(pos):
        terms = _PathTerms(pos, path_between_edges(pos, x, y))
        if lex_compare(terms.predicted_profile(), current, eps) < 0:
            return BranchShift(x, y)
    return None


def certify(pos: TreePosition, eps: float = EPS) -> bool:
    """Mark ``pos`` thin if no branch shift lowers its width."""
    pos.certified = is_weakly_reducible_exhaustive(pos, eps) is None
    return pos.certified


# ---------------------------------------------------------------------------
# driver

@dataclass
class TraceStep:
    step: int
    x: int
    y: int
    source: str  # "criteria" or "exhaustive"
    old_head: float
    new_head: float

    def as_dict(self):
        return {"step": self.step, "x": self.x, "y": self.y, "source": self.source,
                "old_head": self.old_head, "new_head": self.new_head}


@dataclass
class ThinResult:
    position: TreePosition
    iterations: int
    trace: list[TraceStep] = field(default_factory=list)


def run_thin(pos: TreePosition, cfg: ThinConfig | None = None) -> ThinResult:
    cfg = cfg or ThinConfig()
    eps = cfg.epsilon
    trace: list[TraceStep] = []
    current = pos.copy()
    steps = 0
    while True:
        source = "criteria"
        m = reduction_scan(current, cfg)
        if m is None:
            source = "exhaustive"
            m = is_weakly_reducible_exhaustive(current, eps)
        if m is None:
            current.certified = True
            return ThinResult(current, steps, trace)
        if steps >= cfg.max_iterations:
            raise IterationCapExceeded(f"no thin position within {cfg.max_iterations} shifts")
        old = current.profile()
        nxt = apply_branch_shift(current, m)
        new = nxt.profile()
        if new.compare(old, eps) >= 0:
            # a predicted improvement that does not materialise would loop forever
            raise IterationCapExceeded(f"shift {m} did not lower the width profile")
        steps += 1
        trace.append(TraceStep(steps, m.x, m.y, source, old.widths[0], new.widths[0]))
        log.debug("step %d: %s %s -> %s", steps, m, old.widths[:3], new.widths[:3])
        current = nxt


def thin(pos: TreePosition, cfg: ThinConfig | None = None) -> TreePosition:
    return run_thin(pos, cfg).position
