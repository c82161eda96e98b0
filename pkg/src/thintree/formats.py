"""Edge-list and Matrix Market input, DOT and JSON output."""

from __future__ import annotations

import hashlib
import json
import logging
import math
from pathlib import Path

from .graph_core import WeightedGraph, build_graph
from .tree_position import TreePosition

log = logging.getLogger(__name__)


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _weight(text: str, lineno: int) -> float:
    try:
        w = float(text)
    except ValueError:
        raise ParseError(f"weight {text!r} is not a number", lineno) from None
    if not math.isfinite(w) or w <= 0:
        raise ParseError(f"weight {text!r} must be a positive finite number", lineno)
    return w


def parse_edge_list(text: str) -> WeightedGraph:
    """``u<TAB>v<TAB>weight`` lines; labels get dense ids by first appearance."""
    ids: dict[str, int] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        u, v, w = (p.strip() for p in parts)
        if not u or not v:
            raise ParseError("empty vertex label", lineno)
        if u == v:
            raise ParseError(f"self-loop on {u!r}", lineno)
        weight = _weight(w, lineno)
        for lab in (u, v):
            if lab not in ids:
                ids[lab] = len(ids)
        edges.append((ids[u], ids[v], weight))
    if not edges:
        raise ParseError("no edges")
    labels = tuple(ids)
    return build_graph(edges, vertex_count=len(labels), labels=labels)


def load_edge_list(path) -> WeightedGraph:
    return parse_edge_list(Path(path).read_text())


def _line_order(g: WeightedGraph) -> list[tuple[int, int, float]]:
    """Edge lines arranged so vertices first appear in id order where possible.

    Every graph read by :func:`parse_edge_list` has ids in first-appearance
    order, so for those the output reloads to the identical graph.
    """
    seen = [False] * g.vertex_count
    emitted = set()
    out = []
    for v in range(g.vertex_count):
        if seen[v] or not g.neighbors(v):
            continue
        nbrs = sorted(g.neighbors(v))
        known = [u for u in nbrs if seen[u]]
        if known:
            u = known[0]
            out.append((u, v, g.neighbors(v)[u]))
        else:
            u = nbrs[0]
            out.append((v, u, g.neighbors(v)[u]))
            seen[u] = True
        seen[v] = True
        emitted.add((min(u, v), max(u, v)))
    out.extend(e for e in g.edges if (e[0], e[1]) not in emitted)
    return out


def format_edge_list(g: WeightedGraph) -> str:
    isolated = [v for v in range(g.vertex_count) if not g.neighbors(v)]
    if isolated:
        log.warning("edge list drops %d isolated vertices", len(isolated))
    lines = [f"{g.label(u)}\t{g.label(v)}\t{w!r}" for u, v, w in _line_order(g)]
    return "\n".join(lines) + "\n"


def save_edge_list(g: WeightedGraph, path) -> None:
    Path(path).write_text(format_edge_list(g))


def load_matrix_market(path) -> WeightedGraph:
    """Symmetric coordinate matrix; strictly lower-triangle nonzeros become edges."""
    from scipy.io import mminfo, mmread

    try:
        rows, cols, _, fmt, field, symmetry = mminfo(str(path))
    except (ValueError, OSError) as exc:
        raise ParseError(f"unreadable Matrix Market header: {exc}") from None
    if fmt != "coordinate":
        raise ParseError(f"unsupported Matrix Market format {fmt!r}, need coordinate")
    if field not in ("real", "integer", "pattern"):
        raise ParseError(f"unsupported Matrix Market field {field!r}")
    if symmetry != "symmetric":
        raise ParseError(f"unsupported Matrix Market symmetry {symmetry!r}, need symmetric")
    if rows != cols:
        raise ParseError("matrix is not square")
    try:
        m = mmread(str(path)).tocoo()
    except ValueError as exc:
        raise ParseError(f"bad Matrix Market body: {exc}") from None
    edges = []
    for i, j, w in zip(m.row.tolist(), m.col.tolist(), m.data.tolist()):
        # the reader mirrors the stored triangle; keep one copy, skip diagonal and zeros
        if i <= j or w == 0:
            continue
        if field == "pattern":
            w = 1.0
        if w < 0:
            raise ParseError(f"negative entry ({i + 1}, {j + 1})")
        edges.append((j, i, float(w)))
    if not edges:
        raise ParseError("no edges")
    return build_graph(edges, vertex_count=rows, labels=tuple(str(v + 1) for v in range(rows)))


def load_graph(path, fmt: str | None = None) -> WeightedGraph:
    fmt = fmt or ("mtx" if str(path).endswith(".mtx") else "edgelist")
    if fmt == "mtx":
        return load_matrix_market(path)
    if fmt == "edgelist":
        return load_edge_list(path)
    raise ValueError(f"unknown input format {fmt!r}")


def _num(w: float) -> str:
    return f"{w:.10g}"


def dot_source(pos: TreePosition) -> str:
    """Graphviz text: open circles inside, labelled leaves, widths on edges."""
    g = pos.graph
    out = ["graph tree {", '  node [shape=circle, label="", width=0.15];']
    for node in range(len(pos.inc)):
        if pos.is_leaf(node):
            v = pos.node_vertex[node]
            out.append(f"  n{node} [shape=plaintext, label={json.dumps(g.label(v))}];")
        else:
            out.append(f"  n{node};")
    for f, (a, b) in enumerate(pos.ends):
        out.append(f'  n{a} -- n{b} [label="{_num(pos.widths[f])}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def export_dot(pos: TreePosition, path=None) -> str:
    text = dot_source(pos)
    if path is not None:
        Path(path).write_text(text)
    return text


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def dump_report(report: dict) -> str:
    """Canonical JSON so equal reports are equal bytes."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"

