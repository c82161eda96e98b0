"""Synthetic graphs: planted partitions, the barbell fixture, small named graphs."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .graph_core import WeightedGraph, build_graph


def gen_planted(seed: int, blocks: Sequence[int], p_in: float, p_out: float, w: float = 1.0,
                chain: bool = False) -> WeightedGraph:
    """Planted-partition graph on consecutive vertex blocks.

    Each pair (u < v), visited in lexicographic order, gets an edge of weight
    ``w`` with probability ``p_in`` inside a block and ``p_out`` across
    blocks.  ``chain`` adds one bridge from the last vertex of every block to
    the first vertex of the next (merged into any sampled edge).
    """
    if any(b < 1 for b in blocks):
        raise ValueError("block sizes must be positive")
    if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    owner = [j for j, size in enumerate(blocks) for _ in range(size)]
    n = len(owner)
    rng = random.Random(seed)
    edges = {}
    for u, v in combinations(range(n), 2):
        p = p_in if owner[u] == owner[v] else p_out
        if rng.random() < p:
            edges[(u, v)] = w
    if chain:
        start = 0
        for size in blocks[:-1]:
            last = start + size - 1
            edges[(last, last + 1)] = w
            start += size
    return build_graph([(u, v, x) for (u, v), x in edges.items()], vertex_count=n)


def barbell() -> WeightedGraph:
    """Two unit triangles {0,1,2} and {3,4,5} joined by the bridge (2, 3)."""
    return gen_planted(0, [3, 3], 1.0, 0.0, chain=True)


def random_weighted_graph(n: int, seed: int, p: float = 0.5, lo: float = 0.25, hi: float = 3.0) -> WeightedGraph:
    rng = random.Random(seed)
    edges = [(u, v, round(rng.uniform(lo, hi), 3)) for u, v in combinations(range(n), 2) if rng.random() < p]
    return build_graph(edges, vertex_count=n)


def random_clustered_graph(n: int, seed: int) -> WeightedGraph:
    """Balanced hidden groups (two, three from n=9), dense inside and sparse across."""
    rng = random.Random(seed)
    k = 2 if n < 9 else 3
    group = [j % k for j in range(n)]
    rng.shuffle(group)
    edges = []
    for u, v in combinations(range(n), 2):
        if rng.random() < (0.95 if group[u] == group[v] else 0.05):
            edges.append((u, v, rng.choice([0.5, 1.0, 1.5, 2.5])))
    return build_graph(edges, vertex_count=n)


def complete_graph(n: int, w: float = 1.0) -> WeightedGraph:
    return build_graph([(u, v, w) for u, v in combinations(range(n), 2)], vertex_count=n)


def path_graph(n: int, w: float = 1.0) -> WeightedGraph:
    return build_graph([(v, v + 1, w) for v in range(n - 1)], vertex_count=n)


def star_graph(leaves: int, w: float = 1.0) -> WeightedGraph:
    return build_graph([(0, v, w) for v in range(1, leaves + 1)], vertex_count=leaves + 1)
