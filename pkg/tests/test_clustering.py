from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import INTERLEAVED
from thintree.clustering import (
    BudgetExceeded, ClusterError, clusters_from_minimum, extract_all_clusters, local_minima,
    verify_pinch_cluster,
)
from thintree.generators import gen_planted, random_clustered_graph, star_graph
from thintree.graph_core import boundary
from thintree.shift_engine import run_thin, thin
from thintree.tilo import induced_quotient, tilo_widths
from thintree.tree_position import (
    caterpillar_position, enumerate_positions, nonadjacent_pairs, random_position,
)


@pytest.fixture
def thin_bar(bar):
    return thin(caterpillar_position(bar, INTERLEAVED))


def test_barbell_minimum(thin_bar):
    (m,) = local_minima(thin_bar)
    assert m.width == 1
    for w in m.witness_neighbors:
        assert thin_bar.widths[w] > 1
    pair = clusters_from_minimum(thin_bar, m)
    assert (pair.cluster_a, pair.cluster_b) == ({0, 1, 2}, {3, 4, 5})
    assert pair.boundary == thin_bar.widths[m.edge] == boundary(thin_bar.graph, pair.cluster_a)


def test_no_minima_on_star_or_k4(triangle, k4):
    assert local_minima(caterpillar_position(triangle)) == []
    for pos in enumerate_positions(k4):
        assert local_minima(pos) == []
    pos = thin(caterpillar_position(k4))
    report = extract_all_clusters(pos)
    assert report.pairs == [] and report.profile == (4, 3, 3, 3, 3)


def test_preconditions(bar, thin_bar):
    pos = caterpillar_position(bar, INTERLEAVED)
    with pytest.raises(ClusterError):
        extract_all_clusters(pos)
    with pytest.raises(ClusterError):
        clusters_from_minimum(pos, 0)
    with pytest.raises(ClusterError):
        clusters_from_minimum(thin_bar, thin_bar.leaf_edge(0))
    with pytest.raises(NotImplementedError):
        local_minima(thin_bar, plateau=True)


def test_barbell_report(thin_bar):
    report = extract_all_clusters(thin_bar)
    assert len(report.pairs) == 1
    assert report.zero_width_edges == []
    assert report.edge_labels[report.pairs[0].edge] == "1"


def test_zero_width_minimum_flagged():
    g = gen_planted(0, [3, 3], 1.0, 0.0)  # two triangles, no bridge
    pos = thin(caterpillar_position(g, INTERLEAVED))
    report = extract_all_clusters(pos)
    assert [p.boundary for p in report.pairs] == [0.0]
    assert report.zero_width_edges == [report.pairs[0].edge]


def test_report_sorted_by_boundary():
    for seed in range(40):
        g = random_clustered_graph(9, seed)
        report = extract_all_clusters(thin(random_position(g, seed)))
        b = [p.boundary for p in report.pairs]
        assert b == sorted(b)


def test_verify_examples(bar, p4):
    assert verify_pinch_cluster(bar, {0, 1, 2}, 3) is None
    assert verify_pinch_cluster(p4, {0}, 3) is None
    assert verify_pinch_cluster(p4, {0, 1}, 3) is None
    with pytest.raises(ClusterError):
        verify_pinch_cluster(p4, set(), 2)
    with pytest.raises(ClusterError):
        verify_pinch_cluster(p4, {0, 1, 2, 3}, 2)


def test_star_two_step_counterexample():
    g = star_graph(4)
    found = {}
    for A in combinations(range(5), 2):
        cx = verify_pinch_cluster(g, A, 4)
        if cx is not None and len(cx.sequence) == 2:
            found[A] = cx
    assert (1, 2) in found
    cx = found[(1, 2)]
    assert cx.mode == "add" and cx.sequence == (0, 3)
    # the prefix only ties the boundary, then the full move lowers it
    assert boundary(g, {0, 1, 2}) == cx.boundary_before == 2
    assert boundary(g, {0, 1, 2, 3}) == cx.boundary_after == 1


def test_verify_budget():
    g = gen_planted(0, [8], 0.0, 0.0)  # no edges: every move ties
    with pytest.raises(BudgetExceeded):
        verify_pinch_cluster(g, {0, 1}, 6, budget=5)
    assert verify_pinch_cluster(g, {0, 1}, 6) is None


def test_minimum_is_path_minimum_between_wider_neighbours():
    checked = 0
    for seed in range(40):
        g = random_clustered_graph(8, seed)
        pos = thin(random_position(g, seed))
        for m in local_minima(pos):
            for x, y in nonadjacent_pairs(pos):
                iq = induced_quotient(pos, x, y)
                p = iq.path
                seq = [p.p0, *p.path_edges, p.p_last]
                if m.edge not in p.path_edges:
                    continue
                t = seq.index(m.edge)
                wider = [pos.widths[seq[t + d]] > m.width + 1e-9 and not any(
                    pos.is_leaf(n) for n in pos.ends[seq[t + d]]) for d in (-1, 1)]
                if all(wider):
                    b = tilo_widths(iq.quotient.graph, iq.ordering)
                    assert b[t - 1] > b[t] < b[t + 1]
                    checked += 1
    assert checked > 50


def test_minimum_need_not_be_minimum_on_every_path():
    # a path may leave the edge through a narrower neighbour
    for seed in range(40):
        g = random_clustered_graph(8, seed)
        pos = thin(random_position(g, seed))
        for m in local_minima(pos):
            for x, y in nonadjacent_pairs(pos):
                iq = induced_quotient(pos, x, y)
                p = iq.path
                if m.edge in p.path_edges:
                    t = p.path_edges.index(m.edge) + 1
                    b = tilo_widths(iq.quotient.graph, iq.ordering)
                    if b[t - 1] < b[t] or b[t + 1] < b[t]:
                        return
    pytest.fail("every path through every minimum was a local minimum")


@given(st.integers(5, 7), st.integers(0, 10**6))
def test_minimum_cuts_are_pinch_clusters(n, seed):
    g = random_clustered_graph(n, seed)
    res = run_thin(random_position(g, seed))
    for m in local_minima(res.position):
        pair = clusters_from_minimum(res.position, m)
        assert pair.cluster_a | pair.cluster_b == set(range(n))
        for side in (pair.cluster_a, pair.cluster_b):
            assert verify_pinch_cluster(g, side, n - 1) is None
