import pytest

from thintree.generators import barbell, complete_graph, gen_planted, random_clustered_graph
from thintree.graph_core import cut_weight


def test_barbell_fixture():
    g = barbell()
    assert g.vertex_count == 6
    assert g.edges == ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0))


def test_planted_extremes():
    g = gen_planted(3, [3, 3], 1.0, 0.0)
    assert cut_weight(g, 0b000111) == 0
    assert gen_planted(3, [2, 3], 1.0, 1.0, w=2.0).edges == complete_graph(5, 2.0).edges


def test_planted_deterministic():
    a = gen_planted(11, [4, 4, 3], 0.7, 0.2)
    assert a == gen_planted(11, [4, 4, 3], 0.7, 0.2)
    assert any(gen_planted(s, [4, 4, 3], 0.7, 0.2) != a for s in range(12, 20))


@pytest.mark.parametrize("args", [([0, 3], 0.5, 0.5), ([3], 1.5, 0.0), ([3], 0.5, -0.1)])
def test_planted_rejects(args):
    with pytest.raises(ValueError):
        gen_planted(0, *args)


def test_clustered_graph_is_deterministic():
    assert random_clustered_graph(7, 4) == random_clustered_graph(7, 4)
