import pytest
from hypothesis import settings

from thintree.generators import barbell, complete_graph, path_graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def bar():
    return barbell()


# barbell vertices interleaved across the two triangles
INTERLEAVED = (0, 3, 1, 4, 2, 5)
