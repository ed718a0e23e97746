import networkx as nx
import pytest

from modules.graph_core import (
    complete_graph,
    cycle_graph,
    empty_graph,
    from_networkx,
    path_graph,
    sample_gnp,
    star_graph,
)
from modules.rng import mix_seed

CORPUS_SEED = 20240611


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def star10():
    return star_graph(10)


@pytest.fixture
def empty7():
    return empty_graph(7)


@pytest.fixture
def petersen():
    return from_networkx(nx.petersen_graph())


@pytest.fixture(scope="session")
def small_corpus():
    """Seeded G(n, 1/2) samples with 1 <= n <= 8."""
    graphs = []
    for i in range(60):
        n = 1 + i % 8
        graphs.append(sample_gnp(n, 0.5, mix_seed(CORPUS_SEED, i)))
    return graphs


@pytest.fixture(scope="session")
def medium_corpus():
    """Seeded G(n, p) samples with 10 <= n <= 40 and mixed densities."""
    graphs = []
    for i in range(120):
        n = 10 + (i * 7) % 31
        p = (0.1, 0.3, 0.5, 0.7)[i % 4]
        graphs.append(sample_gnp(n, p, mix_seed(CORPUS_SEED + 1, i)))
    return graphs


@pytest.fixture(scope="session")
def exact_corpus(medium_corpus):
    """The part of medium_corpus small enough for the exact solvers."""
    return [G for G in medium_corpus if G.n <= 24]
