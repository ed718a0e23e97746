from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from modules.errors import ValidationError
from modules.graph_core import (
    Graph,
    avg_degree,
    complete_graph,
    cycle_graph,
    degrees,
    edge_count,
    edges,
    empty_graph,
    from_networkx,
    induced_subgraph,
    mask_members,
    max_degree,
    neighbours,
    new_graph,
    pair_count,
    path_graph,
    sample_gnm,
    sample_gnp,
    star_graph,
    to_networkx,
    vertex_mask,
)
from modules.rng import uniform_block


def test_new_graph_triangle(k3):
    assert new_graph(3, [(0, 1), (1, 2), (0, 2)]) == k3
    assert edge_count(k3) == 3


def test_new_graph_without_edges():
    G = new_graph(4, [])
    assert G.n == 4
    assert edge_count(G) == 0


def test_duplicate_pairs_collapse():
    G = new_graph(2, [(0, 1), (1, 0)])
    assert edge_count(G) == 1
    assert G.has_edge(1, 0)


@pytest.mark.parametrize("pairs", [[(0, 3)], [(-1, 0)], [(2, 2)]])
def test_new_graph_rejects_bad_edges(pairs):
    with pytest.raises(ValidationError):
        new_graph(3, pairs)


def test_graph_rejects_asymmetric_adjacency():
    adj = np.zeros((3, 3), dtype=bool)
    adj[0, 1] = True
    with pytest.raises(ValidationError):
        Graph(adj)


def test_adjacency_is_read_only(k3):
    with pytest.raises(ValueError):
        k3.adj[0, 1] = False


def test_rows_match_adjacency(petersen):
    for v, row in enumerate(petersen.rows):
        assert mask_members(row) == sorted(neighbours(petersen, v))


def test_named_constructors():
    assert edge_count(complete_graph(6)) == 15
    assert edges(path_graph(4)) == [(0, 1), (1, 2), (2, 3)]
    assert edges(cycle_graph(4)) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert degrees(star_graph(5)).tolist() == [4, 1, 1, 1, 1]
    with pytest.raises(ValidationError):
        cycle_graph(2)


@pytest.mark.parametrize(
    "graph, expected",
    [(complete_graph(3), 2), (empty_graph(5), 0), (star_graph(6), 5), (empty_graph(0), 0)],
)
def test_max_degree(graph, expected):
    assert max_degree(graph) == expected


def test_avg_degree(k3, p3):
    assert avg_degree(k3) == 2
    assert avg_degree(p3) == Fraction(4, 3)
    assert avg_degree(complete_graph(4), {0, 1}) == 1


def test_avg_degree_of_empty_set(k3):
    with pytest.raises(ValidationError):
        avg_degree(k3, set())


def test_induced_subgraph(k3, c5, p3):
    assert induced_subgraph(complete_graph(5), {0, 1, 2}) == k3
    assert induced_subgraph(c5, set()).n == 0
    assert induced_subgraph(c5, {0, 1, 2}) == p3
    # relabelling by increasing original label
    assert edges(induced_subgraph(c5, {0, 2, 4})) == [(0, 2)]


def test_vertex_mask_round_trip():
    assert vertex_mask([0, 3, 5]) == 0b101001
    assert mask_members(0b101001) == [0, 3, 5]


def test_gnp_extremes():
    assert edge_count(sample_gnp(5, 0.0, 1)) == 0
    assert sample_gnp(5, 1.0, 1) == complete_graph(5)


def test_gnp_is_seeded():
    assert sample_gnp(30, 0.3, 11) == sample_gnp(30, 0.3, 11)
    assert sample_gnp(30, 0.3, 11) != sample_gnp(30, 0.3, 12)


def test_gnp_pair_order():
    # pair i in row-major order is an edge iff draw i < p
    draws = uniform_block(5, 0, pair_count(5))
    expected = [pair for pair, u in zip([(a, b) for a in range(5) for b in range(a + 1, 5)], draws) if u < 0.4]
    assert edges(sample_gnp(5, 0.4, 5)) == expected


def test_gnp_edge_count_concentrates():
    m = edge_count(sample_gnp(100, 0.5, 2024))
    sd = (4950 * 0.25) ** 0.5
    assert 2475 - 4 * sd <= m <= 2475 + 4 * sd


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(ValidationError):
        sample_gnp(5, p, 0)


def test_gnm_counts():
    assert edge_count(sample_gnm(4, 0, 3)) == 0
    assert sample_gnm(4, 6, 3) == complete_graph(4)
    assert edge_count(sample_gnm(10, 20, 3)) == 20


def test_gnm_prefixes_are_nested():
    previous = set()
    for m in range(0, 46, 5):
        current = set(edges(sample_gnm(10, m, 77)))
        assert previous <= current
        previous = current


def test_gnm_rejects_too_many_edges():
    with pytest.raises(ValidationError):
        sample_gnm(5, 999, 0)


def test_gnm_is_roughly_uniform():
    # each of the 6 pairs of K4 lies in half of the 3-edge graphs
    hits = np.zeros(6)
    for seed in range(600):
        for u, v in edges(sample_gnm(4, 3, seed)):
            hits[[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].index((u, v))] += 1
    assert np.all(np.abs(hits / 600 - 0.5) < 0.08)


def test_networkx_round_trip(petersen):
    H = to_networkx(petersen)
    assert nx.is_isomorphic(H, nx.petersen_graph())
    assert from_networkx(H) == petersen
    assert set(degrees(petersen).tolist()) == {3}


def test_from_networkx_relabels_sorted():
    H = nx.Graph([(10, 30), (30, 20)])
    assert edges(from_networkx(H)) == [(0, 2), (1, 2)]
