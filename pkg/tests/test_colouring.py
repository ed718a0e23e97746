import itertools
import math
import time

import networkx as nx
import pytest

from modules.colouring import (
    ALPHA_NODE_LIMIT,
    Colouring,
    alpha_t_bruteforce,
    alpha_t_exact,
    alpha_t_search,
    alpha_t_upper_bound,
    bounds_report,
    chi_t_bruteforce,
    chi_t_exact,
    chromatic_number,
    classes,
    degeneracy_order,
    find_k_colouring,
    greedy_dependent_set,
    greedy_peel_colouring,
    is_t_dependent,
    lovasz_bound,
    lovasz_decomposition,
    verify_colouring,
)
from modules.errors import CapExceededError, ValidationError
from modules.graph_core import (
    complete_graph,
    empty_graph,
    max_degree,
    new_graph,
    sample_gnp,
    to_networkx,
)
from modules.rng import mix_seed


def test_colouring_compaction():
    c = Colouring.from_assignment([5, 5, 2, 7, 2])
    assert c.assignment == (0, 0, 1, 2, 1)
    assert c.class_count == 3
    assert classes(c) == [frozenset({0, 1}), frozenset({2, 4}), frozenset({3})]


def test_colouring_rejects_gaps():
    with pytest.raises(ValidationError):
        Colouring((0, 2), 3)


def test_is_t_dependent(k3, c5):
    assert not is_t_dependent(k3, None, 1)
    assert is_t_dependent(k3, None, 2)
    assert is_t_dependent(c5, set(), 0)
    assert not is_t_dependent(c5, {0, 1, 2}, 1)
    assert is_t_dependent(c5, {0, 1, 2}, 2)


def test_is_t_dependent_rejects_bad_t(k3):
    with pytest.raises(ValidationError):
        is_t_dependent(k3, None, -1)


def test_verify_colouring(k3, petersen):
    assert not verify_colouring(k3, 1, Colouring((0, 0, 0), 1))
    assert verify_colouring(k3, 2, Colouring((0, 0, 0), 1))
    singletons = Colouring(tuple(range(10)), 10)
    assert verify_colouring(petersen, 0, singletons)
    assert not verify_colouring(petersen, 0, Colouring((0, 1), 2))


def test_degeneracy_order_is_a_permutation(petersen):
    order = degeneracy_order(petersen)
    assert sorted(order) == list(range(10))
    star = new_graph(5, [(0, i) for i in range(1, 5)])
    # leaves go first, the centre last
    assert degeneracy_order(star)[:3] == [1, 2, 3]


@pytest.mark.parametrize("n, t", [(3, 1), (5, 0), (5, 2), (6, 7), (1, 0)])
def test_alpha_of_cliques(n, t):
    size, witness = alpha_t_exact(complete_graph(n), t)
    assert size == min(n, t + 1)
    assert len(witness) == size


def test_alpha_of_small_graphs(c5, petersen):
    assert alpha_t_exact(c5, 0)[0] == 2
    size, witness = alpha_t_exact(c5, 1)
    assert size == 3
    assert is_t_dependent(c5, witness, 1)
    assert alpha_t_exact(petersen, 0)[0] == 4
    assert alpha_t_exact(empty_graph(0), 3) == (0, frozenset())


@pytest.mark.parametrize("method", ["exhaustive", "branch_and_bound"])
def test_alpha_methods_agree(exact_corpus, method):
    for G in exact_corpus[:30]:
        for t in (0, 1, 2, 3):
            size, witness = alpha_t_exact(G, t, method=method)
            assert len(witness) == size
            assert is_t_dependent(G, witness, t)
            assert size == alpha_t_exact(G, t)[0]


def test_alpha_matches_brute_force(small_corpus):
    for G in small_corpus:
        for t in (0, 1, 2):
            expected = alpha_t_bruteforce(G, t)[0]
            assert alpha_t_exact(G, t)[0] == expected
            assert alpha_t_exact(G, t, method="branch_and_bound")[0] == expected


def test_alpha_upper_bound(exact_corpus):
    for G in exact_corpus[:30]:
        for t in (0, 2):
            assert alpha_t_upper_bound(G, t) >= alpha_t_exact(G, t)[0]


def test_alpha_branch_and_bound_larger():
    G = sample_gnp(45, 0.5, 9)
    size, witness = alpha_t_exact(G, 0)
    assert is_t_dependent(G, witness, 0)
    assert size == max(len(c) for c in nx.find_cliques(nx.complement(to_networkx(G))))


def test_alpha_caps():
    with pytest.raises(CapExceededError):
        alpha_t_exact(empty_graph(81), 0)
    with pytest.raises(ValidationError):
        alpha_t_exact(empty_graph(3), 0, method="magic")


def test_alpha_node_limit_is_reported():
    G = sample_gnp(50, 0.5, mix_seed(606, 1))
    with pytest.raises(CapExceededError, match="search nodes"):
        alpha_t_exact(G, 2, node_limit=1)
    result = alpha_t_search(G, 2, node_limit=1)
    assert not result.exact
    assert result.size == len(result.witness) >= len(greedy_dependent_set(G, None, 2))
    assert is_t_dependent(G, result.witness, 2)


def test_alpha_search_agrees_with_exact_when_budget_suffices(exact_corpus):
    for G in exact_corpus[:20]:
        for t in (0, 2):
            result = alpha_t_search(G, t)
            assert result.exact
            assert result.size == alpha_t_exact(G, t)[0]


def test_alpha_search_above_cap_is_greedy():
    G = sample_gnp(90, 0.3, 4)
    result = alpha_t_search(G, 1)
    assert not result.exact
    assert is_t_dependent(G, result.witness, 1)
    assert alpha_t_search(empty_graph(0), 1).exact


@pytest.mark.parametrize("t", [2, 4])
def test_alpha_search_dense_sixty_is_bounded(t):
    G = sample_gnp(60, 0.5, mix_seed(606, 0))
    start = time.perf_counter()
    result = alpha_t_search(G, t, node_limit=5_000)
    assert time.perf_counter() - start < 30
    assert result.nodes <= 5_001
    assert is_t_dependent(G, result.witness, t)
    assert len(greedy_dependent_set(G, None, t)) <= result.size <= alpha_t_upper_bound(G, t)


@pytest.mark.slow
def test_bounds_report_dense_sixty_finishes():
    G = sample_gnp(60, 0.5, mix_seed(606, 0))
    start = time.perf_counter()
    report = bounds_report(G, 4)
    assert time.perf_counter() - start < 120
    assert report.lower() <= report.upper()
    if not report.alpha_exact:
        assert report.alpha_t == alpha_t_upper_bound(G, 4)
    result = alpha_t_search(G, 4)
    assert result.nodes <= ALPHA_NODE_LIMIT + 1


def test_chi_examples(k5, petersen):
    count, colouring = chi_t_exact(k5, 1)
    assert count == 3
    assert verify_colouring(k5, 1, colouring)
    assert chi_t_exact(petersen, 0)[0] == 3
    assert chi_t_exact(empty_graph(4), 0)[0] == 1
    assert chi_t_exact(empty_graph(0), 0)[0] == 0


def test_chi_is_one_above_max_degree(exact_corpus):
    for G in exact_corpus[:10]:
        assert chi_t_exact(G, max_degree(G))[0] == 1


def test_chi_cap():
    with pytest.raises(CapExceededError, match="greedy"):
        chi_t_exact(empty_graph(25), 0)


def test_find_k_colouring(c5):
    assert find_k_colouring(c5, 0, 2) is None
    found = find_k_colouring(c5, 0, 3)
    assert found is not None and verify_colouring(c5, 0, found)
    with pytest.raises(ValidationError):
        find_k_colouring(c5, 0, 0)


def _check_sandwich(G, t):
    chi_t = chi_t_exact(G, t)[0]
    chi = chromatic_number(G)
    alpha = alpha_t_exact(G, t)[0]
    assert math.ceil(chi / (t + 1)) <= chi_t <= min(lovasz_bound(G, t), chi)
    assert chi_t >= math.ceil(G.n / alpha)
    # the heuristics only ever overshoot
    assert greedy_peel_colouring(G, t).class_count >= chi_t
    assert lovasz_decomposition(G, t).class_count >= chi_t
    return chi_t


def _check_corpus(graphs):
    for G in graphs:
        values = []
        for t in (0, 1, 2):
            chi_t = _check_sandwich(G, t)
            assert chi_t == chi_t_bruteforce(G, t)
            values.append(chi_t)
        # more slack never needs more classes
        assert values == sorted(values, reverse=True)


def test_chi_matches_brute_force(small_corpus):
    _check_corpus(small_corpus)


@pytest.mark.slow
def test_chi_matches_brute_force_full():
    _check_corpus([sample_gnp(1 + i % 8, 0.5, mix_seed(4242, i)) for i in range(200)])


@pytest.mark.slow
def test_alpha_on_every_six_vertex_graph():
    pairs = list(itertools.combinations(range(6), 2))
    for mask in range(1 << len(pairs)):
        G = new_graph(6, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        for t in (0, 1, 2):
            assert alpha_t_exact(G, t)[0] == alpha_t_bruteforce(G, t)[0]


def test_brute_force_limits():
    with pytest.raises(CapExceededError):
        alpha_t_bruteforce(empty_graph(21), 0)
    with pytest.raises(CapExceededError):
        chi_t_bruteforce(empty_graph(11), 0)


def test_greedy_dependent_set(k3):
    assert greedy_dependent_set(empty_graph(6), {1, 2, 4}, 0) == frozenset({1, 2, 4})
    assert len(greedy_dependent_set(complete_graph(4), None, 1)) == 2
    assert len(greedy_dependent_set(empty_graph(6), None, 0, target=3)) == 3
    with pytest.raises(ValidationError):
        greedy_dependent_set(k3, set(), 0)


def test_greedy_dependent_set_is_maximal(medium_corpus):
    for G in medium_corpus[:30]:
        for t in (0, 1, 3):
            chosen = greedy_dependent_set(G, None, t)
            assert is_t_dependent(G, chosen, t)
            for v in set(range(G.n)) - chosen:
                assert not is_t_dependent(G, chosen | {v}, t)


def test_greedy_peel_colouring(k5, empty7, medium_corpus):
    assert greedy_peel_colouring(empty7, 0).class_count == 1
    assert greedy_peel_colouring(k5, 1).class_count == 3
    for G in medium_corpus[:30]:
        for t in (0, 2):
            assert verify_colouring(G, t, greedy_peel_colouring(G, t))


def test_lovasz_examples(star10):
    colouring = lovasz_decomposition(complete_graph(6), 1)
    assert colouring.class_count == 3
    assert all(len(c) == 2 for c in colouring.classes())
    star = lovasz_decomposition(star10, 0)
    assert star.class_count <= 10
    assert verify_colouring(star10, 0, star)
    assert chi_t_exact(star10, 0)[0] == 2
    assert lovasz_decomposition(empty_graph(0), 2).class_count == 0


def test_lovasz_property_sweep(medium_corpus):
    for G in medium_corpus:
        for t in (0, 1, 3):
            colouring, moves = lovasz_decomposition(G, t, return_moves=True)
            assert colouring.class_count <= lovasz_bound(G, t)
            assert verify_colouring(G, t, colouring)
            assert 0 <= moves <= G.n * max_degree(G)


def test_greedy_never_beats_exact(exact_corpus):
    for G in exact_corpus[:20]:
        for t in (0, 1, 3):
            report = bounds_report(G, t)
            if report.chi_t is not None:
                assert report.chi_upper_greedy >= report.chi_t
                assert report.chi_upper_lovasz >= report.chi_t


def test_bounds_report_clique():
    report = bounds_report(complete_graph(6), 1)
    assert report.chi_lower_ratio == 3
    assert report.chi_lower_proper == 3
    assert report.chi_upper_lovasz == 3
    assert report.chi_upper_proper == 6
    assert report.lower() == report.upper() == report.chi_t == 3


@pytest.mark.parametrize("t", [0, 2])
def test_bounds_report_empty_graph(t):
    report = bounds_report(empty_graph(5), t)
    assert report.lower() == report.upper() == report.chi_t == 1


def test_bounds_report_cycle(c5):
    report = bounds_report(c5, 1)
    assert report.alpha_t == 3
    assert report.chi_lower_ratio == 2
    assert report.chi_t == 2


def test_bounds_report_large_graph():
    G = sample_gnp(120, 0.5, 3)
    report = bounds_report(G, 2)
    assert not report.alpha_exact
    assert report.chi_t is None
    assert report.lower() <= report.upper()
    assert report.to_dict()["upper"] == report.upper()


def test_bounds_are_consistent(exact_corpus):
    for G in [G for G in exact_corpus if G.n <= 16][:12]:
        report = bounds_report(G, 1)
        assert report.lower() <= report.upper()
        if report.chi_t is not None:
            assert report.lower() <= report.chi_t <= report.upper()
