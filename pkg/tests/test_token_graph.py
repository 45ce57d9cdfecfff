from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest

from tokenchain.errors import HypothesisError, SizeError
from tokenchain.graph_core import (
    Graph,
    complete_graph,
    cycle_graph,
    induced_edge_count,
    path_graph,
    regular_degree,
)
from tokenchain.token_graph import (
    LAZY,
    NON_LAZY,
    UNRESOLVED,
    build_token_graph,
    classical_transition_matrix,
    export_edge_list,
    export_vertex_table,
    laziness_and_regime,
    power_iteration,
    stationary_distribution,
    structural_constants,
    transition_matrix,
    vertex_connectivity,
)

from conftest import brute_token_edges


def dense_oracle(g, k):
    """Loop-walk matrix and its stationary vector from first principles."""
    subsets = list(combinations(range(g.n), k))
    idx = {s: i for i, s in enumerate(subsets)}
    p = np.zeros((len(subsets), len(subsets)))
    for s in subsets:
        moves = []
        for v in s:
            for w in range(g.n):
                if w not in s and g.has_edge(v, w):
                    moves.append(tuple(sorted(set(s) - {v} | {w})))
        denom = len(moves) + k
        p[idx[s], idx[s]] = k / denom
        for t in moves:
            p[idx[s], idx[t]] += 1 / denom
    vals, vecs = np.linalg.eig(p.T)
    v = np.real(vecs[:, np.argmin(np.abs(vals - 1))])
    return p, v / v.sum()


def test_k1_token_graph_is_host(fig1):
    tg = build_token_graph(fig1, 1)
    assert tg.vertices == tuple((v,) for v in range(6))
    assert {(a, b) for a, b in tg.edges()} == fig1.edges


@pytest.mark.parametrize("which, edges", [("fig1", 36), ("hexagon", 24)])
def test_token_graph_sizes(request, which, edges):
    g = request.getfixturevalue(which)
    tg = build_token_graph(g, 2)
    assert tg.size == 15
    assert tg.edge_count == edges
    oracle = brute_token_edges(g, 2)
    assert len(oracle) == edges
    mine = {(frozenset(tg.vertices[i]), frozenset(tg.vertices[j])) for i, j in tg.edges()}
    assert {frozenset(e) for e in mine} == {frozenset(e) for e in oracle}


def test_adjacency_symmetric(fig1):
    tg = build_token_graph(fig1, 3)
    for i, nb in enumerate(tg.adjacency):
        for j in nb:
            assert i in tg.adjacency[j]


def test_build_refuses_over_cap(fig1):
    with pytest.raises(SizeError, match="sampler"):
        build_token_graph(fig1, 3, cap=19)


def test_build_refuses_disconnected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(HypothesisError):
        build_token_graph(g, 2)


def test_build_rejects_bad_k(fig1):
    with pytest.raises(ValueError):
        build_token_graph(fig1, 6)


def test_structural_constants_fig1(fig1):
    c = structural_constants(fig1, 2)
    assert c.edge_count == c.edge_count_formula == 36
    assert c.avg_degree_ratio == Fraction(3, 5)
    assert c.min_deg_k == c.connectivity_claim == 4
    assert c.exact


def test_structural_constants_hexagon(hexagon):
    c = structural_constants(hexagon, 2)
    assert c.edge_count == c.edge_count_formula == 24
    assert c.avg_degree_ratio == Fraction(2, 5)


@pytest.mark.parametrize("n, k", [(5, 2), (6, 3), (7, 1)])
def test_structural_constants_complete(n, k):
    c = structural_constants(complete_graph(n), k)
    assert c.min_deg_k == c.max_deg_k == c.avg_degree == k * (n - k)


def test_structural_constants_beyond_cap_falls_back_to_bounds(fig1):
    c = structural_constants(fig1, 3, cap=5)
    assert not c.exact
    assert c.min_deg_k is None and c.edge_count is None
    assert c.edge_count_formula == Fraction(3 * 3 * 20 * 3, 2 * 5)
    assert c.min_deg_k_lower_bound == 3 and c.max_deg_k_upper_bound == 9


def test_structural_constants_non_regular_refuses_formula():
    c = structural_constants(path_graph(4), 2)
    assert c.edge_count_formula is None
    assert c.edge_count == len(brute_token_edges(path_graph(4), 2))


def test_transition_row_on_edge(fig1):
    tg = build_token_graph(fig1, 2)
    tm = transition_matrix(tg)
    i = tg.index[(0, 1)]
    row = tm.row(i)
    assert row.pop(i) == Fraction(2, 6)
    assert len(row) == 4 and set(row.values()) == {Fraction(1, 6)}


def test_transition_k2_complete_two_vertices():
    tg = build_token_graph(complete_graph(2), 1)
    tm = transition_matrix(tg)
    assert tm.entry(0, 0) == tm.entry(0, 1) == Fraction(1, 2)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_rows_sum_to_one(fig1, k):
    tm = transition_matrix(build_token_graph(fig1, k))
    assert all(tm.row_sum(i) == 1 for i in range(tm.dimension))
    assert np.allclose(tm.to_sparse().sum(axis=1), 1.0, atol=1e-12)


def test_matrix_matches_dense_oracle(fig1):
    for k in range(1, 6):
        tm = transition_matrix(build_token_graph(fig1, k))
        p, _ = dense_oracle(fig1, k)
        assert np.allclose(tm.to_dense(), p, atol=1e-15)


def test_stationary_fig1(fig1):
    tg = build_token_graph(fig1, 2)
    pi = stationary_distribution(tg)
    assert pi.normalizer == 102
    for s in tg.vertices:
        expected = Fraction(1, 17) if fig1.has_edge(*s) else Fraction(4, 51)
        assert pi[s] == expected
    _, oracle = dense_oracle(fig1, 2)
    assert np.allclose(pi.weights, oracle, atol=1e-12)
    assert np.allclose(power_iteration(transition_matrix(tg)), pi.weights, atol=1e-12)


def test_stationary_hexagon(hexagon):
    tg = build_token_graph(hexagon, 2)
    pi = stationary_distribution(tg)
    assert pi.normalizer == 78
    for s in tg.vertices:
        expected = Fraction(4, 78) if hexagon.has_edge(*s) else Fraction(1, 13)
        assert pi[s] == expected


@pytest.mark.parametrize("n, k", [(5, 2), (6, 3)])
def test_stationary_complete_uniform(n, k):
    pi = stationary_distribution(build_token_graph(complete_graph(n), k))
    assert set(pi.exact) == {Fraction(1, comb(n, k))}


def test_laziness_fig1(fig1):
    r = laziness_and_regime(fig1, 2)
    assert r.min_avg_induced_degree == 0
    assert not r.is_lazy and r.regime == NON_LAZY
    assert r.gamma == Fraction(1, 4)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_laziness_complete_top_k(n):
    r = laziness_and_regime(complete_graph(n), n - 1)
    assert r.min_avg_induced_degree == n - 2
    assert r.is_lazy and r.regime == LAZY


def test_laziness_hexagon(hexagon):
    r = laziness_and_regime(hexagon, 2)
    assert r.min_avg_induced_degree == 0 and not r.is_lazy


def test_laziness_refuses_non_regular():
    with pytest.raises(HypothesisError) as info:
        laziness_and_regime(path_graph(4), 2)
    assert info.value.hypothesis == "regularity"


def test_laziness_above_cap_certifies_non_lazy_or_unresolved():
    ring = cycle_graph(30)
    r = laziness_and_regime(ring, 15, cap=1000)
    assert r.regime == NON_LAZY and not r.exact
    assert induced_edge_count(ring, r.certificate) * 2 / 15 < 1
    full = laziness_and_regime(complete_graph(30), 29, cap=10)
    assert full.regime == UNRESOLVED and full.is_lazy is None


def test_invariants_small_regular(regular_upto_8):
    for g in regular_upto_8:
        d = regular_degree(g)
        n = g.n
        for k in range(1, n):
            tg = build_token_graph(g, k)
            degs = tg.degrees
            for s, dk in zip(tg.vertices, degs):
                assert dk == k * d - 2 * induced_edge_count(g, s)
            assert Fraction(sum(degs), tg.size * k * (n - k)) == Fraction(d, n - 1)
            if tg.size <= 2000:
                tm = transition_matrix(tg)
                pi = stationary_distribution(tg)
                flux = tm.to_sparse().multiply(pi.weights[:, None]).toarray()
                assert np.max(np.abs(flux - flux.T)) <= 1e-12
                assert np.max(np.abs(pi.weights @ tm.to_dense() - pi.weights)) <= 1e-12


def test_ranking_property(regular_upto_8):
    for g in regular_upto_8[:30]:
        for k in range(1, g.n):
            tg = build_token_graph(g, k)
            pi = stationary_distribution(tg)
            edges = [induced_edge_count(g, s) for s in tg.vertices]
            for i in range(tg.size):
                for j in range(tg.size):
                    if pi.exact[i] > pi.exact[j]:
                        assert edges[i] < edges[j]


def test_connectivity_small():
    for g in [cycle_graph(5), complete_graph(4), Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])]:
        for k in range(1, min(g.n, 4)):
            tg = build_token_graph(g, k)
            assert vertex_connectivity(tg) == min(tg.degrees)


SEPARABLE_QUARTIC = [(0, 1), (0, 2), (0, 3), (0, 5), (1, 4), (1, 5), (1, 6),
                     (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6), (4, 6)]


def test_connectivity_below_min_degree():
    # 4-regular on 7 vertices with a 3-vertex cut: at k = 1 the token graph is
    # the host itself, so connectivity can fall short of the minimum degree
    g = Graph.from_edges(7, SEPARABLE_QUARTIC)
    assert regular_degree(g) == 4
    tg = build_token_graph(g, 1)
    assert vertex_connectivity(tg) == 3 < min(tg.degrees)
    for k in (2, 3):
        tg = build_token_graph(g, k)
        assert vertex_connectivity(tg) == min(tg.degrees)


def test_classical_matrix_doubly_stochastic(fig1):
    tg = build_token_graph(fig1, 3)
    ctm = classical_transition_matrix(tg)
    dense = ctm.to_dense()
    assert np.allclose(dense.sum(axis=0), 1) and np.allclose(dense.sum(axis=1), 1)
    assert np.allclose(dense, dense.T)


def test_export(fig1):
    tg = build_token_graph(fig1, 2)
    lines = export_edge_list(tg).splitlines()
    assert len(lines) == 36
    table = export_vertex_table(tg).splitlines()
    assert table[1] == "0\t0 1" and len(table) == 16
