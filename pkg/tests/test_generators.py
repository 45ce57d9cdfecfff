import random

import pytest

from tokenchain.generators import (
    connected_regular_graphs,
    random_dks_host,
    random_regular_graph,
    regular_graphs,
)
from tokenchain.graph_core import complement_is_connected, is_connected, regular_degree

# isomorphism-class counts of d-regular graphs (OEIS A051031 rows)
KNOWN = {
    (8, 3): 6, (8, 4): 6, (9, 4): 16, (10, 3): 21, (10, 4): 60, (7, 2): 2, (10, 2): 5,
}


@pytest.mark.parametrize("n, d", sorted(KNOWN))
def test_class_counts(n, d):
    gs = regular_graphs(n, d)
    assert len(gs) == KNOWN[(n, d)]
    assert all(regular_degree(g) == d for g in gs)


def test_connected_counts():
    # connected regular graphs on n vertices, all degrees (OEIS A005177)
    assert [len(connected_regular_graphs(n)) for n in range(2, 10)] == [1, 1, 2, 2, 5, 4, 17, 22]


def test_random_regular_is_regular_and_seeded():
    g1 = random_regular_graph(12, 3, random.Random(1))
    g2 = random_regular_graph(12, 3, random.Random(1))
    assert g1 == g2 and regular_degree(g1) == 3
    assert regular_degree(random_regular_graph(9, 6, random.Random(2))) == 6


def test_random_regular_rejects_impossible():
    with pytest.raises(ValueError):
        random_regular_graph(7, 3, random.Random(0))


def test_dks_host_hypotheses():
    for seed in range(10):
        g = random_dks_host(8, 3, random.Random(seed))
        assert is_connected(g) and complement_is_connected(g)
