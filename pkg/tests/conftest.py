import random

import pytest

from tokenchain.generators import connected_regular_graphs, fig1_graph, random_dks_host
from tokenchain.graph_core import complement, cycle_graph

FIG1_TEXT = "0 3\n0 4\n1 3\n2 5\n2 4\n0 1\n1 2\n3 5\n4 5\n"


@pytest.fixture
def fig1():
    return fig1_graph()


@pytest.fixture
def hexagon(fig1):
    """Complement of the example graph: the 6-cycle 0-2-3-4-1-5-0."""
    return complement(fig1)


@pytest.fixture(scope="session")
def regular_upto_8():
    return [g for n in range(2, 9) for g in connected_regular_graphs(n)]


@pytest.fixture(scope="session")
def regular_upto_10(regular_upto_8):
    return regular_upto_8 + [g for n in (9, 10) for g in connected_regular_graphs(n)]


@pytest.fixture(scope="session")
def random_cubic_hosts():
    """20 seeded 3-regular hosts, ten each on 6 and 8 vertices."""
    out = []
    for i in range(20):
        n = 6 if i < 10 else 8
        out.append(random_dks_host(n, 3, random.Random(500 + i)))
    return out


def brute_token_edges(g, k):
    """Token-graph edges by testing every pair of k-subsets directly."""
    from itertools import combinations

    subsets = [frozenset(s) for s in combinations(range(g.n), k)]
    edges = set()
    for a, b in combinations(subsets, 2):
        diff = a ^ b
        if len(diff) == 2 and g.has_edge(*sorted(diff)):
            edges.add((a, b))
    return edges


__all__ = ["FIG1_TEXT", "brute_token_edges", "cycle_graph", "record"]


ACCEPTANCE_RESULTS = []


def record(criterion, passed, detail=""):
    ACCEPTANCE_RESULTS.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
