"""Regular host graphs: seeded random draws and exhaustive enumeration."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

import networkx as nx

from .graph_core import Graph, complement, complement_is_connected, is_connected


def random_regular_graph(n: int, d: int, rng: random.Random, max_tries: int = 100_000) -> Graph:
    """Uniform d-regular simple graph via the pairing model with rejection.

    Stubs are shuffled and paired; any pairing with a loop or a repeated
    edge is discarded and redrawn. Dense degrees are drawn as the complement
    of a sparse draw, which keeps the law uniform.
    """
    if (n * d) % 2 or not 0 <= d < n:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    if 2 * d > n - 1:
        return complement(random_regular_graph(n, n - 1 - d, rng, max_tries))
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(max_tries):
        rng.shuffle(stubs)
        edges = set()
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (a, b) if a < b else (b, a)
            if a == b or e in edges:
                break
            edges.add(e)
        else:
            return Graph.from_edges(n, edges)
    raise RuntimeError("pairing model failed to produce a simple graph")


def random_dks_host(n: int, d: int, rng: random.Random) -> Graph:
    """Random d-regular graph with the graph and its complement both connected."""
    while True:
        g = random_regular_graph(n, d, rng)
        if is_connected(g) and complement_is_connected(g):
            return g


def _circulant(n: int, d: int) -> Graph:
    edges = set()
    for i in range(n):
        for s in range(1, d // 2 + 1):
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
        if d % 2:
            j = (i + n // 2) % n
            edges.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, edges)


def _signatures(rows: tuple) -> list:
    n = len(rows)
    sig = []
    for v in range(n):
        common = sorted((rows[v] & rows[u]).bit_count() for u in range(n) if u != v)
        tri = sum((rows[v] & rows[u]).bit_count() for u in range(n) if rows[v] >> u & 1) // 2
        sig.append((tri, tuple(common)))
    return sig


def _rows(g: Graph) -> tuple:
    return tuple(sum(1 << w for w in a) for a in g.adjacency)


def _switches(rows: tuple):
    n = len(rows)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rows[u] >> v & 1]
    for (a, b), (c, d) in combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        for x, y, z, w in ((a, c, b, d), (a, d, b, c)):
            # replace ab, cd by xy, zw
            if rows[x] >> y & 1 or rows[z] >> w & 1:
                continue
            new = list(rows)
            for p, q in ((a, b), (c, d)):
                new[p] &= ~(1 << q)
                new[q] &= ~(1 << p)
            for p, q in ((x, y), (z, w)):
                new[p] |= 1 << q
                new[q] |= 1 << p
            yield tuple(new)


def _from_rows(rows: tuple) -> Graph:
    n = len(rows)
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n) if rows[u] >> v & 1))


@lru_cache(maxsize=None)
def regular_graphs(n: int, d: int) -> tuple:
    """One representative per isomorphism class of d-regular graphs on n vertices.

    Any two d-regular graphs on the same vertex set are joined by a sequence
    of double-edge switches, so a breadth-first search over switches from a
    circulant seed reaches every class. Classes are told apart by a cheap
    invariant and then VF2 isomorphism inside each bucket.
    """
    if (n * d) % 2 or not 0 <= d < n:
        return ()
    if 2 * d > n - 1:
        return tuple(complement(h) for h in regular_graphs(n, n - 1 - d))
    buckets: dict = {}
    found = []

    def admit(rows: tuple) -> bool:
        sig = _signatures(rows)
        h = nx.Graph([(u, v) for u in range(n) for v in range(u + 1, n) if rows[u] >> v & 1])
        h.add_nodes_from(range(n))
        nx.set_node_attributes(h, dict(enumerate(sig)), "sig")
        bucket = buckets.setdefault(tuple(sorted(sig)), [])
        if any(nx.vf2pp_is_isomorphic(h, other, node_label="sig") for other in bucket):
            return False
        bucket.append(h)
        found.append(rows)
        return True

    start = _rows(_circulant(n, d))
    admit(start)
    frontier = [start]
    while frontier:
        nxt = []
        for rows in frontier:
            for s in _switches(rows):
                if admit(s):
                    nxt.append(s)
        frontier = nxt
    return tuple(_from_rows(r) for r in found)


def connected_regular_graphs(n: int) -> list:
    """All connected regular graphs on n vertices, up to isomorphism, any degree."""
    return [g for d in range(1, n) for g in regular_graphs(n, d) if is_connected(g)]


def fig1_graph() -> Graph:
    """3-regular example graph on 6 vertices containing the triangles 013 and 245."""
    return Graph.from_edges(6, [(0, 3), (0, 4), (1, 3), (2, 5), (2, 4),
                                (0, 1), (1, 2), (3, 5), (4, 5)])
