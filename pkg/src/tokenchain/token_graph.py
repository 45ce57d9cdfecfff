"""Explicit token graphs, their loop-augmented walk and closed-form constants.

Everything here builds the full state space (all k-subsets) and is meant for
desk-scale verification. Large instances go through :mod:`tokenchain.sampler`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np
from scipy import sparse

from .combinatorics import iter_subsets
from .errors import HypothesisError, SizeError
from .graph_core import Graph, induced_edge_count, is_connected, regular_degree

TOKEN_VERTEX_CAP = 10**6
DENSE_CAP = 10**4

NON_LAZY = "non_lazy_branch"
LAZY = "lazy_branch"
UNRESOLVED = "unresolved"


@dataclass(frozen=True, eq=False)
class TokenGraph:
    """The k-token graph of ``base``.

    ``vertices[i]`` is the i-th k-subset in lexicographic order and
    ``adjacency[i]`` the sorted indices of the subsets reachable by sliding
    one token along an edge of ``base``.
    """

    base: Graph
    k: int
    vertices: tuple
    adjacency: tuple
    index: dict

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self):
        for i, nb in enumerate(self.adjacency):
            for j in nb:
                if i < j:
                    yield i, j

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(self.size))
        h.add_edges_from(self.edges())
        return h


def _check_k(g: Graph, k: int):
    if not 1 <= k <= g.n - 1:
        raise ValueError(f"k must lie in 1..{g.n - 1}, got {k}")


def build_token_graph(g: Graph, k: int, cap: int = TOKEN_VERTEX_CAP) -> TokenGraph:
    _check_k(g, k)
    size = comb(g.n, k)
    if size > cap:
        raise SizeError(
            f"C({g.n},{k}) = {size} token vertices exceeds cap {cap}; "
            "use the sampler instead of the explicit token graph"
        )
    if not is_connected(g):
        raise HypothesisError("connectivity of L", "host graph is not connected")

    vertices = tuple(iter_subsets(g.n, k))
    index = {s: i for i, s in enumerate(vertices)}
    adj = g.adjacency
    adjacency = []
    for s in vertices:
        inside = set(s)
        nb = []
        for v in s:
            rest = inside - {v}
            for w in adj[v]:
                if w not in inside:
                    nb.append(index[tuple(sorted(rest | {w}))])
        nb.sort()
        adjacency.append(tuple(nb))
    return TokenGraph(g, k, vertices, tuple(adjacency), index)


def token_degree(g: Graph, members) -> int:
    """deg_k of one subset: the number of host edges leaving it."""
    return sum(g.degree(v) for v in members) - 2 * induced_edge_count(g, members)


@dataclass(frozen=True)
class StructuralConstants:
    """Enumerated and closed-form constants of a token graph.

    ``connectivity_claim`` is the minimum token degree, the value the vertex
    connectivity is claimed to equal. It is not computed by max-flow here and
    can overstate it (e.g. at k = 1 for hosts with a small vertex cut).
    """

    vertex_count: int
    edge_count: Optional[int]
    edge_count_formula: Optional[Fraction]
    avg_degree: Optional[Fraction]
    avg_degree_ratio: Optional[Fraction]
    min_deg_k: Optional[int]
    max_deg_k: Optional[int]
    min_deg_k_lower_bound: Optional[int]
    max_deg_k_upper_bound: int
    connectivity_claim: Optional[int]
    exact: bool

    def as_dict(self) -> dict:
        def conv(x):
            return str(x) if isinstance(x, Fraction) else x

        return {k: conv(v) for k, v in self.__dict__.items()}


def edge_count_formula(n: int, d: int, k: int) -> Fraction:
    """Closed-form token-graph edge count of a d-regular host."""
    return Fraction(k * (n - k) * comb(n, k) * d, 2 * (n - 1))


def structural_constants(g: Graph, k: int, cap: int = TOKEN_VERTEX_CAP) -> StructuralConstants:
    """Token-graph size constants.

    Degree extremes and the enumerated edge count are computed by walking all
    k-subsets when ``C(n, k) <= cap``; otherwise only the closed forms and the
    crude degree bounds are filled in. Closed forms that assume regularity
    are left as ``None`` for non-regular hosts.
    """
    _check_k(g, k)
    n = g.n
    size = comb(n, k)
    d = regular_degree(g)
    formula = edge_count_formula(n, d, k) if d is not None else None

    min_deg = max_deg = None
    total = None
    if size <= cap:
        degs = [token_degree(g, s) for s in iter_subsets(n, k)]
        min_deg, max_deg, total = min(degs), max(degs), sum(degs)

    if total is not None:
        edge_count = total // 2
        avg = Fraction(total, size)
    else:
        edge_count = None
        avg = Fraction(2) * formula / size if formula is not None else None
    ratio = avg / (k * (n - k)) if avg is not None else None
    return StructuralConstants(
        vertex_count=size,
        edge_count=edge_count,
        edge_count_formula=formula,
        avg_degree=avg,
        avg_degree_ratio=ratio,
        min_deg_k=min_deg,
        max_deg_k=max_deg,
        min_deg_k_lower_bound=d,
        max_deg_k_upper_bound=k * (n - k),
        connectivity_claim=min_deg,
        exact=total is not None,
    )


class TransitionMatrix:
    """Sparse row-stochastic matrix over the vertices of a token graph.

    Every row has a single off-diagonal value shared by all token-graph
    neighbours and a diagonal value; both are kept as exact fractions.
    """

    def __init__(self, tg: TokenGraph, off: list, diag: list):
        self.token_graph = tg
        self.off = off
        self.diag = diag
        self._csr = None

    @property
    def dimension(self) -> int:
        return self.token_graph.size

    def entry(self, i: int, j: int) -> Fraction:
        if i == j:
            return self.diag[i]
        if j in self.token_graph.adjacency[i]:
            return self.off[i]
        return Fraction(0)

    def row(self, i: int) -> dict:
        out = {i: self.diag[i]}
        for j in self.token_graph.adjacency[i]:
            out[j] = self.off[i]
        return out

    def row_sum(self, i: int) -> Fraction:
        return self.diag[i] + self.off[i] * len(self.token_graph.adjacency[i])

    def to_sparse(self) -> sparse.csr_matrix:
        if self._csr is None:
            tg = self.token_graph
            rows, cols, vals = [], [], []
            for i, nb in enumerate(tg.adjacency):
                rows.append(i)
                cols.append(i)
                vals.append(float(self.diag[i]))
                o = float(self.off[i])
                rows.extend([i] * len(nb))
                cols.extend(nb)
                vals.extend([o] * len(nb))
            n = tg.size
            self._csr = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
        return self._csr

    def to_dense(self, cap: int = DENSE_CAP) -> np.ndarray:
        if self.dimension > cap:
            raise SizeError(f"dense matrix of dimension {self.dimension} exceeds cap {cap}")
        return self.to_sparse().toarray()


def transition_matrix(tg: TokenGraph) -> TransitionMatrix:
    """Loop-augmented walk: each neighbour w.p. 1/(deg+k), stay w.p. k/(deg+k)."""
    k = tg.k
    off, diag = [], []
    for nb in tg.adjacency:
        denom = len(nb) + k
        off.append(Fraction(1, denom))
        diag.append(Fraction(k, denom))
    return TransitionMatrix(tg, off, diag)


def classical_transition_matrix(tg: TokenGraph) -> TransitionMatrix:
    """Classical exclusion walk: one of the sum-of-degrees arrows uniformly.

    Arrows out of the occupied set are moves; arrows between two occupied
    vertices (counted once per direction) leave the state unchanged.
    """
    g = tg.base
    off, diag = [], []
    for s, nb in zip(tg.vertices, tg.adjacency):
        arrows = sum(g.degree(v) for v in s)
        off.append(Fraction(1, arrows))
        diag.append(Fraction(arrows - len(nb), arrows))
    return TransitionMatrix(tg, off, diag)


class StationaryDistribution:
    """Weights (deg_k + k) / (2|E_k| + k C(n,k)) over the token vertices."""

    def __init__(self, tg: TokenGraph):
        self.token_graph = tg
        k = tg.k
        norm = 2 * tg.edge_count + k * tg.size
        self.normalizer = norm
        self.exact = [Fraction(len(nb) + k, norm) for nb in tg.adjacency]
        self.weights = np.array([float(w) for w in self.exact])

    def __getitem__(self, members) -> Fraction:
        return self.exact[self.token_graph.index[tuple(sorted(members))]]

    def __len__(self):
        return len(self.exact)


def stationary_distribution(tg: TokenGraph) -> StationaryDistribution:
    return StationaryDistribution(tg)


def power_iteration(tm: TransitionMatrix, tol: float = 1e-15, max_iter: int = 10**6) -> np.ndarray:
    """Fixed point of ``p -> p P`` started from the uniform vector."""
    pt = tm.to_sparse().T.tocsr()
    p = np.full(tm.dimension, 1.0 / tm.dimension)
    for _ in range(max_iter):
        nxt = pt @ p
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - p)) < tol:
            return nxt
        p = nxt
    return p


@dataclass(frozen=True)
class LazinessReport:
    min_avg_induced_degree: Optional[Fraction]
    is_lazy: Optional[bool]
    regime: str
    gamma: Optional[Fraction]
    degree: int
    exact: bool
    certificate: Optional[tuple] = None

    def as_dict(self) -> dict:
        return {
            "min_avg_induced_degree": _fmt(self.min_avg_induced_degree),
            "is_lazy": self.is_lazy,
            "regime": self.regime,
            "gamma": _fmt(self.gamma),
            "degree": self.degree,
            "exact": self.exact,
            "certificate": list(self.certificate) if self.certificate else None,
        }


def _fmt(x):
    return None if x is None else str(x)


def _greedy_sparse_subset(g: Graph, k: int) -> tuple:
    """A k-subset with few induced edges (min-degree greedy), for certificates."""
    chosen: list[int] = []
    load = [0] * g.n  # edges into the chosen set
    free = set(range(g.n))
    for _ in range(k):
        v = min(free, key=lambda x: (load[x], x))
        free.discard(v)
        chosen.append(v)
        for w in g.adjacency[v]:
            load[w] += 1
    return tuple(sorted(chosen))


def laziness_and_regime(g: Graph, k: int, cap: int = TOKEN_VERTEX_CAP) -> LazinessReport:
    """Decide whether the loop walk on the k-token graph of ``g`` is lazy.

    The walk is lazy exactly when every k-subset induces an average degree
    of at least d - 1. The minimum is found by enumeration when
    ``C(n, k) <= cap``. Above the cap a greedy sparse subset can still
    certify the non-lazy branch; otherwise the regime is left unresolved.
    """
    _check_k(g, k)
    d = regular_degree(g)
    if d is None:
        raise HypothesisError("regularity", "laziness criterion needs a regular host")

    if comb(g.n, k) <= cap:
        best = min(iter_subsets(g.n, k), key=lambda s: induced_edge_count(g, s))
        min_avg = Fraction(2 * induced_edge_count(g, best), k)
        lazy = min_avg >= d - 1
        return LazinessReport(
            min_avg_induced_degree=min_avg,
            is_lazy=lazy,
            regime=LAZY if lazy else NON_LAZY,
            gamma=1 / (d + 1 - min_avg),
            degree=d,
            exact=True,
            certificate=best,
        )

    cand = _greedy_sparse_subset(g, k)
    upper = Fraction(2 * induced_edge_count(g, cand), k)
    if upper < d - 1:
        # the minimum is at most `upper`, so the criterion already fails
        return LazinessReport(None, False, NON_LAZY, None, d, False, cand)
    return LazinessReport(None, None, UNRESOLVED, None, d, False, None)


def vertex_connectivity(tg: TokenGraph) -> int:
    """Vertex connectivity of the explicit token graph (max-flow based)."""
    import networkx as nx

    return nx.node_connectivity(tg.to_networkx())


def export_edge_list(tg: TokenGraph) -> str:
    return "".join(f"{i} {j}\n" for i, j in tg.edges())


def export_vertex_table(tg: TokenGraph) -> str:
    lines = ["# index\tmembers\n"]
    for i, s in enumerate(tg.vertices):
        lines.append(f"{i}\t{' '.join(str(tg.base.label(v)) for v in s)}\n")
    return "".join(lines)
