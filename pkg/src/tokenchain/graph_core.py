"""Simple undirected graphs, complements and induced-subgraph statistics."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ParseError, ValidationError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on the vertices ``0..n-1``.

    Edges are stored as ``(u, v)`` pairs with ``u < v``. ``adjacency`` is
    derived from ``edges`` at construction and holds sorted neighbour tuples.
    ``labels`` optionally records the external vertex names that were mapped
    to the dense ids when the graph was parsed.
    """

    n: int
    edges: frozenset
    labels: Optional[tuple] = None
    adjacency: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("vertex count must be nonnegative")
        canon = set()
        nbrs = [[] for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            e = (u, v) if u < v else (v, u)
            if e in canon:
                continue
            canon.add(e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        if self.labels is not None and len(self.labels) != self.n:
            raise ValidationError("labels must name every vertex")
        object.__setattr__(self, "edges", frozenset(canon))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in nbrs))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], labels=None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def label(self, v: int):
        return v if self.labels is None else self.labels[v]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class InducedStats:
    edge_count: int
    density: Fraction
    avg_degree: Fraction


@dataclass(frozen=True)
class GraphReport:
    is_regular: bool
    degree: Optional[int]
    is_connected: bool
    complement_connected: bool

    def as_dict(self) -> dict:
        return {
            "is_regular": self.is_regular,
            "degree": self.degree,
            "is_connected": self.is_connected,
            "complement_connected": self.complement_connected,
        }


def parse_edge_list(text, relabel: bool = False) -> Graph:
    """Parse the ``u v`` per line edge-list format.

    ``text`` may be a string or any iterable of lines. Lines starting with
    ``#`` and blank lines are skipped. With the default ``relabel=False``
    ids must be nonnegative integers and the graph spans ``0..max_id``.
    With ``relabel=True`` arbitrary tokens are accepted and mapped to dense
    ids in order of first appearance; the original tokens are kept in
    ``Graph.labels``.

    Duplicate edges are merged. A self-loop raises ValidationError.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two vertex ids, got {line!r}", lineno)
        if not relabel:
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
            if u < 0 or v < 0:
                raise ParseError(f"negative vertex id in {line!r}", lineno)
            pairs.append((u, v, lineno))
        else:
            pairs.append((parts[0], parts[1], lineno))

    labels = None
    if relabel:
        index: dict = {}
        mapped = []
        for a, b, lineno in pairs:
            for tok in (a, b):
                if tok not in index:
                    index[tok] = len(index)
            mapped.append((index[a], index[b], lineno))
        pairs = mapped
        labels = tuple(index)
        n = len(index)
    else:
        n = 1 + max((max(u, v) for u, v, _ in pairs), default=-1)

    for u, v, lineno in pairs:
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop on vertex {u}")
    return Graph.from_edges(n, ((u, v) for u, v, _ in pairs), labels)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.sorted_edges())


def complement(g: Graph) -> Graph:
    n = g.n
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if (u, v) not in g.edges
    ]
    return Graph.from_edges(n, edges, g.labels)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == g.n


def complement_is_connected(g: Graph) -> bool:
    """Connectivity of the complement without building it.

    BFS over non-edges: each dequeued vertex claims every still-unvisited
    vertex it is *not* adjacent to, so the total work is O(n + m).
    """
    if g.n == 0:
        return True
    unvisited = set(range(1, g.n))
    queue = deque([0])
    while queue and unvisited:
        u = queue.popleft()
        nbrs = set(g.adjacency[u])
        # every scanned w is either claimed (charged to w) or a neighbour of u
        reached = [w for w in unvisited if w not in nbrs]
        for w in reached:
            unvisited.discard(w)
            queue.append(w)
    return not unvisited


def regular_degree(g: Graph) -> Optional[int]:
    """Common vertex degree, or None when ``g`` is not regular."""
    degs = g.degrees()
    if not degs:
        return None
    return degs[0] if all(d == degs[0] for d in degs) else None


def regularity_and_connectivity(g: Graph) -> GraphReport:
    d = regular_degree(g)
    return GraphReport(
        is_regular=d is not None,
        degree=d,
        is_connected=is_connected(g),
        complement_connected=complement_is_connected(g),
    )


def check_subset(g: Graph, members: Sequence[int]) -> tuple[int, ...]:
    """Validate a vertex subset for ``g`` and return it sorted."""
    sub = tuple(sorted(members))
    if not sub:
        raise ValidationError("vertex subset must be nonempty")
    if len(set(sub)) != len(sub):
        raise ValidationError(f"repeated vertex in subset {list(members)}")
    if sub[0] < 0 or sub[-1] >= g.n:
        raise ValidationError(f"subset {list(members)} has a vertex outside 0..{g.n - 1}")
    return sub


def induced_edge_count(g: Graph, members: Sequence[int]) -> int:
    inside = set(members)
    return sum(1 for v in inside for w in g.adjacency[v] if w in inside) // 2


def induced_stats(g: Graph, members: Sequence[int]) -> InducedStats:
    sub = check_subset(g, members)
    k = len(sub)
    e = induced_edge_count(g, sub)
    return InducedStats(edge_count=e, density=Fraction(e, k), avg_degree=Fraction(2 * e, k))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())
