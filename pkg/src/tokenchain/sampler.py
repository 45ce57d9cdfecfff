"""Particle simulation of the exclusion chain on k-subsets.

The state is a set of k occupied vertices. Each step draws one arrow
uniformly from the current arrow multiset and, if the arrow leads out of the
occupied set, moves that particle. Two arrow sets are supported:

``loop``
    boundary arrows plus one loop per particle. Stationary weight is
    proportional to ``deg_k + k``, so subsets with few induced edges are
    favoured.
``classical``
    boundary arrows plus both orientations of every internal edge. The
    induced chain is symmetric and its stationary law is uniform.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .combinatorics import mask_members, rank_subset, subset_mask, unrank_subset
from .errors import HypothesisError
from .graph_core import (
    Graph,
    check_subset,
    complement,
    complement_is_connected,
    induced_edge_count,
    is_connected,
    regular_degree,
)

DEFAULT_SAMPLES = 100_000
BURN_IN_LIMIT = 10**8


class Dynamics(str, Enum):
    LOOP = "loop"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class BoundaryStructure:
    arrows: tuple
    dynamics: Dynamics

    def __len__(self):
        return len(self.arrows)


def _arrow_valid(a: int, b: int, occ, dynamics: Dynamics) -> bool:
    # callers only pass a == b or adjacent (a, b)
    if not occ[a]:
        return False
    if a == b:
        return dynamics is Dynamics.LOOP
    return (not occ[b]) or dynamics is Dynamics.CLASSICAL


def build_boundary(g: Graph, members: Sequence[int], dynamics=Dynamics.LOOP) -> BoundaryStructure:
    dynamics = Dynamics(dynamics)
    sub = check_subset(g, members)
    occ = [False] * g.n
    for v in sub:
        occ[v] = True
    arrows = []
    for v in sub:
        cand = [(v, w) for w in g.adjacency[v]] + [(v, v)]
        arrows.extend(a for a in cand if _arrow_valid(a[0], a[1], occ, dynamics))
    arrows.sort()
    return BoundaryStructure(tuple(arrows), dynamics)


@dataclass
class ChainState:
    current: tuple
    step: int = 0
    rng: random.Random = field(default_factory=lambda: random.Random(0), repr=False)

    @classmethod
    def seeded(cls, members, seed: int) -> "ChainState":
        return cls(tuple(sorted(members)), 0, random.Random(seed))


def apply_arrow(members: Sequence[int], arrow) -> tuple:
    """Swap the states of the arrow's endpoints."""
    v, w = arrow
    inside = set(members)
    if v == w or w in inside:
        return tuple(sorted(inside))
    inside.discard(v)
    inside.add(w)
    return tuple(sorted(inside))


def step(g: Graph, state: ChainState, dynamics=Dynamics.LOOP) -> ChainState:
    """One transition, rebuilding the arrow multiset from scratch.

    ``randrange`` draws by rejection over a power-of-two range, so every
    arrow is equally likely. The returned state shares ``state.rng``.
    """
    boundary = build_boundary(g, state.current, dynamics)
    arrow = boundary.arrows[state.rng.randrange(len(boundary))]
    return ChainState(apply_arrow(state.current, arrow), state.step + 1, state.rng)


class ExclusionChain:
    """Incrementally maintained chain for long runs.

    The arrow multiset lives in a list with a position index so removal is
    O(1) by swapping with the last slot. After a particle moves from v to w
    only arrows touching v or w can change validity, so an update costs
    O(deg v + deg w).
    """

    def __init__(self, g: Graph, members: Sequence[int], dynamics=Dynamics.LOOP,
                 rng: Optional[random.Random] = None):
        self.graph = g
        self.dynamics = Dynamics(dynamics)
        self.rng = rng if rng is not None else random.Random(0)
        sub = check_subset(g, members)
        self.k = len(sub)
        self.occ = [False] * g.n
        for v in sub:
            self.occ[v] = True
        self.mask = subset_mask(sub)
        self.step_count = 0
        self.arrows: list = []
        self.pos: dict = {}
        for a in build_boundary(g, sub, self.dynamics).arrows:
            self._add(a)
        # arrows that can involve x: its loop and both orientations of its edges
        self._touching = [
            [(x, x)] + [(x, y) for y in g.adjacency[x]] + [(y, x) for y in g.adjacency[x]]
            for x in range(g.n)
        ]

    def _add(self, a):
        self.pos[a] = len(self.arrows)
        self.arrows.append(a)

    def _remove(self, a):
        i = self.pos.pop(a)
        last = self.arrows.pop()
        if i < len(self.arrows):
            self.arrows[i] = last
            self.pos[last] = i

    @property
    def current(self) -> tuple:
        return mask_members(self.mask)

    def step(self):
        v, w = self.arrows[self.rng.randrange(len(self.arrows))]
        self.step_count += 1
        if v == w or self.occ[w]:
            return
        touched = set(self._touching[v])
        touched.update(self._touching[w])
        pos = self.pos
        for a in touched:
            if a in pos:
                self._remove(a)
        self.occ[v] = False
        self.occ[w] = True
        self.mask ^= (1 << v) | (1 << w)
        occ, dyn = self.occ, self.dynamics
        for a in touched:
            if _arrow_valid(a[0], a[1], occ, dyn):
                self._add(a)

    def run(self, steps: int):
        for _ in range(steps):
            self.step()


class SampleStatistics:
    """Visit counts of k-subsets collected after burn-in.

    Counts are keyed by sorted member tuples. ``merge`` is associative and
    order independent, so statistics of independent chains can be pooled.
    """

    def __init__(self, n: int, k: int, counts=None, metadata=None):
        self.n = n
        self.k = k
        self.counts: Counter = Counter(counts or {})
        self.metadata = dict(metadata or {})

    @property
    def total_samples(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "SampleStatistics") -> "SampleStatistics":
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("cannot merge statistics over different state spaces")
        seeds = sorted(self._seeds() + other._seeds())
        return SampleStatistics(self.n, self.k, self.counts + other.counts, {"seeds": seeds})

    def _seeds(self) -> list:
        if "seeds" in self.metadata:
            return list(self.metadata["seeds"])
        return [self.metadata["seed"]] if "seed" in self.metadata else []

    def to_vector(self) -> np.ndarray:
        """Empirical distribution indexed by lexicographic subset rank."""
        vec = np.zeros(math.comb(self.n, self.k))
        total = self.total_samples
        if total == 0:
            return vec
        for s, c in self.counts.items():
            vec[rank_subset(s, self.n)] = c / total
        return vec

    def ranked(self) -> list:
        """(members, count) pairs by count descending, ties lexicographic."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def __eq__(self, other):
        return (isinstance(other, SampleStatistics) and (self.n, self.k) == (other.n, other.k)
                and self.counts == other.counts)


def run_chain(g: Graph, k: int, burn_in: int, m: int, seed: int,
              dynamics=Dynamics.LOOP, initial: Optional[Sequence[int]] = None) -> SampleStatistics:
    """Simulate ``burn_in`` discarded steps, then record the state after each of ``m`` steps."""
    dynamics = Dynamics(dynamics)
    if not 1 <= k <= g.n - 1:
        raise ValueError(f"k must lie in 1..{g.n - 1}, got {k}")
    if burn_in < 0 or m < 0:
        raise ValueError("burn_in and m must be nonnegative")
    if not is_connected(g):
        raise HypothesisError("connectivity of L", "graph is not connected")

    rng = random.Random(seed)
    if initial is None:
        start = unrank_subset(rng.randrange(math.comb(g.n, k)), g.n, k)
    else:
        start = check_subset(g, initial)
        if len(start) != k:
            raise ValueError(f"initial subset has {len(start)} members, expected {k}")

    chain = ExclusionChain(g, start, dynamics, rng)
    chain.run(burn_in)
    by_mask: Counter = Counter()
    step_ = chain.step
    for _ in range(m):
        step_()
        by_mask[chain.mask] += 1
    counts = {mask_members(mask): c for mask, c in by_mask.items()}
    meta = {
        "seed": seed,
        "burn_in": burn_in,
        "samples": m,
        "dynamics": dynamics.value,
        "initial": list(start),
        "n": g.n,
        "m_edges": g.m,
    }
    return SampleStatistics(g.n, k, counts, meta)


def check_densest_hypotheses(g: Graph) -> int:
    """Raise HypothesisError unless ``g`` is regular with ``g`` and its complement connected."""
    d = regular_degree(g)
    if d is None:
        raise HypothesisError("regularity", "graph is not regular")
    if not is_connected(g):
        raise HypothesisError("connectivity of L", "graph is not connected")
    if not complement_is_connected(g):
        raise HypothesisError("connectivity of L^c", "complement disconnected")
    return d


@dataclass(frozen=True)
class RankedSubset:
    members: tuple
    count: int
    frequency: float
    edge_count: int
    density: Fraction

    def as_dict(self, g: Optional[Graph] = None) -> dict:
        members = [g.label(v) for v in self.members] if g is not None else list(self.members)
        return {
            "members": members,
            "count": self.count,
            "frequency": self.frequency,
            "induced_edges": self.edge_count,
            "density": str(self.density),
        }


@dataclass
class DensestReport:
    k: int
    ranking: list
    statistics: SampleStatistics
    burn_in: int
    burn_in_source: str
    bounds: Optional[object] = None
    regime: Optional[object] = None

    def top_tier(self) -> list:
        """Subsets sharing the highest visit count."""
        if not self.ranking:
            return []
        top = self.ranking[0].count
        return [r.members for r in self.ranking if r.count == top]


def sample_densest(g: Graph, k: int, burn_in: Optional[int] = None, m: int = DEFAULT_SAMPLES,
                   seed: int = 0, epsilon: float = 0.1, lazy_constant: float = 1.0,
                   cap: Optional[int] = None, dynamics=Dynamics.LOOP) -> DensestReport:
    """Run the loop chain on the complement and rank visited subsets.

    Densest k-subsets of ``g`` are the sparsest in the complement and so
    carry the largest stationary weight there. When ``burn_in`` is None it
    defaults to the non-lazy mixing threshold of the complement chain, which
    requires that branch to be certified.
    """
    from .analysis import mixing_bounds
    from .token_graph import NON_LAZY, TOKEN_VERTEX_CAP, laziness_and_regime

    d = check_densest_hypotheses(g)
    if not 1 <= k <= g.n - 1:
        raise ValueError(f"k must lie in 1..{g.n - 1}, got {k}")
    gc = complement(g)
    dc = g.n - 1 - d
    regime = laziness_and_regime(gc, k, cap if cap is not None else TOKEN_VERTEX_CAP)
    gamma = float(regime.gamma) if regime.gamma is not None else None
    bounds = mixing_bounds(g.n, dc, k, epsilon, lazy_constant, gamma)

    if burn_in is None:
        if regime.regime != NON_LAZY:
            raise ValueError(
                f"no default burn-in: complement chain regime is {regime.regime}; "
                "pass burn_in explicitly"
            )
        if bounds.threshold_non_lazy >= BURN_IN_LIMIT:
            raise ValueError("default burn-in exceeds 1e8 steps; pass burn_in explicitly")
        burn_in = math.ceil(bounds.threshold_non_lazy)
        source = "non_lazy_threshold"
    else:
        source = "explicit"

    stats = run_chain(gc, k, burn_in, m, seed, dynamics)
    ranking = []
    total = stats.total_samples
    for members, count in stats.ranked():
        e = induced_edge_count(g, members)
        ranking.append(RankedSubset(members, count, count / total, e, Fraction(e, k)))
    return DensestReport(k, ranking, stats, burn_in, source, bounds, regime)
