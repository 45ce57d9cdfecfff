"""Mixing-time bounds, brute-force oracles and distribution distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .combinatorics import iter_subsets
from .errors import SizeError
from .graph_core import Graph, induced_edge_count
from .token_graph import DENSE_CAP, TransitionMatrix

ENUMERATION_CAP = 10**7

NON_LAZY_FORMULA = "1 + rho * (ln(4/epsilon) + xi)"
LAZY_FORMULA = "C * log2(1/epsilon) * (xi - (n-1)^2 / d^4)"


@dataclass(frozen=True)
class MixingBounds:
    n: int
    d: int
    k: int
    epsilon: float
    lazy_constant: float
    rho: float
    xi: float
    threshold_non_lazy: float
    threshold_lazy: float
    gamma: Optional[float] = None

    @property
    def lazy_vacuous(self) -> bool:
        return self.threshold_lazy <= 0

    @property
    def steps_non_lazy(self) -> int:
        return math.ceil(self.threshold_non_lazy)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "epsilon": self.epsilon,
            "rho": self.rho,
            "xi": self.xi,
            "threshold_non_lazy": self.threshold_non_lazy,
            "threshold_non_lazy_formula": NON_LAZY_FORMULA,
            "threshold_lazy": self.threshold_lazy,
            "threshold_lazy_formula": LAZY_FORMULA,
            "lazy_constant": self.lazy_constant,
            "lazy_vacuous": self.lazy_vacuous,
            "gamma": self.gamma,
        }


def rho(n: int, d: int, k: int) -> float:
    return 4 * (n - 1) ** 2 * (n - k) ** 2 / d**4


def xi(n: int, d: int, k: int) -> float:
    return math.log(math.comb(n, k)) + math.log(k * (n - k) / (n - 1) + k / d)


def mixing_bounds(n: int, d: int, k: int, epsilon: float = 0.1, lazy_constant: float = 1.0,
                  gamma: Optional[float] = None) -> MixingBounds:
    """Evaluate both mixing thresholds for a d-regular host on n vertices.

    Which one applies depends on the laziness regime of the host; see
    :func:`tokenchain.token_graph.laziness_and_regime`. The lazy threshold
    is returned as is, even when it is non-positive (``lazy_vacuous``).
    """
    if n < 2 or not 1 <= k <= n - 1 or d < 1:
        raise ValueError(f"need n >= 2, 1 <= k <= n-1, d >= 1; got n={n}, d={d}, k={k}")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    r = rho(n, d, k)
    x = xi(n, d, k)
    non_lazy = 1 + r * (math.log(4 / epsilon) + x)
    lazy = lazy_constant * math.log2(1 / epsilon) * (x - (n - 1) ** 2 / d**4)
    return MixingBounds(n, d, k, epsilon, lazy_constant, r, x, non_lazy, lazy, gamma)


@dataclass(frozen=True)
class OracleResult:
    optimal_subsets: list
    optimum: int
    evaluated: int


def brute_force_densest(g: Graph, k: int, cap: int = ENUMERATION_CAP) -> OracleResult:
    """All k-subsets with the maximum number of induced edges, in lexicographic order."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}")
    total = math.comb(g.n, k)
    if total > cap:
        raise SizeError(f"C({g.n},{k}) = {total} subsets exceeds enumeration cap {cap}")
    best = -1
    winners: list = []
    for s in iter_subsets(g.n, k):
        e = induced_edge_count(g, s)
        if e > best:
            best, winners = e, [s]
        elif e == best:
            winners.append(s)
    return OracleResult(winners, best, total)


def exact_chain_distribution(tm: TransitionMatrix, t: int, initial: int,
                             cap: int = DENSE_CAP) -> np.ndarray:
    """Row ``initial`` of ``P^t`` by t sparse vector-matrix products."""
    dim = tm.dimension
    if dim > cap:
        raise SizeError(f"chain dimension {dim} exceeds cap {cap}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    pt = tm.to_sparse().T.tocsr()
    p = np.zeros(dim)
    p[initial] = 1.0
    for _ in range(t):
        p = pt @ p
    return p


def exact_chain_distributions(tm: TransitionMatrix, t: int, cap: int = DENSE_CAP) -> np.ndarray:
    """All rows of ``P^t`` at once (rows = initial states)."""
    dim = tm.dimension
    if dim > cap:
        raise SizeError(f"chain dimension {dim} exceeds cap {cap}")
    p = tm.to_dense(cap)
    return np.linalg.matrix_power(p, t)


@dataclass(frozen=True)
class Distance:
    tv: float
    max_relative: float


def distribution_distance(p, q) -> Distance:
    """Total variation and worst pointwise relative error of ``p`` against ``q``.

    ``p`` may be a probability vector or a SampleStatistics (normalised by its
    sample count, unvisited states count as zero).
    """
    if hasattr(p, "to_vector"):
        p = p.to_vector()
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"support mismatch: {p.shape} vs {q.shape}")
    if np.any(q == 0):
        raise ValueError("max_relative undefined: reference distribution has a zero entry")
    diff = np.abs(p - q)
    return Distance(tv=0.5 * float(diff.sum()), max_relative=float(np.max(diff / q)))
