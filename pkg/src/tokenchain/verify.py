"""Invariant checks run by ``tokenchain verify`` on a user-supplied graph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .combinatorics import iter_subsets
from .graph_core import (
    Graph,
    complement,
    induced_edge_count,
    is_connected,
    regular_degree,
)
from .sampler import Dynamics, build_boundary
from .token_graph import (
    build_token_graph,
    classical_transition_matrix,
    edge_count_formula,
    laziness_and_regime,
    power_iteration,
    stationary_distribution,
    transition_matrix,
    vertex_connectivity,
)

MATRIX_CHECK_CAP = 2000
CONNECTIVITY_CHECK_CAP = 400
SUBSET_CHECK_CAP = 20000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    k: int | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "k": self.k, "passed": self.passed, "detail": self.detail}


def graph_checks(g: Graph) -> list[Check]:
    out = [Check("degree_sum", sum(g.degrees()) == 2 * g.m)]
    gc = complement(g)
    out.append(Check("complement_involution", complement(gc) == g))
    d = regular_degree(g)
    if d is not None:
        out.append(Check("complement_degree", all(x == g.n - 1 - d for x in gc.degrees())))
    return out


def stationary_checks(g: Graph, k: int) -> list[Check]:
    """Exact and floating checks of the loop walk on the explicit token graph."""
    out = []
    tg = build_token_graph(g, k)
    tm = transition_matrix(tg)
    pi = stationary_distribution(tg)
    rows_ok = all(tm.row_sum(i) == 1 for i in range(tg.size))
    out.append(Check("row_stochastic", rows_ok, k))

    ex = pi.exact
    flow_ok = all(
        ex[i] * tm.diag[i] + sum(ex[j] * tm.off[j] for j in nb) == ex[i]
        for i, nb in enumerate(tg.adjacency)
    )
    out.append(Check("stationary_exact", flow_ok and sum(ex) == 1, k))
    balance_ok = all(ex[i] * tm.off[i] == ex[j] * tm.off[j] for i, j in tg.edges())
    out.append(Check("detailed_balance_exact", balance_ok, k))

    fixed = power_iteration(tm)
    err = float(np.max(np.abs(fixed - pi.weights)))
    out.append(Check("power_iteration_fixed_point", err <= 1e-10, k, f"max abs error {err:.3e}"))

    d = regular_degree(g)
    if d is not None:
        lazy = laziness_and_regime(g, k)
        direct = min(tm.diag) >= Fraction(1, 2)
        out.append(Check("laziness_agreement", lazy.is_lazy == direct, k,
                         f"criterion {lazy.is_lazy}, diagonal {direct}"))

        ctm = classical_transition_matrix(tg)
        col = [ctm.diag[i] + sum(ctm.off[j] for j in nb) for i, nb in enumerate(tg.adjacency)]
        ds_ok = all(ctm.row_sum(i) == 1 for i in range(tg.size)) and all(c == 1 for c in col)
        out.append(Check("classical_doubly_stochastic", ds_ok, k))

    if tg.size <= CONNECTIVITY_CHECK_CAP:
        kappa = vertex_connectivity(tg)
        mindeg = min(tg.degrees)
        out.append(Check("connectivity_equals_min_degree", kappa == mindeg, k,
                         f"kappa {kappa}, min degree {mindeg}"))
    return out


def combinatorial_checks(g: Graph, k: int) -> list[Check]:
    out = []
    d = regular_degree(g)
    tg = build_token_graph(g, k)
    enumerated = tg.edge_count
    if d is not None:
        formula = edge_count_formula(g.n, d, k)
        out.append(Check("edge_count_formula", formula == enumerated, k,
                         f"formula {formula}, enumerated {enumerated}"))
        ident = all(
            len(nb) == k * d - 2 * induced_edge_count(g, s)
            for s, nb in zip(tg.vertices, tg.adjacency)
        )
        out.append(Check("degree_identity", ident, k))
        ratio = Fraction(2 * enumerated, tg.size * k * (g.n - k))
        out.append(Check("avg_degree_ratio", ratio == Fraction(d, g.n - 1), k, f"ratio {ratio}"))
    return out


def arrow_checks(g: Graph, k: int) -> list[Check]:
    d = regular_degree(g)
    if d is None:
        return []
    loop_ok = classical_ok = True
    gc_ok = True
    gc = complement(g)
    for s in iter_subsets(g.n, k):
        e = induced_edge_count(g, s)
        if len(build_boundary(g, s, Dynamics.LOOP)) != k * d - 2 * e + k:
            loop_ok = False
        if len(build_boundary(g, s, Dynamics.CLASSICAL)) != d * k:
            classical_ok = False
        if e + induced_edge_count(gc, s) != k * (k - 1) // 2:
            gc_ok = False
    return [
        Check("arrow_count_loop", loop_ok, k),
        Check("arrow_count_classical", classical_ok, k),
        Check("induced_complement_identity", gc_ok, k),
    ]


def run_all(g: Graph, ks=None) -> list[Check]:
    """Every applicable check for the given token counts (default: all small ones)."""
    out = graph_checks(g)
    if g.n < 2:
        return out
    if ks is None:
        ks = [k for k in range(1, g.n) if comb(g.n, k) <= MATRIX_CHECK_CAP]
    connected = is_connected(g)
    for k in ks:
        size = comb(g.n, k)
        if size <= SUBSET_CHECK_CAP:
            out.extend(arrow_checks(g, k))
        if not connected:
            continue
        if size <= SUBSET_CHECK_CAP:
            out.extend(combinatorial_checks(g, k))
        if size <= MATRIX_CHECK_CAP:
            out.extend(stationary_checks(g, k))
    return out
