"""Lexicographic ranking of k-subsets (combinatorial number system)."""

from itertools import combinations
from math import comb


def rank_subset(members, n: int) -> int:
    """Index of the sorted k-subset ``members`` of ``range(n)`` in lexicographic order."""
    k = len(members)
    total = comb(n, k)
    return total - 1 - sum(comb(n - 1 - c, k - i) for i, c in enumerate(members))


def unrank_subset(r: int, n: int, k: int) -> tuple:
    """Inverse of :func:`rank_subset`."""
    if not 0 <= r < comb(n, k):
        raise ValueError(f"rank {r} outside [0, C({n},{k}))")
    out = []
    c = 0
    for i in range(k):
        while True:
            # subsets whose i-th smallest member is c
            block = comb(n - 1 - c, k - 1 - i)
            if r < block:
                break
            r -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


def iter_subsets(n: int, k: int):
    """All k-subsets of ``range(n)`` in lexicographic order."""
    return combinations(range(n), k)


def subset_mask(members) -> int:
    mask = 0
    for v in members:
        mask |= 1 << v
    return mask


def mask_members(mask: int) -> tuple:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)
