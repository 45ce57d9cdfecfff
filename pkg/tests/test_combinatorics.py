from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from tokenchain.combinatorics import mask_members, rank_subset, subset_mask, unrank_subset


def test_rank_matches_lexicographic_enumeration():
    for n in range(1, 9):
        for k in range(0, n + 1):
            for i, s in enumerate(combinations(range(n), k)):
                assert rank_subset(s, n) == i
                assert unrank_subset(i, n, k) == s


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1), min_size=1))))
def test_rank_unrank_roundtrip(case):
    n, members = case
    s = tuple(sorted(members))
    assert unrank_subset(rank_subset(s, n), n, len(s)) == s


@given(st.sets(st.integers(0, 60)))
def test_mask_roundtrip(members):
    assert mask_members(subset_mask(members)) == tuple(sorted(members))
