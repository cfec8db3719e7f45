"""Index bookkeeping against brute-force permutation enumeration."""

import itertools
import math

import pytest
from hypothesis import given, strategies as st

from bhkit.combinatorics import (
    IndexTuple,
    MultiIndex,
    SubsetPair,
    alpha_of,
    enumerate_J,
    enumerate_subsets,
    multiplicity,
    split,
    tuple_of,
)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 4), (2, 3), (3, 2), (4, 3), (5, 2)])
def test_enumerate_J_count_and_order(m, n):
    J = enumerate_J(m, n)
    assert len(J) == math.comb(n + m - 1, m)
    entries = [i.entries for i in J]
    assert entries == sorted(entries)
    assert len(set(entries)) == len(entries)
    for i in J:
        assert i.entries == tuple(sorted(i.entries))


@pytest.mark.parametrize("m,n", [(2, 2), (3, 3), (4, 2), (3, 4)])
def test_multiplicity_against_brute_force(m, n):
    # Oracle: count distinct permutations of the tuple literally.
    for i in enumerate_J(m, n):
        distinct = set(itertools.permutations(i.entries))
        assert multiplicity(i) == len(distinct)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 2), (4, 4), (5, 3)])
def test_multiplicities_partition_full_cube(m, n):
    assert sum(multiplicity(i) for i in enumerate_J(m, n)) == n**m


def test_multiplicity_is_exact_int():
    i = IndexTuple(tuple([1] * 10 + [2] * 10), 2)
    assert multiplicity(i) == math.comb(20, 10)
    assert isinstance(multiplicity(i), int)


@given(
    st.integers(min_value=1, max_value=5).flatmap(
        lambda n: st.lists(
            st.integers(min_value=1, max_value=n), min_size=1, max_size=6
        ).map(lambda entries: IndexTuple(tuple(sorted(entries)), n))
    )
)
def test_alpha_tuple_bijection(i):
    alpha = alpha_of(i)
    assert alpha.degree == i.m
    assert alpha.n == i.n
    assert tuple_of(alpha) == i


def test_tuple_of_rejects_degree_zero():
    with pytest.raises(ValueError):
        tuple_of(MultiIndex((0, 0)))


def test_canonical_sorts():
    i = IndexTuple((3, 1, 2), 3)
    assert i.canonical().entries == (1, 2, 3)
    assert multiplicity(i) == multiplicity(i.canonical())


def test_index_tuple_validation():
    with pytest.raises(ValueError):
        IndexTuple((0, 1), 2)
    with pytest.raises(ValueError):
        IndexTuple((3,), 2)
    with pytest.raises(ValueError):
        IndexTuple((), 2)


@pytest.mark.parametrize("m,k", [(1, 1), (3, 1), (3, 2), (3, 3), (5, 2)])
def test_enumerate_subsets(m, k):
    pairs = enumerate_subsets(m, k)
    assert len(pairs) == math.comb(m, k)
    for pair in pairs:
        assert pair.k == k
        assert len(pair.complement) == m - k
        assert tuple(sorted(pair.S + pair.complement)) == tuple(range(1, m + 1))


def test_subset_pair_validation():
    with pytest.raises(ValueError):
        SubsetPair((2, 1), 3)
    with pytest.raises(ValueError):
        SubsetPair((1, 1), 3)
    with pytest.raises(ValueError):
        SubsetPair((4,), 3)


def test_split_by_position():
    i = IndexTuple((1, 3, 2, 2), 3)
    pair = SubsetPair((2, 4), 4)
    i_S, i_Shat = split(i, pair)
    assert i_S.entries == (3, 2)
    assert i_Shat.entries == (1, 2)


def test_split_full_subset_has_no_complement():
    i = IndexTuple((2, 1), 2)
    pair = SubsetPair((1, 2), 2)
    i_S, i_Shat = split(i, pair)
    assert i_S.entries == (2, 1)
    assert i_Shat is None


def test_split_degree_mismatch():
    with pytest.raises(ValueError):
        split(IndexTuple((1, 2), 2), SubsetPair((1,), 3))


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
def test_enumeration_matches_distinct_sorted_cube_tuples(m, n):
    J = {i.entries for i in enumerate_J(m, n)}
    brute = {tuple(sorted(t)) for t in itertools.product(range(1, n + 1), repeat=m)}
    assert J == brute
