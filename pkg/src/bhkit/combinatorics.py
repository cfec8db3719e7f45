"""Multi-index machinery for degree-m polynomials in n variables.

Two indexings of the same object coexist: nondecreasing index tuples
i = (i_1 <= ... <= i_m) with entries in {1, ..., n}, and exponent
multi-indices alpha with |alpha| = m.  J(m, n) denotes the canonical
(sorted) tuples, one per permutation class of M(m, n) = {1..n}^m.
All enumeration here is lexicographic so coefficient storage order is
deterministic everywhere downstream.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

__all__ = [
    "IndexTuple",
    "MultiIndex",
    "SubsetPair",
    "enumerate_J",
    "multiplicity",
    "alpha_of",
    "tuple_of",
    "enumerate_subsets",
    "split",
]


@dataclass(frozen=True)
class IndexTuple:
    """An element i of M(m, n): m entries, each in {1, ..., n}."""

    entries: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got n={self.n}")
        if len(self.entries) < 1:
            raise ValueError("degree must be positive, got empty entries")
        for e in self.entries:
            if not 1 <= e <= self.n:
                raise ValueError(f"entry {e} outside [1, {self.n}]")

    @property
    def m(self) -> int:
        return len(self.entries)

    def canonical(self) -> "IndexTuple":
        """The sorted representative of this tuple's permutation class."""
        return IndexTuple(tuple(sorted(self.entries)), self.n)


@dataclass(frozen=True)
class MultiIndex:
    """An exponent vector alpha of length n with |alpha| = degree."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) < 1:
            raise ValueError("multi-index must have positive dimension")
        for a in self.exponents:
            if a < 0:
                raise ValueError(f"negative exponent {a}")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)


@dataclass(frozen=True)
class SubsetPair:
    """A sorted k-subset S of positions {1, ..., m} with its complement."""

    S: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"universe size must be positive, got m={self.m}")
        if tuple(sorted(set(self.S))) != self.S:
            raise ValueError(f"subset {self.S} is not sorted and duplicate-free")
        for s in self.S:
            if not 1 <= s <= self.m:
                raise ValueError(f"position {s} outside [1, {self.m}]")

    @property
    def complement(self) -> tuple[int, ...]:
        in_S = set(self.S)
        return tuple(j for j in range(1, self.m + 1) if j not in in_S)

    @property
    def k(self) -> int:
        return len(self.S)


def enumerate_J(m: int, n: int) -> list[IndexTuple]:
    """All nondecreasing tuples in {1..n}^m, lexicographically.

    The count is binomial(n + m - 1, m).
    """
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    return [
        IndexTuple(combo, n)
        for combo in itertools.combinations_with_replacement(range(1, n + 1), m)
    ]


def multiplicity(i: IndexTuple) -> int:
    """Number of distinct permutations of i, as an exact integer.

    Equals m! / (m_1! ... m_n!) where m_j counts occurrences of j.
    Computed as an iterative product of binomials so every intermediate
    value is an exact integer.
    """
    counts: dict[int, int] = {}
    for e in i.entries:
        counts[e] = counts.get(e, 0) + 1
    result = 1
    placed = 0
    for c in counts.values():
        placed += c
        result *= math.comb(placed, c)
    return result


def alpha_of(i: IndexTuple) -> MultiIndex:
    """The exponent multi-index of i: alpha_j = #{k : i_k = j}."""
    exponents = [0] * i.n
    for e in i.entries:
        exponents[e - 1] += 1
    return MultiIndex(tuple(exponents))


def tuple_of(a: MultiIndex) -> IndexTuple:
    """The canonical (nondecreasing) index tuple with exponent vector a."""
    if a.degree < 1:
        raise ValueError("multi-index of degree 0 has no index tuple")
    entries: list[int] = []
    for j, count in enumerate(a.exponents, start=1):
        entries.extend([j] * count)
    return IndexTuple(tuple(entries), a.n)


def enumerate_subsets(m: int, k: int) -> list[SubsetPair]:
    """All binomial(m, k) subset pairs (S, complement) of {1, ..., m}."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    return [
        SubsetPair(combo, m)
        for combo in itertools.combinations(range(1, m + 1), k)
    ]


def split(i: IndexTuple, pair: SubsetPair) -> tuple[IndexTuple, IndexTuple | None]:
    """Split i into (i_S, i_Shat) by position.

    i_S = (i_{s_1}, ..., i_{s_k}) in S-order.  The complement part is
    None when S is all of {1, ..., m}.
    """
    if i.m != pair.m:
        raise ValueError(f"tuple degree {i.m} does not match universe {pair.m}")
    i_S = IndexTuple(tuple(i.entries[s - 1] for s in pair.S), i.n)
    comp = pair.complement
    if not comp:
        return i_S, None
    i_Shat = IndexTuple(tuple(i.entries[s - 1] for s in comp), i.n)
    return i_S, i_Shat
