"""Tuple spaces, rankings, splits, and multiplicity factors for symmetric index arithmetic.

Index tuples are plain Python tuples of 1-based integers.  An "increasing"
tuple has nondecreasing entries and names one packed entry of a symmetric
tensor; the space of increasing d-tuples over [1, n] has size
C(n+d-1, d) and is always enumerated and ranked in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

IndexTuple = tuple[int, ...]


@dataclass(frozen=True)
class ContractionSpec:
    """A contraction instance: dimension n and mode counts (s, t, v).

    A has order s+v, B has order v+t, C has order s+t; v modes are summed
    over.  omega and kappa are the derived total and largest tensor order.
    """

    n: int
    s: int
    t: int
    v: int
    omega: int = field(init=False)
    kappa: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension n must be >= 1, got {self.n}")
        if min(self.s, self.t, self.v) < 0:
            raise ValueError(f"mode counts must be non-negative, got {(self.s, self.t, self.v)}")
        object.__setattr__(self, "omega", self.s + self.t + self.v)
        object.__setattr__(
            self, "kappa", max(self.s + self.v, self.v + self.t, self.s + self.t)
        )

    @property
    def stv(self) -> tuple[int, int, int]:
        return (self.s, self.t, self.v)

    def label(self) -> str:
        return f"n{self.n}s{self.s}t{self.t}v{self.v}"


def count_multisets(n: int, d: int) -> int:
    """Number of increasing d-tuples over [1, n], i.e. C(n+d-1, d)."""
    if n < 0 or d < 0:
        raise ValueError(f"need n, d >= 0, got ({n}, {d})")
    return math.comb(n + d - 1, d)


def enumerate_increasing(n: int, d: int) -> list[IndexTuple]:
    """All increasing d-tuples over [1, n] in lexicographic order."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d < 0:
        raise ValueError(f"need d >= 0, got {d}")
    return list(combinations_with_replacement(range(1, n + 1), d))


def _check_increasing(t: Sequence[int], n: int) -> None:
    prev = 1
    for x in t:
        if not (prev <= x <= n):
            raise ValueError(f"tuple {tuple(t)} is not increasing over [1, {n}]")
        prev = x


def tuple_rank(t: Sequence[int], n: int) -> int:
    """Lexicographic rank of an increasing tuple within its tuple space.

    O(d*n) with exact big integers; inverse of tuple_unrank.
    """
    _check_increasing(t, n)
    d = len(t)
    rank = 0
    prev = 1
    for i, val in enumerate(t):
        rest = d - i - 1
        for w in range(prev, val):
            rank += count_multisets(n - w + 1, rest)
        prev = val
    return rank


def tuple_unrank(rank: int, n: int, d: int) -> IndexTuple:
    """Increasing tuple at the given lexicographic rank."""
    if not 0 <= rank < count_multisets(n, d):
        raise ValueError(f"rank {rank} out of range for (n={n}, d={d})")
    out = []
    prev = 1
    for i in range(d):
        rest = d - i - 1
        w = prev
        while True:
            block = count_multisets(n - w + 1, rest)
            if rank < block:
                break
            rank -= block
            w += 1
        out.append(w)
        prev = w
    return tuple(out)


def multiplicity_factor(t: Sequence[int]) -> int:
    """Number of distinct permutations of a tuple: d! / prod(m_i!)."""
    counts: dict[int, int] = {}
    for x in t:
        counts[x] = counts.get(x, 0) + 1
    out = math.factorial(len(t))
    for m in counts.values():
        out //= math.factorial(m)
    return out


def partitions(
    t: Sequence[int], p: int, q: int, distinct: bool = False
) -> list[tuple[IndexTuple, IndexTuple]]:
    """Order-preserving splits of t into a p-part and a q-part.

    Emitted in the order induced by lexicographic choice of kept positions,
    C(p+q, p) pairs in total.  With distinct=True, collapses repeated pairs
    (these occur only when t has repeated entries), keeping first occurrences.
    """
    if p < 0 or q < 0 or p + q != len(t):
        raise ValueError(f"split sizes ({p}, {q}) do not match tuple of length {len(t)}")
    t = tuple(t)
    out = []
    for keep in combinations(range(p + q), p):
        keep_set = frozenset(keep)
        first = tuple(t[i] for i in keep)
        second = tuple(t[i] for i in range(p + q) if i not in keep_set)
        out.append((first, second))
    if distinct:
        out = list(dict.fromkeys(out))
    return out


def split_multiplicity(first: Sequence[int], second: Sequence[int]) -> int:
    """How many order-preserving splits of sort(first+second) yield this value pair.

    Equals the product over values u of C(m(u), m_first(u)) where m counts
    multiplicity in the merged tuple.
    """
    cf: dict[int, int] = {}
    cm: dict[int, int] = {}
    for x in first:
        cf[x] = cf.get(x, 0) + 1
        cm[x] = cm.get(x, 0) + 1
    for x in second:
        cm[x] = cm.get(x, 0) + 1
    out = 1
    for u, m in cf.items():
        out *= math.comb(cm[u], m)
    return out


def projections(t: Sequence[int], r: int, distinct: bool = False) -> list[IndexTuple]:
    """Ordered r-subcollections of t (first components of partitions(t, r, d-r))."""
    if not 0 <= r <= len(t):
        raise ValueError(f"projection order {r} out of range for tuple of length {len(t)}")
    out = [first for first, _ in partitions(t, r, len(t) - r)]
    if distinct:
        out = list(dict.fromkeys(out))
    return out


def merge_sorted(a: Sequence[int], b: Sequence[int]) -> IndexTuple:
    """Sorted concatenation; the increasing representative of a multiset union."""
    return tuple(sorted((*a, *b)))
