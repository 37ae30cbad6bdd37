"""Exact packed storage for symmetric tensors, and dense tensors over the full index cube.

All scalars are exact rationals (fractions.Fraction); rank computations and
algorithm-equivalence checks elsewhere rely on exact equality, so there is no
floating-point backend.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import (
    IndexTuple,
    count_multisets,
    enumerate_increasing,
    tuple_rank,
)

Scalar = Fraction


class SymTensor:
    """Symmetric tensor of order d over [1, n]^d, stored packed.

    values[r] holds the entry for the increasing tuple of rank r; reads and
    writes at arbitrary index permutations resolve to the sorted
    representative.
    """

    __slots__ = ("n", "d", "values")

    def __init__(self, n: int, d: int, values: Sequence[Scalar] | None = None):
        size = count_multisets(n, d)
        if values is None:
            values = [Fraction(0)] * size
        else:
            values = [Fraction(v) for v in values]
            if len(values) != size:
                raise ValueError(f"expected {size} packed values, got {len(values)}")
        self.n = n
        self.d = d
        self.values = values

    def _rank(self, idx: Sequence[int]) -> int:
        if len(idx) != self.d:
            raise ValueError(f"index {tuple(idx)} has length {len(idx)}, expected {self.d}")
        return tuple_rank(tuple(sorted(idx)), self.n)

    def get(self, idx: Sequence[int]) -> Scalar:
        return self.values[self._rank(idx)]

    def set(self, idx: Sequence[int], value) -> None:
        self.values[self._rank(idx)] = Fraction(value)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymTensor)
            and self.n == other.n
            and self.d == other.d
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"SymTensor(n={self.n}, d={self.d}, {len(self.values)} entries)"

    def to_lines(self) -> list[str]:
        """Line format: 'symtensor n d' header, then 'rank num/den' per entry."""
        out = [f"symtensor {self.n} {self.d}"]
        for r, v in enumerate(self.values):
            out.append(f"{r} {v.numerator}/{v.denominator}")
        return out

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "SymTensor":
        it = iter(lines)
        header = next(it).split()
        if len(header) != 3 or header[0] != "symtensor":
            raise ValueError("expected 'symtensor n d' header")
        n, d = int(header[1]), int(header[2])
        t = cls(n, d)
        for line in it:
            line = line.strip()
            if not line:
                continue
            rank_str, val_str = line.split()
            t.values[int(rank_str)] = Fraction(val_str)
        return t


class DenseTensor:
    """Order-d tensor over the full cube [1, n]^d, row-major."""

    __slots__ = ("n", "d", "values")

    def __init__(self, n: int, d: int, values: Sequence[Scalar] | None = None):
        size = n**d
        if values is None:
            values = [Fraction(0)] * size
        else:
            values = [Fraction(v) for v in values]
            if len(values) != size:
                raise ValueError(f"expected {size} dense values, got {len(values)}")
        self.n = n
        self.d = d
        self.values = values

    def offset(self, idx: Sequence[int]) -> int:
        if len(idx) != self.d:
            raise ValueError(f"index {tuple(idx)} has length {len(idx)}, expected {self.d}")
        off = 0
        for x in idx:
            if not 1 <= x <= self.n:
                raise ValueError(f"index entry {x} out of range [1, {self.n}]")
            off = off * self.n + (x - 1)
        return off

    def get(self, idx: Sequence[int]) -> Scalar:
        return self.values[self.offset(idx)]

    def set(self, idx: Sequence[int], value) -> None:
        self.values[self.offset(idx)] = Fraction(value)

    def indices(self) -> Iterable[IndexTuple]:
        """All cube indices in row-major order."""
        n, d = self.n, self.d
        idx = [1] * d
        for _ in range(n**d):
            yield tuple(idx)
            for pos in range(d - 1, -1, -1):
                if idx[pos] < n:
                    idx[pos] += 1
                    break
                idx[pos] = 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DenseTensor)
            and self.n == other.n
            and self.d == other.d
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"DenseTensor(n={self.n}, d={self.d}, {len(self.values)} entries)"


def unpack(t: SymTensor) -> DenseTensor:
    """Dense tensor holding the packed value at every permutation of each index."""
    out = DenseTensor(t.n, t.d)
    for idx in out.indices():
        out.values[out.offset(idx)] = t.get(idx)
    return out


def pack(t: DenseTensor) -> SymTensor:
    """Packed representative of a symmetric dense tensor.

    Raises ValueError naming a violating index pair if t is not symmetric.
    """
    out = SymTensor(t.n, t.d)
    for rep in enumerate_increasing(t.n, t.d):
        out.values[tuple_rank(rep, t.n)] = t.get(rep)
    for idx in t.indices():
        rep = tuple(sorted(idx))
        if t.get(idx) != out.get(rep):
            raise ValueError(f"not symmetric: entry at {idx} differs from entry at {rep}")
    return out


def random_symmetric(n: int, d: int, seed: int) -> SymTensor:
    """Deterministic random symmetric tensor with small integer entries in [-9, 9]."""
    rng = random.Random(seed)
    vals = [Fraction(rng.randint(-9, 9)) for _ in range(count_multisets(n, d))]
    return SymTensor(n, d, vals)


def random_dense(n: int, d: int, seed: int) -> DenseTensor:
    """Deterministic random dense tensor with small integer entries in [-9, 9]."""
    rng = random.Random(seed)
    return DenseTensor(n, d, [Fraction(rng.randint(-9, 9)) for _ in range(n**d)])
