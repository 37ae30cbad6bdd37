"""Sparse exact encodings of the contraction algorithms as bilinear algorithm triples.

An encoding is three sparse rational matrices (FA, FB, FC) with a shared
column count; column i describes one product: FA and FB columns give the
input linear combinations, FC columns say how the product enters each output.
apply computes FC @ ((FA^T a) * (FB^T b)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

from .combinatorics import (
    ContractionSpec,
    count_multisets,
    enumerate_increasing,
    merge_sorted,
    multiplicity_factor,
    partitions,
    split_multiplicity,
    tuple_rank,
)
from .contraction import AlgorithmId, ContractionKind, classify


class SparseExactMatrix:
    """Triplet-stored matrix over exact rationals; no explicit zeros kept."""

    __slots__ = ("rows", "cols", "data", "_by_col")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.data: dict[tuple[int, int], Fraction] = {}
        self._by_col: list[list[tuple[int, Fraction]]] | None = None
        if data:
            for (r, c), v in data.items():
                self.add(r, c, v)

    def add(self, r: int, c: int, v) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ValueError(f"entry ({r}, {c}) out of range {self.rows}x{self.cols}")
        v = Fraction(v)
        cur = self.data.get((r, c), Fraction(0)) + v
        if cur:
            self.data[(r, c)] = cur
        else:
            self.data.pop((r, c), None)
        self._by_col = None

    def by_col(self) -> list[list[tuple[int, Fraction]]]:
        if self._by_col is None:
            cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.cols)]
            for (r, c), v in sorted(self.data.items(), key=lambda kv: (kv[0][1], kv[0][0])):
                cols[c].append((r, v))
            self._by_col = cols
        return self._by_col

    def column_nnz(self, c: int) -> int:
        return len(self.by_col()[c])

    def transpose_dot(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """M^T vec: one entry per column."""
        if len(vec) != self.rows:
            raise ValueError(f"vector length {len(vec)} != rows {self.rows}")
        out = []
        for col in self.by_col():
            acc = Fraction(0)
            for r, v in col:
                acc += v * vec[r]
            out.append(acc)
        return out

    def dot(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """M vec: one entry per row."""
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} != cols {self.cols}")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self.data.items():
            out[r] += v * vec[c]
        return out

    def column_subset(self, columns: Sequence[int]) -> "SparseExactMatrix":
        seen = set()
        for c in columns:
            if not 0 <= c < self.cols:
                raise ValueError(f"column {c} out of range")
            if c in seen:
                raise ValueError(f"duplicate column {c}")
            seen.add(c)
        out = SparseExactMatrix(self.rows, len(columns))
        by_col = self.by_col()
        for new_c, c in enumerate(columns):
            for r, v in by_col[c]:
                out.data[(r, new_c)] = v
        return out

    def to_dense(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            m[r][c] = v
        return m

    def to_lines(self) -> list[str]:
        """Dump format: 'sparsemat rows cols' header plus 'r c num/den' lines."""
        out = [f"sparsemat {self.rows} {self.cols}"]
        for (r, c), v in sorted(self.data.items()):
            out.append(f"{r} {c} {v.numerator}/{v.denominator}")
        return out

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "SparseExactMatrix":
        it = iter(lines)
        header = next(it).split()
        if len(header) != 3 or header[0] != "sparsemat":
            raise ValueError("expected 'sparsemat rows cols' header")
        m = cls(int(header[1]), int(header[2]))
        for line in it:
            line = line.strip()
            if not line:
                continue
            r, c, v = line.split()
            m.add(int(r), int(c), Fraction(v))
        return m

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseExactMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.data == other.data
        )


def exact_rank(m: SparseExactMatrix) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination.

    Rows are scaled to integers first; row scaling does not change rank.
    """
    rows = []
    dense = m.to_dense()
    for row in dense:
        if any(row):
            lcm = 1
            for v in row:
                if v:
                    lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
            rows.append([int(v * lcm) for v in row])
    if not rows:
        return 0
    ncols = m.cols
    rank = 0
    prev_pivot = 1
    for c in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][c]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot = rows[rank][c]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][c]
            row_r, row_p = rows[r], rows[rank]
            for cc in range(c, ncols):
                row_r[cc] = (pivot * row_r[cc] - factor * row_p[cc]) // prev_pivot
        prev_pivot = pivot
        rank += 1
        if rank == len(rows):
            break
    return rank


@dataclass
class BilinearAlg:
    """A bilinear algorithm triple with domain descriptors."""

    fa: SparseExactMatrix
    fb: SparseExactMatrix
    fc: SparseExactMatrix
    spec: ContractionSpec | None = None
    alg_id: AlgorithmId | None = None
    domains: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.fa.cols == self.fb.cols == self.fc.cols):
            raise ValueError("FA, FB, FC must share a column count")
        for name, m in (("FA", self.fa), ("FB", self.fb)):
            for c in range(m.cols):
                if m.column_nnz(c) == 0:
                    raise ValueError(f"{name} column {c} has no nonzero: product lacks an operand")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.fa.rows, self.fb.rows, self.fc.rows)

    @property
    def rank_cols(self) -> int:
        return self.fa.cols

    def apply(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
        """FC @ ((FA^T a) * (FB^T b))."""
        left = self.fa.transpose_dot([Fraction(x) for x in a])
        right = self.fb.transpose_dot([Fraction(x) for x in b])
        return self.fc.dot([x * y for x, y in zip(left, right)])

    def subset(self, columns: Sequence[int]) -> "BilinearAlg":
        """Restriction to a set of products; dimensions are unchanged."""
        out = BilinearAlg.__new__(BilinearAlg)
        out.fa = self.fa.column_subset(columns)
        out.fb = self.fb.column_subset(columns)
        out.fc = self.fc.column_subset(columns)
        out.spec = self.spec
        out.alg_id = self.alg_id
        out.domains = dict(self.domains, subset_of=self.domains.get("products", "?"))
        return out

    def is_irreducible(self) -> bool:
        """Full row rank of all three matrices."""
        return (
            exact_rank(self.fa) == self.fa.rows
            and exact_rank(self.fb) == self.fb.rows
            and exact_rank(self.fc) == self.fc.rows
        )


def _cube_rank(idx: Sequence[int], n: int) -> int:
    off = 0
    for x in idx:
        off = off * n + (x - 1)
    return off


def build_encoding(alg: AlgorithmId, spec: ContractionSpec) -> BilinearAlg:
    """Canonical sparse encoding of an algorithm, rows and columns in lex order.

    Column counts: n^omega for NONSYM, the product of the three packed space
    sizes for DIRECT, and C(n+omega-1, omega) for SYMPRES.  A degenerate spec
    under SYMPRES coincides with DIRECT and is encoded as such.
    """
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    st_fact = math.factorial(s) * math.factorial(t)

    if alg is AlgorithmId.NONSYM:
        cube = lambda d: list(iproduct(range(1, n + 1), repeat=d))
        fa = SparseExactMatrix(n ** (s + v), n**spec.omega)
        fb = SparseExactMatrix(n ** (v + t), n**spec.omega)
        fc = SparseExactMatrix(n ** (s + t), n**spec.omega)
        col = 0
        for j in cube(s):
            for l in cube(t):
                for k in cube(v):
                    fa.data[(_cube_rank(j + k, n), col)] = Fraction(1)
                    fb.data[(_cube_rank(k + l, n), col)] = Fraction(1)
                    fc.data[(_cube_rank(j + l, n), col)] = Fraction(1)
                    col += 1
        domains = {
            "inputs_a": f"cube order {s + v}",
            "inputs_b": f"cube order {v + t}",
            "outputs": f"cube order {s + t}",
            "products": f"cube order {spec.omega}",
        }
        return BilinearAlg(fa, fb, fc, spec, alg, domains)

    if alg is AlgorithmId.DIRECT or (
        alg is AlgorithmId.SYMPRES and classify(spec) == ContractionKind.DEGENERATE
    ):
        jspace = enumerate_increasing(n, s)
        lspace = enumerate_increasing(n, t)
        kspace = enumerate_increasing(n, v)
        ncols = len(jspace) * len(lspace) * len(kspace)
        fa = SparseExactMatrix(count_multisets(n, s + v), ncols)
        fb = SparseExactMatrix(count_multisets(n, v + t), ncols)
        fc = SparseExactMatrix(count_multisets(n, s + t), ncols)
        col = 0
        for j in jspace:
            for l in lspace:
                for k in kspace:
                    fa.data[(tuple_rank(merge_sorted(j, k), n), col)] = Fraction(1)
                    fb.data[(tuple_rank(merge_sorted(k, l), n), col)] = Fraction(1)
                    # split multiplicity keeps apply() equal to the packed
                    # algorithm on outputs with repeated indices
                    fc.data[(tuple_rank(merge_sorted(j, l), n), col)] = Fraction(
                        st_fact * multiplicity_factor(k) * split_multiplicity(j, l)
                    )
                    col += 1
        domains = {
            "inputs_a": f"increasing order {s + v}",
            "inputs_b": f"increasing order {v + t}",
            "outputs": f"increasing order {s + t}",
            "products": f"increasing {s}+{t}+{v} triples",
        }
        return BilinearAlg(fa, fb, fc, spec, alg, domains)

    if alg is AlgorithmId.SYMPRES:
        if spec.omega < 1:
            raise ValueError("symmetry preserving encoding needs omega >= 1")
        ispace = enumerate_increasing(n, spec.omega)
        fa = SparseExactMatrix(count_multisets(n, s + v), len(ispace))
        fb = SparseExactMatrix(count_multisets(n, v + t), len(ispace))
        fc = SparseExactMatrix(count_multisets(n, s + t), len(ispace))
        for col, i in enumerate(ispace):
            for j, a in partitions(i, s + v, t, distinct=True):
                fa.data[(tuple_rank(j, n), col)] = Fraction(
                    math.factorial(t), multiplicity_factor(a)
                )
            for l, b in partitions(i, v + t, s, distinct=True):
                fb.data[(tuple_rank(l, n), col)] = Fraction(
                    math.factorial(s), multiplicity_factor(b)
                )
            for h, c in partitions(i, s + t, v, distinct=True):
                fc.data[(tuple_rank(h, n), col)] = Fraction(
                    st_fact * multiplicity_factor(c)
                )
        domains = {
            "inputs_a": f"increasing order {s + v}",
            "inputs_b": f"increasing order {v + t}",
            "outputs": f"increasing order {s + t}",
            "products": f"increasing order {spec.omega}",
        }
        return BilinearAlg(fa, fb, fc, spec, alg, domains)

    raise ValueError(f"unknown algorithm {alg}")
