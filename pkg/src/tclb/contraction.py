"""The three contraction algorithms over exact scalars, plus the brute-force oracle.

Algorithms:
  NONSYM  - evaluate every product over the full index cube (unfolded matrix
            multiplication of the operands).
  DIRECT  - evaluate only the unique products of packed symmetric operands,
            scaling by split and multiset multiplicities.
  SYMPRES - form per-supertuple linear combinations of both operands, take one
            product per increasing omega-tuple, accumulate, then subtract a
            correction so the result equals DIRECT exactly.

The oracle runs the literal symmetrized definition (sum over all output-index
permutations) and is kept independent of the packed algorithms it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .combinatorics import (
    ContractionSpec,
    IndexTuple,
    count_multisets,
    enumerate_increasing,
    merge_sorted,
    multiplicity_factor,
    partitions,
    split_multiplicity,
    tuple_rank,
)
from .tensors import DenseTensor, SymTensor, pack, unpack


class AlgorithmId(Enum):
    NONSYM = "nonsym"
    DIRECT = "direct"
    SYMPRES = "sympres"


class ContractionKind(Enum):
    MATRIX_VECTOR_LIKE = "matrix-vector-like"
    MATRIX_MATRIX_LIKE = "matrix-matrix-like"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class MultCount:
    high_order: int
    correction: int

    @property
    def total(self) -> int:
        return self.high_order + self.correction


def classify(spec: ContractionSpec) -> ContractionKind:
    zeros = sum(1 for x in spec.stv if x == 0)
    if zeros == 0:
        return ContractionKind.MATRIX_MATRIX_LIKE
    if zeros == 1:
        return ContractionKind.MATRIX_VECTOR_LIKE
    return ContractionKind.DEGENERATE


def _check_operands(a, b, spec: ContractionSpec) -> None:
    if a.n != spec.n or b.n != spec.n:
        raise ValueError(f"operand dimension mismatch: {a.n}, {b.n} vs spec n={spec.n}")
    if a.d != spec.s + spec.v:
        raise ValueError(f"A has order {a.d}, expected s+v={spec.s + spec.v}")
    if b.d != spec.v + spec.t:
        raise ValueError(f"B has order {b.d}, expected v+t={spec.v + spec.t}")


def contract_oracle(
    a: DenseTensor, b: DenseTensor, spec: ContractionSpec, symmetrize: bool
) -> DenseTensor:
    """Literal triple-loop contraction; with symmetrize, the full permutation sum.

    Without symmetrize: C[j+l] = sum_k A[j+k] * B[k+l] over the cube.
    With symmetrize: for each output index, sum the inner contraction over all
    (s+t)! splits of its permutations (repeats included), yielding a symmetric
    result.
    """
    _check_operands(a, b, spec)
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    out = DenseTensor(n, s + t)
    kspace = list(product(range(1, n + 1), repeat=v))
    for idx in out.indices():
        if symmetrize:
            acc = Fraction(0)
            for perm in permutations(idx):
                j, l = perm[:s], perm[s:]
                for k in kspace:
                    acc += a.get(j + k) * b.get(k + l)
        else:
            j, l = idx[:s], idx[s:]
            acc = Fraction(0)
            for k in kspace:
                acc += a.get(j + k) * b.get(k + l)
        out.set(idx, acc)
    return out


def contract_nonsym(a: DenseTensor, b: DenseTensor, spec: ContractionSpec) -> DenseTensor:
    """Unfolded matrix multiplication: (n^s x n^v) times (n^v x n^t)."""
    _check_operands(a, b, spec)
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    jspace = list(product(range(1, n + 1), repeat=s))
    lspace = list(product(range(1, n + 1), repeat=t))
    kspace = list(product(range(1, n + 1), repeat=v))
    out = DenseTensor(n, s + t)
    for j in jspace:
        arow = [a.get(j + k) for k in kspace]
        for l in lspace:
            acc = Fraction(0)
            for ki, k in enumerate(kspace):
                acc += arow[ki] * b.get(k + l)
            out.set(j + l, acc)
    return out


def contract_direct(a: SymTensor, b: SymTensor, spec: ContractionSpec) -> SymTensor:
    """Packed symmetric contraction over unique products.

    One multiplication per (j, l, k) triple of increasing tuples; each product
    is accumulated into its output sort(j+l) with coefficient
    s!t! * rho(k) * (number of splits of the output yielding (j, l)).
    """
    _check_operands(a, b, spec)
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    st_fact = math.factorial(s) * math.factorial(t)
    out = SymTensor(n, s + t)
    kspace = [(k, multiplicity_factor(k)) for k in enumerate_increasing(n, v)]
    for j in enumerate_increasing(n, s):
        for l in enumerate_increasing(n, t):
            coeff = st_fact * split_multiplicity(j, l)
            acc = Fraction(0)
            for k, rho in kspace:
                acc += rho * a.get(j + k) * b.get(k + l)
            h = merge_sorted(j, l)
            out.values[tuple_rank(h, n)] += coeff * acc
    return out


# --- symmetry preserving algorithm -----------------------------------------


def _hat_coefficients(i: IndexTuple, keep: int, drop: int, drop_fact: int):
    """Distinct splits of i into (kept, dropped) with weight drop_fact/rho(dropped)."""
    return [
        (kept, Fraction(drop_fact, multiplicity_factor(dropped)))
        for kept, dropped in partitions(i, keep, drop, distinct=True)
    ]


@dataclass(frozen=True)
class CorrectionProduct:
    """One multiplication: (sum coeff*A_rank) * (sum coeff*B_rank).

    One of the two sides is usually a single entry; combinations appear on
    whichever side the residual factors.
    """

    a_combo: tuple[tuple[int, Fraction], ...]  # (packed A rank, coefficient), sorted
    b_combo: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class CorrectionPlan:
    products: tuple[CorrectionProduct, ...]
    # (packed C rank, product index, scale): C[h] -= scale * product value
    accums: tuple[tuple[int, int, Fraction], ...]


def _residual_terms(spec: ContractionSpec) -> dict[tuple[int, int, int], Fraction]:
    """Weighted (A-rank, B-rank -> C-rank) multiset: product stage minus exact target."""
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    st_fact = math.factorial(s) * math.factorial(t)
    terms: dict[tuple[int, int, int], Fraction] = {}
    for i in enumerate_increasing(n, spec.omega):
        a_side = [
            (tuple_rank(j, n), c)
            for j, c in _hat_coefficients(i, s + v, t, math.factorial(t))
        ]
        b_side = [
            (tuple_rank(l, n), c)
            for l, c in _hat_coefficients(i, v + t, s, math.factorial(s))
        ]
        c_side = [
            (tuple_rank(h, n), st_fact * multiplicity_factor(c))
            for h, c in partitions(i, s + t, v, distinct=True)
        ]
        for jr, ca in a_side:
            for lr, cb in b_side:
                w = ca * cb
                for hr, cc in c_side:
                    key = (jr, lr, hr)
                    terms[key] = terms.get(key, Fraction(0)) + w * cc
    for h in enumerate_increasing(n, s + t):
        hr = tuple_rank(h, n)
        for j, l in partitions(h, s, t):
            for k in enumerate_increasing(n, v):
                key = (
                    tuple_rank(merge_sorted(j, k), n),
                    tuple_rank(merge_sorted(k, l), n),
                    hr,
                )
                terms[key] = terms.get(key, Fraction(0)) - st_fact * multiplicity_factor(k)
    return {key: w for key, w in terms.items() if w}


@lru_cache(maxsize=None)
def correction_plan(spec: ContractionSpec) -> CorrectionPlan:
    """Correction as a small bilinear stage, derived by term accounting.

    The residual multiset is covered by three product families so that the
    multiplication count stays low order (~n^(omega-1)):
      - raw products A_j*B_l reused by several outputs,
      - per-(B-entry, output) linear combinations of A,
      - per-(A-entry, output) linear combinations of B,
    routing each leftover term to whichever family folds more terms into one
    product.  Products with identical normalized factors are shared; the
    output accumulation carries the per-output scale.
    """
    terms = _residual_terms(spec)

    # Fold potentials: how many residual terms each candidate product key covers.
    raw_pot: dict[tuple[int, int], int] = {}
    a_pot: dict[tuple[int, int], int] = {}
    b_pot: dict[tuple[int, int], int] = {}
    for jr, lr, hr in terms:
        raw_pot[(jr, lr)] = raw_pot.get((jr, lr), 0) + 1
        a_pot[(lr, hr)] = a_pot.get((lr, hr), 0) + 1
        b_pot[(jr, hr)] = b_pot.get((jr, hr), 0) + 1

    raw: list[tuple[int, int, int]] = []
    # (lr, hr) -> {jr: w} for A-side folds; (jr, hr) -> {lr: w} for B-side
    a_groups: dict[tuple[int, int], dict[int, Fraction]] = {}
    b_groups: dict[tuple[int, int], dict[int, Fraction]] = {}
    for key in terms:
        jr, lr, hr = key
        pa, pb, pr = a_pot[(lr, hr)], b_pot[(jr, hr)], raw_pot[(jr, lr)]
        if pa >= pb and pa >= pr:
            a_groups.setdefault((lr, hr), {})[jr] = terms[key]
        elif pb >= pr:
            b_groups.setdefault((jr, hr), {})[lr] = terms[key]
        else:
            raw.append(key)

    product_index: dict[tuple, int] = {}
    products: list[CorrectionProduct] = []
    accums: list[tuple[int, int, Fraction]] = []

    def emit(a_combo, b_combo, hr, scale):
        key = (a_combo, b_combo)
        idx = product_index.get(key)
        if idx is None:
            idx = len(products)
            product_index[key] = idx
            products.append(CorrectionProduct(a_combo, b_combo))
        accums.append((hr, idx, scale))

    one = Fraction(1)
    for jr, lr, hr in sorted(raw):
        emit(((jr, one),), ((lr, one),), hr, terms[(jr, lr, hr)])
    for (lr, hr), combo in sorted(a_groups.items()):
        items = sorted(combo.items())
        scale = items[0][1]
        emit(tuple((jr, w / scale) for jr, w in items), ((lr, one),), hr, scale)
    for (jr, hr), combo in sorted(b_groups.items()):
        items = sorted(combo.items())
        scale = items[0][1]
        emit(((jr, one),), tuple((lr, w / scale) for lr, w in items), hr, scale)
    return CorrectionPlan(tuple(products), tuple(sorted(accums)))


@dataclass
class SympresResult:
    output: SymTensor
    z_tensor: SymTensor  # product-stage accumulation, before correction
    stage1_products: int
    correction_products: int


def sympres_run(a: SymTensor, b: SymTensor, spec: ContractionSpec) -> SympresResult:
    """Run the symmetry preserving algorithm, reporting stage statistics.

    Degenerate specs (two or more of s, t, v zero) coincide with the direct
    algorithm and are delegated to it.
    """
    _check_operands(a, b, spec)
    if classify(spec) == ContractionKind.DEGENERATE:
        out = contract_direct(a, b, spec)
        return SympresResult(out, out, count_multisets(spec.n, spec.omega), 0)

    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    omega = spec.omega
    st_fact = math.factorial(s) * math.factorial(t)
    z = SymTensor(n, s + t)
    stage1 = 0
    for i in enumerate_increasing(n, omega):
        a_hat = Fraction(0)
        for j, c in _hat_coefficients(i, s + v, t, math.factorial(t)):
            a_hat += c * a.get(j)
        b_hat = Fraction(0)
        for l, c in _hat_coefficients(i, v + t, s, math.factorial(s)):
            b_hat += c * b.get(l)
        z_hat = a_hat * b_hat
        stage1 += 1
        for h, c in partitions(i, s + t, v, distinct=True):
            z.values[tuple_rank(h, n)] += st_fact * multiplicity_factor(c) * z_hat

    plan = correction_plan(spec)
    out = SymTensor(n, s + t, list(z.values))
    prod_vals = []
    for prod in plan.products:
        left = sum((w * a.values[jr] for jr, w in prod.a_combo), Fraction(0))
        right = sum((w * b.values[lr] for lr, w in prod.b_combo), Fraction(0))
        prod_vals.append(left * right)
    for hr, idx, scale in plan.accums:
        out.values[hr] -= scale * prod_vals[idx]
    return SympresResult(out, z, stage1, len(plan.products))


def contract_sympres(a: SymTensor, b: SymTensor, spec: ContractionSpec) -> SymTensor:
    return sympres_run(a, b, spec).output


def count_multiplications(alg: AlgorithmId, spec: ContractionSpec) -> MultCount:
    """Products taken by each algorithm: n^omega, prod of packed sizes, or C(n+w-1,w)."""
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    if alg is AlgorithmId.NONSYM:
        return MultCount(n**spec.omega, 0)
    if alg is AlgorithmId.DIRECT:
        return MultCount(
            count_multisets(n, s) * count_multisets(n, t) * count_multisets(n, v), 0
        )
    if alg is AlgorithmId.SYMPRES:
        if classify(spec) == ContractionKind.DEGENERATE:
            return MultCount(count_multisets(n, spec.omega), 0)
        return MultCount(count_multisets(n, spec.omega), len(correction_plan(spec).products))
    raise ValueError(f"unknown algorithm {alg}")


def sweep_specs(max_omega: int = 4, dims=(2, 3, 4)) -> list[ContractionSpec]:
    """The standing desk-scale sweep: every (s, t, v) with omega <= max_omega."""
    out = []
    for n in dims:
        for s in range(max_omega + 1):
            for t in range(max_omega + 1 - s):
                for v in range(max_omega + 1 - s - t):
                    out.append(ContractionSpec(n, s, t, v))
    return out
