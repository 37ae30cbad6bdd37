"""Expansion-bound families, subset verification, volumetric checks, and execution DAGs.

An expansion bound limits how many products any column subset of an encoding
can contain, as a function of the ranks of the subset's three restricted
matrices.  verify_expansion falsifies-or-passes a bound against an encoding
by enumerating or sampling subsets; loomis_whitney_check tests the volumetric
inequalities the bounds rest on; the DAG machinery checks the boundary-counting
lemma that connects subsets to schedule intervals.
"""

from __future__ import annotations

import json
import math
import random
import zlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .bilinear import BilinearAlg, SparseExactMatrix, exact_rank
from .combinatorics import ContractionSpec, count_multisets
from .contraction import AlgorithmId, ContractionKind, classify
from .exactvalue import ExactValue, floor_nth_root, max_exact, min_exact

EXHAUSTIVE_LIMIT = 14
_RANK_PRIME = 2147483647  # products of two residues fit in int64


class BoundFamily(Enum):
    MM = "mm"
    DIRECT = "direct"
    DIRECT_MV = "direct-mv"
    SYMPRES = "sympres"


@dataclass
class ExpansionBound:
    """A nondecreasing bound family evaluable at rank triples."""

    family: BoundFamily
    params: dict
    evaluate: Callable[[int, int, int], ExactValue]

    def holds(self, count: int, da: int, db: int, dc: int) -> bool:
        return ExactValue.rational(count) <= self.evaluate(da, db, dc)

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family.value}({inner})"


def bound_mm(m: int, n: int, k: int) -> ExpansionBound:
    """sqrt(dA*dB*dC); the classical matrix multiplication expansion."""
    if min(m, n, k) < 1:
        raise ValueError("matrix dimensions must be positive")

    def evaluate(da: int, db: int, dc: int) -> ExactValue:
        return ExactValue.root(Fraction(da) * db * dc, 2)

    return ExpansionBound(BoundFamily.MM, {"m": m, "n": n, "k": k}, evaluate)


def direct_q_squared(spec: ContractionSpec) -> int:
    """Integer square of the symmetry constant q for the direct algorithm."""
    s, t, v = spec.stv
    return math.comb(s + v, s) * math.comb(v + t, v) * math.comb(s + t, s)


def bound_direct(spec: ContractionSpec) -> ExpansionBound:
    """q*sqrt(dA*dB*dC) with q^2 the product of the three split binomials."""
    q2 = direct_q_squared(spec)

    def evaluate(da: int, db: int, dc: int) -> ExactValue:
        return ExactValue.root(Fraction(q2) * da * db * dc, 2)

    return ExpansionBound(
        BoundFamily.DIRECT, {"stv": spec.stv, "q2": q2}, evaluate
    )


def bound_direct_mv(spec: ContractionSpec) -> ExpansionBound:
    """Linear terms plus a min of fractional powers; only for matrix-vector-like specs."""
    if classify(spec) != ContractionKind.MATRIX_VECTOR_LIKE:
        raise ValueError("matrix-vector-like bound needs exactly one of s, t, v zero")
    s, t, v = spec.stv
    w = spec.omega
    ca = math.comb(w, min(s, v)) - 1
    cb = math.comb(w, min(v, t)) - 1
    cc = math.comb(w, min(s, t)) - 1

    def evaluate(da: int, db: int, dc: int) -> ExactValue:
        linear = Fraction(ca * da + cb * db + cc * dc)
        tail = min_exact(
            [
                ExactValue.power(da, Fraction(w, s + v)),
                ExactValue.power(db, Fraction(w, v + t)),
                ExactValue.power(dc, Fraction(w, s + t)),
            ]
        )
        return tail.plus(linear)

    return ExpansionBound(
        BoundFamily.DIRECT_MV,
        {"stv": spec.stv, "coeffs": (ca, cb, cc)},
        evaluate,
    )


def bound_sympres(spec: ContractionSpec) -> ExpansionBound:
    """min over operands of (binomial * rank) ** (omega / operand order)."""
    if classify(spec) == ContractionKind.DEGENERATE:
        raise ValueError("symmetry preserving bound needs at most one of s, t, v zero")
    s, t, v = spec.stv
    w = spec.omega

    def evaluate(da: int, db: int, dc: int) -> ExactValue:
        return min_exact(
            [
                ExactValue.power(Fraction(math.comb(w, t)) * da, Fraction(w, s + v)),
                ExactValue.power(Fraction(math.comb(w, s)) * db, Fraction(w, v + t)),
                ExactValue.power(Fraction(math.comb(w, v)) * dc, Fraction(w, s + t)),
            ]
        )

    return ExpansionBound(BoundFamily.SYMPRES, {"stv": spec.stv}, evaluate)


def bound_for(alg: AlgorithmId, spec: ContractionSpec) -> ExpansionBound:
    """The matching bound family for an encoding of the given algorithm."""
    if alg is AlgorithmId.NONSYM:
        return bound_mm(spec.n**spec.s, spec.n**spec.t, spec.n**spec.v)
    if alg is AlgorithmId.DIRECT:
        return bound_direct(spec)
    if alg is AlgorithmId.SYMPRES:
        return bound_sympres(spec)
    raise ValueError(f"unknown algorithm {alg}")


def max_over_simplex(bound: ExpansionBound, cache_size: int) -> ExactValue:
    """Largest bound value over non-negative integer triples summing to 3H.

    Closed forms: H^(3/2) for MM, q*H^(3/2) for DIRECT, and the upper form
    (3*C(omega,kappa)*H)^(omega/kappa) for SYMPRES.  The matrix-vector family
    falls back to the integer search.
    """
    if cache_size < 1:
        raise ValueError("cache size must be >= 1")
    h = cache_size
    if bound.family is BoundFamily.MM:
        return ExactValue.root(Fraction(h) ** 3, 2)
    if bound.family is BoundFamily.DIRECT:
        return ExactValue.root(Fraction(bound.params["q2"]) * h**3, 2)
    if bound.family is BoundFamily.SYMPRES:
        s, t, v = bound.params["stv"]
        spec_w = s + t + v
        kappa = max(s + v, v + t, s + t)
        base = Fraction(3 * math.comb(spec_w, kappa) * h)
        return ExactValue.power(base, Fraction(spec_w, kappa))
    return max_over_simplex_search(bound, h)


def max_over_simplex_search(bound: ExpansionBound, cache_size: int) -> ExactValue:
    """Brute-force integer search over the simplex; the independent cross-check."""
    if cache_size < 1:
        raise ValueError("cache size must be >= 1")
    total = 3 * cache_size
    best = ExactValue.rational(0)
    for ca in range(total + 1):
        for cb in range(total - ca + 1):
            cc = total - ca - cb
            val = bound.evaluate(ca, cb, cc)
            if val.compare(best) > 0:
                best = val
    return best


# --- subset verification ----------------------------------------------------


@dataclass
class Violation:
    columns: tuple[int, ...]
    ranks: tuple[int, int, int]
    bound_value: str
    actual_rank: int

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "ranks": list(self.ranks),
            "bound_value": self.bound_value,
            "actual_rank": self.actual_rank,
        }


@dataclass
class VerificationReport:
    subsets_checked: int
    violations: list[Violation]
    mode: str  # "exhaustive" | "sampled"
    seed: int | None
    instance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def verification_level(self) -> str:
        """Exhaustive runs certify the bound on the instance; sampling only probes it."""
        return "certified" if self.mode == "exhaustive" else "spot-checked"

    def to_json(self) -> str:
        payload = {
            "subsets_checked": self.subsets_checked,
            "violations": [v.to_dict() for v in self.violations],
            "mode": self.mode,
            "verification_level": self.verification_level(),
            "seed": self.seed,
            "instance": self.instance,
            "passed": self.passed,
        }
        return json.dumps(payload, sort_keys=True, indent=2)


class _RankOracle:
    """Subset ranks for one sparse matrix, sized for many repeated queries.

    Columns with a single nonzero make rank a distinct-row count.  Otherwise
    ranks are computed modulo a large prime (a lower bound on the rational
    rank, which is the safe direction for nondecreasing bounds); callers
    re-check with exact elimination before reporting a violation.
    """

    def __init__(self, m: SparseExactMatrix):
        self.matrix = m
        cols = m.by_col()
        self.single = all(len(col) == 1 for col in cols)
        if self.single:
            self.col_rows = [col[0][0] if col else -1 for col in cols]
        else:
            dense = np.zeros((m.rows, m.cols), dtype=np.int64)
            for (r, c), v in m.data.items():
                dense[r, c] = (
                    v.numerator * pow(v.denominator, _RANK_PRIME - 2, _RANK_PRIME)
                ) % _RANK_PRIME
            self.dense = dense

    def rank(self, columns: Sequence[int]) -> int:
        if not columns:
            return 0
        if self.single:
            return len({self.col_rows[c] for c in columns})
        sub = self.dense[:, list(columns)]
        if sub.shape[0] > sub.shape[1]:
            sub = sub.T
        return _rank_mod_p(sub.copy())

    def exact(self, columns: Sequence[int]) -> int:
        return exact_rank(self.matrix.column_subset(list(columns)))


def _rank_mod_p(m: np.ndarray) -> int:
    p = _RANK_PRIME
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r, c]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank, c:] = (m[rank, c:] * inv) % p
        below = m[rank + 1 :, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            m[rank + 1 + nz, c:] = (
                m[rank + 1 + nz, c:] - np.outer(below[nz], m[rank, c:])
            ) % p
        rank += 1
        if rank == rows:
            break
    return rank


def derive_seed(seed: int, *key: object) -> int:
    """Stable per-instance RNG seed (process-hash independent)."""
    text = "|".join(str(k) for k in key)
    return seed ^ zlib.crc32(text.encode())


def verify_expansion(
    alg: BilinearAlg,
    bound: ExpansionBound,
    mode: str = "exhaustive",
    trials: int = 2000,
    seed: int = 0,
    collect_tuples: bool = False,
) -> VerificationReport:
    """Assert |subset| <= bound(ranks of restricted matrices) over column subsets.

    Exhaustive mode enumerates all subsets (rank_cols <= 14 required); sampled
    mode draws `trials` subsets, size-uniform then uniform within the size.
    """
    r = alg.rank_cols
    oracles = (_RankOracle(alg.fa), _RankOracle(alg.fb), _RankOracle(alg.fc))
    violations: list[Violation] = []
    checked = 0
    collected: list[tuple[int, ...]] = []

    def check(columns: tuple[int, ...]) -> None:
        nonlocal checked
        checked += 1
        da, db, dc = (o.rank(columns) for o in oracles)
        if not bound.holds(len(columns), da, db, dc):
            da, db, dc = (o.exact(columns) for o in oracles)
            if not bound.holds(len(columns), da, db, dc):
                violations.append(
                    Violation(
                        columns,
                        (da, db, dc),
                        bound.evaluate(da, db, dc).describe(),
                        len(columns),
                    )
                )

    if mode == "exhaustive":
        if r > EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"rank_cols={r} too large for exhaustive verification (limit {EXHAUSTIVE_LIMIT})"
            )
        for mask in range(1 << r):
            columns = tuple(c for c in range(r) if mask >> c & 1)
            check(columns)
            if collect_tuples and len(collected) < 64 and columns:
                collected.append(columns)
    elif mode == "sampled":
        rng = random.Random(seed)
        for _ in range(trials):
            size = rng.randint(0, r)
            columns = tuple(sorted(rng.sample(range(r), size)))
            check(columns)
            if collect_tuples and len(collected) < 64 and columns:
                collected.append(columns)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    instance = {
        "bound": bound.label(),
        "rank_cols": r,
        "dims": list(alg.dims),
        "algorithm": alg.alg_id.value if alg.alg_id else None,
        "spec": alg.spec.label() if alg.spec else None,
        "trials": trials if mode == "sampled" else None,
    }
    report = VerificationReport(checked, violations, mode, seed, instance)
    if collect_tuples:
        report.instance["collected_subsets"] = [list(c) for c in collected]
    return report


# --- volumetric inequalities -------------------------------------------------


@dataclass
class LoomisWhitneyResult:
    passed: bool
    set_size: int
    projection_sizes: dict[tuple[int, ...], int]
    union_size: int
    product_holds: bool
    union_holds: bool

    def witness(self) -> dict:
        return {
            "set_size": self.set_size,
            "projections": {"/".join(map(str, k)): v for k, v in self.projection_sizes.items()},
            "union_size": self.union_size,
        }


def loomis_whitney_check(tuples: Iterable[tuple[int, ...]], r: int) -> LoomisWhitneyResult:
    """Both volumetric inequalities on a set of m-tuples, compared exactly.

    Product form: |V|^C(m-1, r-1) <= prod over position subsets of |L_s|.
    Union form:   |V|^r <= |L|^m for the union L of all projections.
    """
    vset = {tuple(t) for t in tuples}
    if not vset:
        return LoomisWhitneyResult(True, 0, {}, 0, True, True)
    lengths = {len(t) for t in vset}
    if len(lengths) != 1:
        raise ValueError(f"ragged tuple lengths: {sorted(lengths)}")
    m = lengths.pop()
    if not 1 <= r <= m:
        raise ValueError(f"projection order {r} out of range [1, {m}]")
    proj_sizes: dict[tuple[int, ...], int] = {}
    union: set[tuple[int, ...]] = set()
    for positions in combinations(range(m), r):
        proj = {tuple(t[i] for i in positions) for t in vset}
        proj_sizes[positions] = len(proj)
        union |= proj
    size = len(vset)
    prod = 1
    for p in proj_sizes.values():
        prod *= p
    product_holds = size ** math.comb(m - 1, r - 1) <= prod
    union_holds = size**r <= len(union) ** m
    return LoomisWhitneyResult(
        product_holds and union_holds, size, proj_sizes, len(union), product_holds, union_holds
    )


# --- execution DAGs ----------------------------------------------------------


@dataclass
class ExecutionDag:
    """Concrete dependency graph for one encoding: inputs, summation trees,
    products, and output accumulation trees."""

    part: list[str]  # "A" | "B" | "C" per vertex
    kind: list[str]  # "input" | "add" | "mul"
    is_output: list[bool]
    edges: list[tuple[int, int]]
    inputs: set[int]
    products: set[int]
    out_edges: dict[int, list[int]] = field(default_factory=dict)
    in_edges: dict[int, list[int]] = field(default_factory=dict)

    def finalize(self) -> "ExecutionDag":
        for u, w in self.edges:
            self.out_edges.setdefault(u, []).append(w)
            self.in_edges.setdefault(w, []).append(u)
        return self

    @property
    def vertex_count(self) -> int:
        return len(self.part)


def build_dag_naive(alg: BilinearAlg) -> ExecutionDag:
    """Left-to-right binary summation trees for every linear combination and
    every output accumulation."""
    part: list[str] = []
    kind: list[str] = []
    is_output: list[bool] = []
    edges: list[tuple[int, int]] = []
    inputs: set[int] = set()
    products: set[int] = set()

    def new_vertex(p: str, k: str) -> int:
        part.append(p)
        kind.append(k)
        is_output.append(False)
        return len(part) - 1

    a_in = [new_vertex("A", "input") for _ in range(alg.fa.rows)]
    b_in = [new_vertex("B", "input") for _ in range(alg.fb.rows)]
    inputs.update(a_in)
    inputs.update(b_in)

    def combo_root(rows: list[int], base: list[int], side: str) -> int:
        cur = base[rows[0]]
        for r in rows[1:]:
            nxt = new_vertex(side, "add")
            edges.append((cur, nxt))
            edges.append((base[r], nxt))
            cur = nxt
        return cur

    fa_cols, fb_cols, fc_cols = alg.fa.by_col(), alg.fb.by_col(), alg.fc.by_col()
    prod_of_col = []
    for c in range(alg.rank_cols):
        a_root = combo_root([r for r, _ in fa_cols[c]], a_in, "A")
        b_root = combo_root([r for r, _ in fb_cols[c]], b_in, "B")
        prod = new_vertex("C", "mul")
        edges.append((a_root, prod))
        edges.append((b_root, prod))
        products.add(prod)
        prod_of_col.append(prod)

    by_row: dict[int, list[int]] = {}
    for c in range(alg.rank_cols):
        for r, _ in fc_cols[c]:
            by_row.setdefault(r, []).append(prod_of_col[c])
    for r in sorted(by_row):
        terms = by_row[r]
        cur = terms[0]
        for term in terms[1:]:
            nxt = new_vertex("C", "add")
            edges.append((cur, nxt))
            edges.append((term, nxt))
            cur = nxt
        is_output[cur] = True

    return ExecutionDag(part, kind, is_output, edges, inputs, products).finalize()


def zeta(dag: ExecutionDag, z: set[int]) -> tuple[int, int, int]:
    """Boundary counts of a computed vertex subset, per the literal set definitions.

    A/B expansions count external A/B vertices (inputs included) feeding Z;
    the C expansion counts Z's C-vertices plus Z-vertices feeding C-vertices
    outside Z.
    """
    if z & dag.inputs:
        raise ValueError("computed subset must not contain input vertices")
    za = set()
    zb = set()
    for u in z:
        for v in dag.in_edges.get(u, ()):
            if v not in z:
                if dag.part[v] == "A":
                    za.add(v)
                elif dag.part[v] == "B":
                    zb.add(v)
    zc = {u for u in z if dag.part[u] == "C"}
    for u in z:
        for w in dag.out_edges.get(u, ()):
            if w not in z and dag.part[w] == "C":
                zc.add(u)
                break
    return len(za), len(zb), len(zc)


def check_dag_expansion(
    dag: ExecutionDag,
    bound: ExpansionBound,
    trials: int = 200,
    seed: int = 0,
) -> VerificationReport:
    """Sample computed subsets (downward closed on the A/B sides) and assert
    |Z and products| <= bound(zeta expansions)."""
    rng = random.Random(seed)
    products = sorted(dag.products)
    adds_c = [
        u
        for u in range(dag.vertex_count)
        if dag.part[u] == "C" and dag.kind[u] == "add"
    ]
    violations: list[Violation] = []
    checked = 0
    for _ in range(trials):
        size = rng.randint(0, len(products))
        chosen = rng.sample(products, size)
        z = set(chosen)
        stack = list(chosen)
        while stack:
            u = stack.pop()
            for v in dag.in_edges.get(u, ()):
                if v not in z and v not in dag.inputs and dag.part[v] in ("A", "B"):
                    z.add(v)
                    stack.append(v)
        if adds_c:
            extra = rng.sample(adds_c, rng.randint(0, len(adds_c)))
            z.update(extra)
        za, zb, zc = zeta(dag, z)
        count = len(z & dag.products)
        checked += 1
        if not bound.holds(count, za, zb, zc):
            violations.append(
                Violation(
                    tuple(sorted(z)),
                    (za, zb, zc),
                    bound.evaluate(za, zb, zc).describe(),
                    count,
                )
            )
    return VerificationReport(
        checked,
        violations,
        "sampled",
        seed,
        {"bound": bound.label(), "kind": "execution-dag", "products": len(products)},
    )
