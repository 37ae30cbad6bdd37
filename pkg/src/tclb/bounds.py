"""Closed-form communication lower bounds and the asymptotic summary table.

Q bounds the data moved between memory and a cache of H elements by any
sequential schedule; W bounds the elements sent plus received by some
processor in any storage-balanced parallel schedule on p processors.  Each
calculator returns the exact value at concrete arguments together with the
symbolic (coefficient, exponent) shape used by the summary table; irrational
parts are carried as root forms and compared by integer powering.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import ContractionSpec, count_multisets
from .contraction import ContractionKind, classify
from .expansion import direct_q_squared
from .exactvalue import ExactValue, max_exact


@dataclass
class BoundValue:
    value: ExactValue
    formula_id: str
    regime: str | None = None
    terms: dict[str, ExactValue] = field(default_factory=dict)
    exponents: dict[str, Fraction] = field(default_factory=dict)
    constant_free: bool = False  # Omega-form: the stated value drops constants

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        out = {
            "value": float(self.value),
            "value_exact": self.value.describe(),
            "formula": self.formula_id,
            "constant_free": self.constant_free,
        }
        if self.regime:
            out["regime"] = self.regime
        if self.terms:
            out["terms"] = {k: float(v) for k, v in self.terms.items()}
        if self.exponents:
            out["exponents"] = {k: str(v) for k, v in self.exponents.items()}
        return out


def q_mm(m: int, n: int, k: int, cache: int) -> BoundValue:
    """max(2mnk/sqrt(H), mk+kn+mn)."""
    if min(m, n, k, cache) < 1:
        raise ValueError("arguments must be positive")
    flops = ExactValue.root(Fraction(4 * (m * n * k) ** 2, cache), 2)
    io = ExactValue.rational(m * k + k * n + m * n)
    return BoundValue(
        max_exact([flops, io]),
        "mm-sequential",
        terms={"flops": flops, "io": io},
    )


def w_mm(m: int, n: int, k: int, p: int) -> BoundValue:
    """Three-regime parallel bound on min/median/max of the dimensions."""
    if min(m, n, k, p) < 1:
        raise ValueError("arguments must be positive")
    x, y, z = sorted((m, n, k))
    if Fraction(y * z, x * x) < p:
        value = ExactValue.power(Fraction(x * y * z, p), Fraction(2, 3))
        regime = "3d"
    elif p > Fraction(z, y):
        value = ExactValue.root(Fraction(x * x * y * z, p), 2)
        regime = "2d"
    else:
        value = ExactValue.rational(x * y)
        regime = "1d"
    return BoundValue(value, "mm-parallel", regime=regime, constant_free=True)


def q_nonsym(spec: ContractionSpec, cache: int) -> BoundValue:
    out = q_mm(spec.n**spec.s, spec.n**spec.t, spec.n**spec.v, cache)
    out.formula_id = "nonsym-sequential"
    out.exponents = {"n": Fraction(spec.omega), "H": Fraction(1, 2)}
    return out


def w_nonsym(spec: ContractionSpec, p: int) -> BoundValue:
    out = w_mm(spec.n**spec.s, spec.n**spec.t, spec.n**spec.v, p)
    out.formula_id = "nonsym-parallel"
    return out


def q_direct(spec: ContractionSpec, cache: int) -> BoundValue:
    """Packed flop term scaled down by the symmetry constant, or packed input/output size."""
    if cache < 1:
        raise ValueError("cache size must be positive")
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    nflops = count_multisets(n, s) * count_multisets(n, t) * count_multisets(n, v)
    q2 = direct_q_squared(spec)
    flops = ExactValue.root(Fraction(4 * nflops * nflops, q2 * cache), 2)
    io = ExactValue.rational(
        count_multisets(n, s + v) + count_multisets(n, v + t) + count_multisets(n, s + t)
    )
    return BoundValue(
        max_exact([flops, io]),
        "direct-sequential",
        terms={"flops": flops, "io": io},
        exponents={"n": Fraction(spec.omega), "H": Fraction(1, 2)},
    )


def w_direct(spec: ContractionSpec, p: int) -> BoundValue:
    """Matrix multiplication reduction always; the packed-layout bound when
    matrix-vector-like, reporting the max of the two."""
    if p < 1:
        raise ValueError("processor count must be positive")
    n = spec.n
    x, y, z = sorted(spec.stv)
    mm_piece = w_mm(n**x, n**y, n**z, p)
    terms = {"mm_reduction": mm_piece.value}
    value = mm_piece.value
    regime = mm_piece.regime
    if classify(spec) == ContractionKind.MATRIX_VECTOR_LIKE:
        zmax = max(spec.stv)
        packed = ExactValue.power(Fraction(n**spec.omega, p), Fraction(zmax, spec.omega))
        terms["packed_layout"] = packed
        if packed.compare(value) > 0:
            value = packed
            regime = "packed"
    return BoundValue(
        value, "direct-parallel", regime=regime, terms=terms, constant_free=True
    )


def q_sympres(spec: ContractionSpec, cache: int) -> BoundValue:
    """Flop term with the weaker H^(omega/kappa) reuse, or the packed sizes."""
    if cache < 1:
        raise ValueError("cache size must be positive")
    n, w, kappa = spec.n, spec.omega, spec.kappa
    prods = count_multisets(n, w)
    numer = Fraction(2 * prods * cache) ** kappa
    denom = Fraction(3 * math.comb(w, kappa) * cache) ** w
    flops = ExactValue.root(numer / denom, kappa)
    io = ExactValue.rational(
        count_multisets(n, spec.s + spec.v)
        + count_multisets(n, spec.v + spec.t)
        + count_multisets(n, spec.s + spec.t)
    )
    h_exp = Fraction(w, kappa) - 1
    return BoundValue(
        max_exact([flops, io]),
        "sympres-sequential",
        terms={"flops": flops, "io": io},
        exponents={"n": Fraction(w), "H": h_exp},
    )


def w_sympres(spec: ContractionSpec, p: int) -> BoundValue:
    """(n^omega/p)^(kappa/omega) when all of s,t,v positive; exponent max/omega
    when exactly one is zero."""
    if p < 1:
        raise ValueError("processor count must be positive")
    kind = classify(spec)
    if kind == ContractionKind.DEGENERATE:
        raise ValueError("parallel symmetry preserving bound needs a non-degenerate spec")
    n, w = spec.n, spec.omega
    exp = Fraction(spec.kappa, w) if kind == ContractionKind.MATRIX_MATRIX_LIKE else Fraction(
        max(spec.stv), w
    )
    value = ExactValue.power(Fraction(n**w, p), exp)
    return BoundValue(
        value,
        "sympres-parallel",
        regime=kind.value,
        exponents={"n": Fraction(w) * exp, "p": exp},
        constant_free=True,
    )


# --- asymptotic summary table -------------------------------------------------


def _power_text(sym: str, num_exp: Fraction, den_sym: str, den_exp: Fraction) -> str:
    """Render n^a / sym^b with the usual shorthand (drop exponent 1, drop ^0)."""

    def frag(s: str, e: Fraction) -> str:
        if e == 0:
            return "1"
        if e == 1:
            return s
        if e.denominator == 1:
            return f"{s}^{e.numerator}"
        return f"{s}^{{{e}}}"

    top = frag(sym, num_exp)
    if den_exp == 0:
        return top
    return f"{top}/{frag(den_sym, den_exp)}"


@dataclass
class AsymptoticRecord:
    s: int
    t: int
    v: int
    # (leading coefficient, exponent on n) per algorithm
    f_nonsym: tuple[Fraction, int]
    f_direct: tuple[Fraction, int]
    f_sympres: tuple[Fraction, int]
    # (exponent on n, exponent on H); nonsym and direct share a column
    q_nonsym_direct: tuple[Fraction, Fraction]
    q_sympres: tuple[Fraction, Fraction]
    # (exponent on n, exponent on p)
    w_nonsym: tuple[Fraction, Fraction]
    w_direct: tuple[Fraction, Fraction]
    w_sympres: tuple[Fraction, Fraction]

    def cells(self) -> dict[str, str]:
        def f_text(coef_exp: tuple[Fraction, int]) -> str:
            coef, e = coef_exp
            base = f"n^{e}" if e != 1 else "n"
            if coef == 1:
                return base
            return f"{base}/{coef.denominator}"

        return {
            "s": str(self.s),
            "t": str(self.t),
            "v": str(self.v),
            "F_nonsym": f_text(self.f_nonsym),
            "F_direct": f_text(self.f_direct),
            "F_sympres": f_text(self.f_sympres),
            "Q_nonsym_direct": _power_text("n", self.q_nonsym_direct[0], "H", self.q_nonsym_direct[1]),
            "Q_sympres": _power_text("n", self.q_sympres[0], "H", self.q_sympres[1]),
            "W_nonsym": _power_text("n", self.w_nonsym[0], "p", self.w_nonsym[1]),
            "W_direct": _power_text("n", self.w_direct[0], "p", self.w_direct[1]),
            "W_sympres": _power_text("n", self.w_sympres[0], "p", self.w_sympres[1]),
        }


def _w_mm_form(exps: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Symbolic regime of the three-case parallel bound under 1 < p <= n."""
    x, y, z = sorted(exps)
    if z - y >= 1:
        return (Fraction(x + y), Fraction(0))
    if y + z - 2 * x >= 1:
        return (Fraction(x) + Fraction(y + z, 2), Fraction(1, 2))
    return (Fraction(2 * (x + y + z), 3), Fraction(2, 3))


def _dominant(
    form1: tuple[Fraction, Fraction], form2: tuple[Fraction, Fraction]
) -> tuple[Fraction, Fraction]:
    """Pick the form that is at least as large for every p in (1, n]."""

    def dominates(a, b):
        return a[0] >= b[0] and a[0] - a[1] >= b[0] - b[1]

    if dominates(form2, form1):
        return form2
    if dominates(form1, form2):
        return form1
    raise ValueError(f"no dominant asymptotic form between {form1} and {form2}")


def asymptotic_record(spec_stv: tuple[int, int, int]) -> AsymptoticRecord:
    """Symbolic leading terms for one (s, t, v) row, under n >= p >> 1, H <= n^2."""
    s, t, v = spec_stv
    w = s + t + v
    kappa = max(s + v, v + t, s + t)
    f_nonsym = (Fraction(1), w)
    f_direct = (
        Fraction(1, math.factorial(s) * math.factorial(t) * math.factorial(v)),
        w,
    )
    f_sympres = (Fraction(1, math.factorial(w)), w)

    if kappa == w:  # some mode count is zero: reading/writing the order-w tensor dominates
        q_nd = (Fraction(w), Fraction(0))
        q_sp = (Fraction(w), Fraction(0))
    else:
        q_nd = (Fraction(w), Fraction(1, 2))
        q_sp = (Fraction(w), Fraction(w, kappa) - 1)

    w_ns = _w_mm_form((s, t, v))
    zeros = sum(1 for e in (s, t, v) if e == 0)
    if zeros == 1:
        packed = (Fraction(max(s, t, v)), Fraction(max(s, t, v), w))
        w_dir = _dominant(w_ns, packed)
        w_sp = packed
    elif zeros == 0:
        w_dir = w_ns
        w_sp = (Fraction(kappa), Fraction(kappa, w))
    else:
        raise ValueError("summary rows need a non-degenerate (s, t, v)")
    return AsymptoticRecord(
        s, t, v, f_nonsym, f_direct, f_sympres, q_nd, q_sp, w_ns, w_dir, w_sp
    )


PAPER_TABLE_ROWS: tuple[tuple[int, int, int], ...] = (
    (1, 1, 0),
    (2, 1, 0),
    (3, 1, 0),
    (2, 2, 0),
    (1, 1, 1),
    (2, 1, 1),
    (2, 2, 1),
    (2, 2, 2),
)


def asymptotic_table(rows: Iterable[tuple[int, int, int]] | None = None) -> list[AsymptoticRecord]:
    if rows is None:
        rows = PAPER_TABLE_ROWS
    return [asymptotic_record(r) for r in rows]


TABLE_COLUMNS = [
    "s",
    "t",
    "v",
    "F_nonsym",
    "F_direct",
    "F_sympres",
    "Q_nonsym_direct",
    "Q_sympres",
    "W_nonsym",
    "W_direct",
    "W_sympres",
]


def table_to_csv(records: Sequence[AsymptoticRecord]) -> str:
    lines = [",".join(TABLE_COLUMNS)]
    for rec in records:
        cells = rec.cells()
        lines.append(",".join(cells[c] for c in TABLE_COLUMNS))
    return "\n".join(lines) + "\n"


def table_to_json(records: Sequence[AsymptoticRecord]) -> str:
    return json.dumps([rec.cells() for rec in records], sort_keys=True, indent=2)


def table_to_text(records: Sequence[AsymptoticRecord]) -> str:
    rows = [TABLE_COLUMNS] + [[rec.cells()[c] for c in TABLE_COLUMNS] for rec in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"
