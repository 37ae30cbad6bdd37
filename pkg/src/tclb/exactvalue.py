"""Exact arithmetic for bound values of the form  linear + radicand^(1/index).

Every communication bound and expansion bound in this package evaluates to a
non-negative rational plus at most one fractional power of a rational.
Comparisons are decided exactly: same-index roots compare by their radicands,
mixed forms by integer powering, and the remaining mixed linear+root cases by
directed integer root isolation at increasing precision (with a rational
short-circuit when a radicand is a perfect power).  No floating point enters
any comparison; floats are for display only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def floor_nth_root(x: int, k: int) -> int:
    """Largest integer r with r**k <= x (x >= 0, k >= 1)."""
    if x < 0 or k < 1:
        raise ValueError("floor_nth_root needs x >= 0, k >= 1")
    if x in (0, 1) or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = 1 << (x.bit_length() // k + 1)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > x:
        r -= 1
    return r


def _perfect_root(q: Fraction, k: int) -> Fraction | None:
    """q**(1/k) if it is rational, else None."""
    num = floor_nth_root(q.numerator, k)
    if num**k != q.numerator:
        return None
    den = floor_nth_root(q.denominator, k)
    if den**k != q.denominator:
        return None
    return Fraction(num, den)


@dataclass(frozen=True)
class ExactValue:
    """linear + radicand**(1/index), all parts non-negative."""

    linear: Fraction
    radicand: Fraction = Fraction(0)
    index: int = 1

    @staticmethod
    def rational(x) -> "ExactValue":
        x = Fraction(x)
        if x < 0:
            raise ValueError("bound values are non-negative")
        return ExactValue(x)

    @staticmethod
    def root(radicand, index: int) -> "ExactValue":
        radicand = Fraction(radicand)
        if radicand < 0 or index < 1:
            raise ValueError("need radicand >= 0 and index >= 1")
        if index == 1:
            return ExactValue(radicand)
        return ExactValue(Fraction(0), radicand, index)

    @staticmethod
    def power(base, exponent: Fraction) -> "ExactValue":
        """base**exponent for rational base >= 0 and exponent >= 0."""
        base = Fraction(base)
        exponent = Fraction(exponent)
        if base < 0 or exponent < 0:
            raise ValueError("need base >= 0 and exponent >= 0")
        if base == 0:
            return ExactValue.rational(0 if exponent else 1)
        return ExactValue.root(base**exponent.numerator, exponent.denominator)

    def plus(self, r) -> "ExactValue":
        r = Fraction(r)
        out = ExactValue(self.linear + r, self.radicand, self.index)
        if out.linear < 0:
            raise ValueError("bound values are non-negative")
        return out

    def scaled_radicand(self, factor) -> "ExactValue":
        """Multiply the root part by factor**(1/index)."""
        return ExactValue(self.linear, self.radicand * Fraction(factor), self.index)

    def _normalized(self, common_index: int) -> tuple[Fraction, Fraction]:
        if self.radicand == 0:
            return self.linear, Fraction(0)
        return self.linear, self.radicand ** (common_index // self.index)

    def compare(self, other: "ExactValue") -> int:
        """-1, 0, or 1; exact."""
        q = math.lcm(self.index, other.index)
        l1, m1 = self._normalized(q)
        l2, m2 = other._normalized(q)
        if l1 == l2:
            return (m1 > m2) - (m1 < m2)
        if l1 < l2:
            return -other._compare_parts(l2 - l1, m2, m1, q)
        return self._compare_parts(l1 - l2, m1, m2, q)

    @staticmethod
    def _compare_parts(r: Fraction, m_small: Fraction, m_big: Fraction, q: int) -> int:
        """Sign of (r + m_small**(1/q)) - m_big**(1/q) for r > 0."""
        if m_small >= m_big:
            return 1
        exact_small = _perfect_root(m_small, q)
        exact_big = _perfect_root(m_big, q)
        if exact_small is not None and exact_big is not None:
            diff = r + exact_small - exact_big
            return (diff > 0) - (diff < 0)
        # directed decimal isolation of m**(1/q)
        for digits in (8, 16, 32, 64, 128, 256):
            scale = 10**digits
            pw = scale**q
            lo_s = floor_nth_root(m_small.numerator * pw // m_small.denominator, q)
            lo_b = floor_nth_root(m_big.numerator * pw // m_big.denominator, q)
            # root in [lo/scale, (lo+1)/scale)
            lhs_lo = r + Fraction(lo_s, scale)
            lhs_hi = r + Fraction(lo_s + 1, scale)
            rhs_lo = Fraction(lo_b, scale)
            rhs_hi = Fraction(lo_b + 1, scale)
            if lhs_lo >= rhs_hi:
                return 1
            if lhs_hi <= rhs_lo:
                return -1
        raise ArithmeticError("could not separate values exactly; equality suspected")

    def __lt__(self, other):
        return self.compare(_coerce(other)) < 0

    def __le__(self, other):
        return self.compare(_coerce(other)) <= 0

    def __gt__(self, other):
        return self.compare(_coerce(other)) > 0

    def __ge__(self, other):
        return self.compare(_coerce(other)) >= 0

    def __eq__(self, other):
        try:
            return self.compare(_coerce(other)) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        exact = _perfect_root(self.radicand, self.index) if self.radicand else Fraction(0)
        if exact is not None:
            return hash(self.linear + exact)
        return hash((self.linear, self.radicand, self.index))

    def __float__(self):
        if self.radicand == 0:
            return float(self.linear)
        exact = _perfect_root(self.radicand, self.index)
        if exact is not None:
            return float(self.linear + exact)
        return float(self.linear) + float(self.radicand) ** (1.0 / self.index)

    def is_rational(self) -> bool:
        return self.radicand == 0 or _perfect_root(self.radicand, self.index) is not None

    def as_fraction(self) -> Fraction:
        if self.radicand == 0:
            return self.linear
        exact = _perfect_root(self.radicand, self.index)
        if exact is None:
            raise ValueError("value is irrational")
        return self.linear + exact

    def describe(self) -> str:
        if self.radicand == 0:
            return str(self.linear)
        root = f"{self.radicand}^(1/{self.index})"
        return root if self.linear == 0 else f"{self.linear} + {root}"


def _coerce(x) -> ExactValue:
    if isinstance(x, ExactValue):
        return x
    return ExactValue.rational(x)


def max_exact(values) -> ExactValue:
    it = iter(values)
    best = _coerce(next(it))
    for x in it:
        x = _coerce(x)
        if x.compare(best) > 0:
            best = x
    return best


def min_exact(values) -> ExactValue:
    it = iter(values)
    best = _coerce(next(it))
    for x in it:
        x = _coerce(x)
        if x.compare(best) < 0:
            best = x
    return best
