"""Exact rational building blocks: generalized binomials, elementary symmetric
generating functions, dense polynomials, Bernstein conversion, Descartes sign
counting.

Everything in this module computes with `fractions.Fraction`; no floats enter.
Strict inequalities certified elsewhere in the package reduce to exact
comparisons of the values produced here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

RationalLike = Fraction | int


def gen_binomial(x: RationalLike, s: int) -> Fraction:
    """Generalized binomial x(x-1)...(x-s+1)/s! for rational x, integer s >= 0.

    Vanishes automatically for integer x with 0 <= x < s.
    """
    if s < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {s}")
    num = Fraction(1)
    x = Fraction(x)
    for i in range(s):
        num *= x - i
    return num / math.factorial(s)


def esym_classes(values: Iterable[tuple[RationalLike, int]], degree: int) -> Fraction:
    """Coefficient of z^degree in prod_i (1 + a_i z)^{mult_i}, exactly.

    `values` is a sequence of (value, multiplicity) pairs; the result is the
    degree-th elementary symmetric sum of the expanded multiset.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    poly = [Fraction(0)] * (degree + 1)
    poly[0] = Fraction(1)
    for a, mult in values:
        if mult < 0:
            raise ValueError("multiplicities must be >= 0")
        a = Fraction(a)
        top = min(mult, degree)
        factor = [gen_binomial(mult, j) * a**j for j in range(top + 1)]
        nxt = [Fraction(0)] * (degree + 1)
        for i, c in enumerate(poly):
            if c == 0:
                continue
            for j, f in enumerate(factor):
                if i + j > degree:
                    break
                nxt[i + j] += c * f
        poly = nxt
    return poly[degree]


def sign_changes(seq: Sequence[RationalLike]) -> int:
    """Number of sign alternations in `seq` after deleting zero entries."""
    signs = [1 if v > 0 else -1 for v in seq if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


class Poly:
    """Dense univariate polynomial over Fraction, low degree by design.

    Coefficients are indexed by monomial degree; trailing zeros are trimmed.
    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Poly(out)
        return Poly([c * Fraction(other) for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x: RationalLike) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * Fraction(x) + c
        return acc

    def deriv(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def poly_x(shift: RationalLike = 0) -> Poly:
    """The polynomial X + shift."""
    return Poly([shift, 1])


def to_bernstein(p: Poly, degree_r: int) -> tuple[Fraction, ...]:
    """Bernstein coefficients G_m with p(s) = sum_m G_m C(r,m) s^m (1-s)^{r-m}."""
    if p.degree > degree_r:
        raise ValueError(f"polynomial degree {p.degree} exceeds Bernstein degree {degree_r}")
    out = []
    for m in range(degree_r + 1):
        acc = Fraction(0)
        for i in range(min(m, p.degree) + 1):
            acc += Fraction(math.comb(m, i), math.comb(degree_r, i)) * p.coeffs[i]
        out.append(acc)
    return tuple(out)


def from_bernstein(gammas: Sequence[RationalLike]) -> Poly:
    """Inverse of `to_bernstein`: expand the Bernstein form in the power basis."""
    r = len(gammas) - 1
    if r < 0:
        return Poly()
    s = poly_x()
    one_minus_s = Poly([1, -1])
    acc = Poly()
    for m, g in enumerate(gammas):
        acc = acc + Fraction(g) * math.comb(r, m) * (s**m) * (one_minus_s ** (r - m))
    return acc


def format_rational(q: RationalLike) -> str:
    """Serialize a rational as the `num/den` string used by report files."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)
