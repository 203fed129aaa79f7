"""Exact certification pipeline for the balanced-graph evaluation bound.

For one (r, k, n) instance this module builds the derived quantities, the
one-variable reduction F of the Lagrangian problem, its derivative and the
localization of the maximum, the Bernstein coefficients of the comparison
polynomial P(s) with their positivity, the endpoint defects, and the
stability / differential / scalar estimates that prove the endpoint
inequality.  All certificates are exact rational computations; floats appear
only in derivative cross-checks and solver comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly, from_bernstein, gen_binomial, to_bernstein
from .hypergraph import ClassTuple, balanced_tuple
from .solver import SolverConfig, SpectralResult, lambda_p_classes


@dataclass(frozen=True)
class EvaluationContext:
    """Derived quantities of the balanced complete k-chromatic instance."""

    r: int
    k: int
    n: int

    def __post_init__(self):
        if self.r < 3 or self.k < 2:
            raise ValueError(f"context needs r >= 3 and k >= 2, got r={self.r}, k={self.k}")
        if self.n <= (self.r - 1) * self.k:
            raise ValueError(f"context needs n > (r-1)k, got n={self.n}, r={self.r}, k={self.k}")

    @property
    def q(self) -> int:
        return self.n // self.k

    @property
    def t(self) -> int:
        return self.n % self.k

    @property
    def A(self) -> int:
        return self.t * (self.q + 1)

    @property
    def B(self) -> int:
        return (self.k - self.t) * self.q

    @property
    def tau(self) -> Fraction:
        return Fraction(self.t, self.k)

    @property
    def xi(self) -> Fraction:
        return Fraction(self.A, self.n)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.n, self.k)

    @property
    def rho(self) -> Fraction:
        return Fraction(self.q + 1, self.q)

    @property
    def C(self) -> Fraction:
        return math.comb(self.n, self.r) - self.k * gen_binomial(self.nu, self.r)

    @property
    def divisible(self) -> bool:
        return self.t == 0

    def require_remainder(self):
        if self.divisible:
            raise ValueError(f"k | n at (r,k,n)=({self.r},{self.k},{self.n}): the Bernstein pipeline needs 1 <= t <= k-1")


def one_var_F(ctx: EvaluationContext, x):
    """F(x): the Lagrangian objective /r! with total mass x on the large
    classes, each class uniform.  Exact for rational x."""
    ctx.require_remainder()
    r, A, B = ctx.r, ctx.A, ctx.B
    x = Fraction(x) if isinstance(x, (int, Fraction)) else x
    a = x / A
    b = (1 - x) / B
    total = sum(
        math.comb(A, j) * math.comb(B, r - j) * a**j * b ** (r - j)
        for j in range(max(0, r - B), min(A, r) + 1)
    )
    total -= ctx.t * math.comb(ctx.q + 1, r) * a**r
    total -= (ctx.k - ctx.t) * math.comb(ctx.q, r) * b**r
    return total


def F_prime(ctx: EvaluationContext, x):
    """F'(x) = (b-a) S_{r-2}(a,b) - C(q,r-1) a^{r-1} + C(q-1,r-1) b^{r-1}."""
    ctx.require_remainder()
    if not 0 < x < 1:
        raise ValueError(f"derivative needs 0 < x < 1, got {x}")
    r, A, B = ctx.r, ctx.A, ctx.B
    x = Fraction(x) if isinstance(x, (int, Fraction)) else x
    a = x / A
    b = (1 - x) / B
    s = sum(
        math.comb(A - 1, j) * math.comb(B - 1, r - 2 - j) * a**j * b ** (r - 2 - j)
        for j in range(max(0, r - 1 - B), min(A - 1, r - 2) + 1)
    )
    return (b - a) * s - math.comb(ctx.q, r - 1) * a ** (r - 1) + math.comb(ctx.q - 1, r - 1) * b ** (r - 1)


@dataclass(frozen=True)
class LocalizeReport:
    applicable: bool
    rising_ok: bool = True
    falling_ok: bool = True
    min_left: Fraction | None = None
    max_right: Fraction | None = None

    @property
    def ok(self) -> bool:
        return (not self.applicable) or (self.rising_ok and self.falling_ok)


def localize_check(ctx: EvaluationContext, grid_size: int = 100) -> LocalizeReport:
    """F' >= 0 on a grid in (0, tau] and F' <= 0 on a grid in [xi, 1), exactly.

    Not applicable in the divisible case (the interval degenerates).
    """
    if grid_size < 100:
        raise ValueError("grid_size must be >= 100")
    if ctx.divisible:
        return LocalizeReport(applicable=False)
    left = [F_prime(ctx, ctx.tau * i / grid_size) for i in range(1, grid_size + 1)]
    right = [F_prime(ctx, ctx.xi + (1 - ctx.xi) * i / grid_size) for i in range(grid_size)]
    return LocalizeReport(
        applicable=True,
        rising_ok=all(v >= 0 for v in left),
        falling_ok=all(v <= 0 for v in right),
        min_left=min(left),
        max_right=max(right),
    )


def _s_m(ctx: EvaluationContext, m: int) -> Fraction:
    """e_m of the multiset with A entries 1 and B entries rho."""
    return sum(
        (math.comb(ctx.B, i) * math.comb(ctx.A, m - i) * ctx.rho**i for i in range(max(0, m - ctx.A), min(ctx.B, m) + 1)),
        Fraction(0),
    )


def gamma_coeffs(ctx: EvaluationContext) -> tuple[Fraction, ...]:
    """Exact Bernstein coefficients of the comparison polynomial P(s)."""
    ctx.require_remainder()
    r, n, k, q, t = ctx.r, ctx.n, ctx.k, ctx.q, ctx.t
    big_c = ctx.C
    out = []
    for m in range(r + 1):
        inner = Fraction(math.comb(n - m, r - m), math.comb(r, m)) * _s_m(ctx, m)
        inner -= t * math.comb(q + 1, r)
        inner -= (k - t) * math.comb(q, r) * ctx.rho**m
        out.append(big_c * Fraction(n) ** (r - m) * Fraction(k * (q + 1)) ** m - Fraction(n) ** r * inner)
    return tuple(out)


def comparison_poly(ctx: EvaluationContext) -> Poly:
    """P(s) = C (A + B(1+s/q))^r - n^r N(1+s/q), expanded directly.

    Independent oracle for `gamma_coeffs` via the power-basis expansion.
    """
    ctx.require_remainder()
    r, n, k, q, t = ctx.r, ctx.n, ctx.k, ctx.q, ctx.t
    A, B = ctx.A, ctx.B
    big_r = Poly([1, Fraction(1, q)])  # R(s) = 1 + s/q
    n_poly = Poly()
    for j in range(max(0, r - B), min(A, r) + 1):
        n_poly = n_poly + math.comb(A, j) * math.comb(B, r - j) * big_r ** (r - j)
    n_poly = n_poly - Poly([t * math.comb(q + 1, r)]) - (k - t) * math.comb(q, r) * big_r**r
    lead = Poly([n, k - t])  # A + B(1+s/q) = n + (k-t)s
    return ctx.C * lead**r - Fraction(n) ** r * n_poly


def gamma_oracle(ctx: EvaluationContext) -> tuple[Fraction, ...]:
    return to_bernstein(comparison_poly(ctx), ctx.r)


def psi(r: int, y) -> Fraction:
    """psi_r(y) = C(y,r) y^{-r}."""
    y = Fraction(y)
    return gen_binomial(y, r) / y**r


@dataclass(frozen=True)
class EndpointDefects:
    d_all: Fraction
    d_mono: Fraction

    @property
    def margin(self) -> Fraction:
        return self.d_all - self.d_mono

    @property
    def ok(self) -> bool:
        return self.margin > 0


def endpoint_defects(ctx: EvaluationContext) -> EndpointDefects:
    """The all-sets and monochromatic discrepancies at the equal-class-mass
    endpoint, both exact."""
    ctx.require_remainder()
    from .exact import esym_classes

    r = ctx.r
    d_all = math.comb(ctx.n, r) * ctx.nu**-r - esym_classes(
        [(Fraction(1, ctx.q + 1), ctx.A), (Fraction(1, ctx.q), ctx.B)], r
    )
    d_mono = ctx.k * psi(r, ctx.nu) - ctx.t * psi(r, ctx.q + 1) - (ctx.k - ctx.t) * psi(r, ctx.q)
    return EndpointDefects(d_all, d_mono)


def weight_variance(ctx: EvaluationContext) -> Fraction:
    """sum_i (w_i - 1/nu)^2 for the endpoint weight vector; equals
    k alpha(1-alpha) / (q(q+1)nu) with alpha = t/k."""
    ctx.require_remainder()
    w_hi = Fraction(1, ctx.q + 1)
    w_lo = Fraction(1, ctx.q)
    mean = 1 / ctx.nu
    return ctx.A * (w_hi - mean) ** 2 + ctx.B * (w_lo - mean) ** 2


def stability_bound(ctx: EvaluationContext) -> Fraction:
    """Averaging lower bound for D_all."""
    ctx.require_remainder()
    alpha = ctx.tau
    return (
        Fraction(ctx.k) * alpha * (1 - alpha) / 2
        * Fraction(math.comb(ctx.n - 2, ctx.r - 2))
        / (ctx.q * Fraction(ctx.q + 1) ** (ctx.r - 1) * ctx.nu)
    )


def _h_max(r: int, q: int) -> Fraction:
    """max over [q, q+1] of (y - r + 1) / ((r-2)! y^4), attained at the
    rational point y* = clamp(4(r-1)/3, q, q+1)."""
    y_star = Fraction(4 * (r - 1), 3)
    y_star = min(max(y_star, Fraction(q)), Fraction(q + 1))
    return (y_star - (r - 1)) / (math.factorial(r - 2) * y_star**4)


def mono_bound(ctx: EvaluationContext) -> Fraction:
    """Interpolation upper bound for D_mono (exact; maximizer is rational)."""
    ctx.require_remainder()
    alpha = ctx.tau
    return Fraction(ctx.k) * alpha * (1 - alpha) / 2 * _h_max(ctx.r, ctx.q)


def scalar_endpoint_check(r: int, q: int) -> tuple[bool, Fraction]:
    """max_{[q,q+1]} (y-r+1)/((r-2)! y^4) < C(2q-2, r-2)/(q^2 (q+1)^{r-1}).

    Returns (pass, exact margin)."""
    if q < r - 1:
        raise ValueError(f"scalar estimate needs q >= r-1, got r={r}, q={q}")
    rhs = Fraction(math.comb(2 * q - 2, r - 2)) / (q * q * Fraction(q + 1) ** (r - 1))
    lhs = _h_max(r, q)
    return lhs < rhs, rhs - lhs


def comparison_check(ctx: EvaluationContext) -> bool:
    """C(2q-2,r-2)/(q^2(q+1)^{r-1}) < C(n-2,r-2)/(q(q+1)^{r-1} nu), exact."""
    ctx.require_remainder()
    lhs = Fraction(math.comb(2 * ctx.q - 2, ctx.r - 2)) / (ctx.q * ctx.q * Fraction(ctx.q + 1) ** (ctx.r - 1))
    rhs = Fraction(math.comb(ctx.n - 2, ctx.r - 2)) / (ctx.q * Fraction(ctx.q + 1) ** (ctx.r - 1) * ctx.nu)
    return lhs < rhs


# ---------------------------------------------------------------------------
# differential certificate
# ---------------------------------------------------------------------------


def _rising_factorial(s: int) -> Poly:
    """P_s(X) = X(X+1)...(X+s-1), integer coefficients."""
    p = Poly([0, 1])
    for i in range(1, s):
        p = p * Poly([i, 1])
    return p


def _delta_poly(s: int) -> Poly:
    p_s = _rising_factorial(s)
    a = Poly([2 * s - 1, 2]) * p_s.deriv().deriv() - 2 * s * p_s.deriv()
    b = s * Poly([0, 1]) * ((s + 1) * Poly([s, 1]) ** (s - 2) - (s - 1) * Poly([s - 1, 1]) ** (s - 2))
    return a + b


def e_poly_recurrence(r: int) -> list[Poly]:
    """E_3, ..., E_r via E_{s+1} = (X+s)(E_s + Delta_s)."""
    out = [Poly()]  # E_3 = 0
    for s in range(3, r):
        out.append(Poly([s, 1]) * (out[-1] + _delta_poly(s)))
    return out


def e_poly_direct(r: int) -> Poly:
    """E_r from its defining combination of P_r and its derivatives."""
    p_r = _rising_factorial(r)
    y = Poly([r - 1, 1])
    return (
        y * y * p_r.deriv().deriv()
        - 2 * r * y * p_r.deriv()
        + r * (r + 1) * p_r
        + r * (r - 1) * Poly([0, 1]) * y ** (r - 2)
    )


@dataclass(frozen=True)
class DifferentialCertificate:
    r: int
    e_coeffs: tuple[Fraction, ...]
    e_nonnegative: bool
    deltas_nonnegative: bool
    matches_direct: bool

    @property
    def ok(self) -> bool:
        return self.e_nonnegative and self.deltas_nonnegative and self.matches_direct


def differential_certificate(r: int) -> DifferentialCertificate:
    """Nonnegativity of every coefficient of E_r (and of each Delta_s along
    the recurrence), plus the identity with the direct formula."""
    if not 3 <= r <= 12:
        raise ValueError(f"certificate range is 3 <= r <= 12, got {r}")
    chain = e_poly_recurrence(r)
    e_r = chain[-1]
    deltas_ok = all(all(c >= 0 for c in _delta_poly(s).coeffs) for s in range(3, r))
    return DifferentialCertificate(
        r=r,
        e_coeffs=e_r.coeffs,
        e_nonnegative=all(c >= 0 for c in e_r.coeffs),
        deltas_nonnegative=deltas_ok,
        matches_direct=e_r == e_poly_direct(r),
    )


def psi_second_derivative_bound_error(r: int, samples: int = 50) -> float:
    """max over samples of the violation of -psi_r''(y) <= (y-r+1)/((r-2)! y^4),
    by central finite differences (independent numeric cross-check).

    The bound is an identity at r = 3, so a small positive violation at the
    finite-difference noise level is expected; callers compare against a
    1e-6 relative tolerance.
    """

    def psi_float(y: float) -> float:
        num = 1.0
        for i in range(r):
            num *= y - i
        return num / math.factorial(r) / y**r

    worst = 0.0
    h = 1e-3  # balances truncation against second-difference cancellation
    for i in range(samples):
        y = (r - 1) + 10.0 * (i + 1) / samples
        second = (psi_float(y + h) - 2 * psi_float(y) + psi_float(y - h)) / (h * h)
        rhs = (y - r + 1) / (math.factorial(r - 2) * y**4)
        worst = max(worst, (-second - rhs) / max(abs(rhs), 1e-300))
    return worst


# ---------------------------------------------------------------------------
# the evaluation bound itself
# ---------------------------------------------------------------------------


def evaluation_bound(ctx: EvaluationContext, p: float) -> Fraction | float:
    """r! (C(n,r) - k C(n/k,r)) n^{-r/p}; exact at p=1."""
    if p < 1:
        raise ValueError(f"norm exponent must be >= 1, got {p}")
    base = math.factorial(ctx.r) * ctx.C
    if p == 1:
        return base / Fraction(ctx.n) ** ctx.r
    return float(base) * float(ctx.n) ** (-ctx.r / p)


@dataclass(frozen=True)
class BoundComparison:
    bound: float
    solver: SpectralResult
    divisible: bool
    not_exceeded: bool
    equality_case_ok: bool
    strict_case_ok: bool

    @property
    def ok(self) -> bool:
        return self.not_exceeded and self.equality_case_ok and self.strict_case_ok


def evaluation_bound_vs_solver(
    ctx: EvaluationContext, p: float, cfg: SolverConfig = SolverConfig(), *, strict_margin: float = 1e-6
) -> BoundComparison:
    """Solve the balanced tuple and compare against the closed-form bound:
    never exceeded (1e-7), equality when k | n, margin >= strict_margin
    otherwise (in the tested small range)."""
    t = balanced_tuple(ctx.r, ctx.k, ctx.n)
    result = lambda_p_classes(t, p, cfg)
    bound = float(evaluation_bound(ctx, p))
    not_exceeded = result.lam <= bound + 1e-7
    if ctx.divisible:
        equality = abs(result.lam - bound) <= 1e-7 * max(1.0, bound)
        strict = True
    else:
        equality = True
        strict = bound - result.lam >= strict_margin
    return BoundComparison(bound, result, ctx.divisible, not_exceeded, equality, strict)


def holder_consistency_gap(ctx: EvaluationContext, p: float) -> float:
    """|bound(p) - (r! C)^{1-1/p} bound(1)^{1/p}| / bound(p): the two formulas
    for the p-bound must agree (exponent bookkeeping check)."""
    base = float(math.factorial(ctx.r) * ctx.C)
    via_holder = base ** (1.0 - 1.0 / p) * float(evaluation_bound(ctx, 1)) ** (1.0 / p)
    direct = float(evaluation_bound(ctx, p))
    return abs(direct - via_holder) / direct
