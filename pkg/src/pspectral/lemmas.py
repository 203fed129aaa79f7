"""Executable verifiers for the smoothing and balancing lemmas.

Each verifier computes the quantities of one lemma on a supplied instance and
reports whether the lemma's conclusion holds there.  Whenever the arithmetic
stays rational (integer class data, rational masses, rational exponents) the
comparisons are exact; otherwise double precision with explicit slack
constants is used (1e-8 for ordering comparisons, 1e-10 for identities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import gen_binomial, sign_changes
from .hypergraph import ClassTuple, class_polyform, tuple_polyform
from .solver import SolverConfig, SpectralResult, lambda_p_classes

COMPARE_SLACK = 1e-8
IDENTITY_SLACK = 1e-10


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


# ---------------------------------------------------------------------------
# majorization and the gap-two mass move
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalPair:
    """Local blocks of sizes (m+2, m) with total p-masses (s_c, s_b)."""

    m: int
    s_c: Fraction | float
    s_b: Fraction | float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("small-block size m must be >= 1")
        if self.s_c <= 0 or self.s_b <= 0:
            raise ValueError("block masses must be positive")

    @property
    def rho(self):
        return self.s_b / self.s_c

    def meets_rho_precondition(self) -> bool:
        """rho >= (m+1)/(m+2), the hypothesis of the majorization lemma."""
        return self.s_b * (self.m + 2) >= self.s_c * (self.m + 1)


def check_majorization(u: Sequence, v: Sequence, tol: float = 1e-12) -> bool:
    """True when every prefix sum of sorted-descending u dominates that of v.

    Requires equal lengths and equal totals (within `tol` for floats, exactly
    for rational input).
    """
    if len(u) != len(v):
        raise ValueError("majorization needs equal lengths")
    exact = _is_exact(u) and _is_exact(v)
    su, sv = sum(u), sum(v)
    if exact:
        if su != sv:
            raise ValueError(f"sum mismatch: {su} != {sv}")
        slack = 0
    else:
        if abs(su - sv) > tol * max(1.0, abs(su)):
            raise ValueError(f"sum mismatch: {su} != {sv}")
        slack = tol
    du = sorted(u, reverse=True)
    dv = sorted(v, reverse=True)
    acc_u = acc_v = 0
    for a, b in zip(du, dv):
        acc_u += a
        acc_v += b
        if acc_u < acc_v - slack:
            return False
    return True


def gap_two_masses(pair: LocalPair):
    """Point p-masses before and after replacing sizes (m+2, m) by (m+1, m+1).

    Returns (old, new); the majorization guarantee needs the rho precondition,
    which callers may probe via `pair.meets_rho_precondition()`.
    """
    m = pair.m
    if isinstance(pair.s_c, (int, Fraction)) and isinstance(pair.s_b, (int, Fraction)):
        s_c, s_b = Fraction(pair.s_c), Fraction(pair.s_b)
    else:
        s_c, s_b = pair.s_c, pair.s_b
    old = [s_c / (m + 2)] * (m + 2) + [s_b / m] * m
    new = [s_c / (m + 1)] * (m + 1) + [s_b / (m + 1)] * (m + 1)
    return old, new


def _esym_powers(values: Sequence[float], alpha: float, s: int) -> float:
    """e_s of the alpha-th powers of `values` (float arithmetic)."""
    poly = [0.0] * (s + 1)
    poly[0] = 1.0
    for v in values:
        w = float(v) ** alpha
        for i in range(min(s, len(poly) - 1), 0, -1):
            poly[i] += w * poly[i - 1]
    return poly[s]


def full_layer_pair(pair: LocalPair, alpha: float, s: int) -> tuple[float, float]:
    """Full local s-layer (e_s of the alpha-powers of the point masses)
    before and after the gap-two move."""
    old, new = gap_two_masses(pair)
    return _esym_powers(old, alpha, s), _esym_powers(new, alpha, s)


def one_sided_layer_pair(pair: LocalPair, p: float, s: int) -> tuple[float, float]:
    """One-sided layer O_s: the full layer minus the all-large-block defect."""
    m = pair.m
    alpha = 1.0 / p
    old_full, new_full = full_layer_pair(pair, alpha, s)
    old_defect = math.comb(m + 2, s) * (float(pair.s_c) / (m + 2)) ** (s * alpha)
    new_defect = math.comb(m + 1, s) * (float(pair.s_c) / (m + 1)) ** (s * alpha)
    return old_full - old_defect, new_full - new_defect


# ---------------------------------------------------------------------------
# pure cross layer: sign pattern and boundary positivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PureCrossReport:
    coeffs: tuple[float, ...]
    ratios: tuple[float, ...]
    sign_count: int
    r1: float
    delta_at_boundary: float
    r1_gt_one: bool
    ratios_decreasing: bool
    sign_ok: bool
    delta_positive: bool

    @property
    def ok(self) -> bool:
        return self.r1_gt_one and self.ratios_decreasing and self.sign_ok and self.delta_positive


def _cross_coeff_sign_exact(c: int, s: int, u: int, alpha: Fraction) -> int:
    """Exact sign of C_u for rational alpha, via integer cross powers."""
    a_u = math.comb(c, u) * math.comb(c, s - u)
    b_u = math.comb(c + 1, u) * math.comb(c - 1, s - u)
    num, den = alpha.numerator, alpha.denominator
    x = (c + 1) ** u * (c - 1) ** (s - u)
    lhs = a_u**den * x**num
    rhs = b_u**den * c ** (s * num)
    return (lhs > rhs) - (lhs < rhs)


def pure_cross_delta(c: int, s: int, alpha) -> PureCrossReport:
    """Coefficients of the cross-layer difference polynomial for old sizes
    (c+1, c-1) versus new sizes (c, c), with X = rho^alpha.

    Checks: first ratio above one, ratio sequence strictly decreasing, at most
    one coefficient sign change, and positivity at the boundary rho = c/(c+1).
    """
    if c < s:
        raise ValueError(f"pure cross layer needs c >= s, got c={c}, s={s}")
    if s < 2:
        raise ValueError("cross layers need rank s >= 2")
    af = float(alpha)
    if not 0 < af < 1:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    coeffs = []
    ratios = []
    signs = []
    for u in range(1, s):
        a_u = math.comb(c, u) * math.comb(c, s - u)
        b_u = math.comb(c + 1, u) * math.comb(c - 1, s - u)
        new_term = a_u * c ** (-af * s)
        old_term = b_u * (c + 1) ** (-af * u) * (c - 1) ** (-af * (s - u))
        coeffs.append(new_term - old_term)
        ratios.append(new_term / old_term)
        if isinstance(alpha, Fraction):
            signs.append(_cross_coeff_sign_exact(c, s, u, alpha))
    if signs:
        count = sign_changes(signs)
    else:
        scale = max(abs(v) for v in coeffs)
        rounded = [0 if abs(v) <= 1e-12 * scale else v for v in coeffs]
        count = sign_changes(rounded)
    x0 = (c / (c + 1)) ** af
    delta0 = sum(cu * x0 ** (s - u) for u, cu in zip(range(1, s), coeffs))
    decreasing = all(b < a * (1 - 1e-12) for a, b in zip(ratios, ratios[1:]))
    return PureCrossReport(
        coeffs=tuple(coeffs),
        ratios=tuple(ratios),
        sign_count=count,
        r1=ratios[0],
        delta_at_boundary=delta0,
        r1_gt_one=ratios[0] > 1.0,
        ratios_decreasing=decreasing,
        sign_ok=count <= 1,
        delta_positive=delta0 > 0.0,
    )


@dataclass(frozen=True)
class BreakpointReport:
    j: int
    value: Fraction
    lower_bound: Fraction
    nonnegative: bool
    above_bound: bool

    @property
    def ok(self) -> bool:
        return self.nonnegative and self.above_bound


def stop_loss_breakpoints(c: int, s: int) -> list[BreakpointReport]:
    """Exact stop-loss checkpoint values Y_j of the boundary inequality,
    together with their closed-form lower bounds."""
    if c < s:
        raise ValueError(f"breakpoints need c >= s, got c={c}, s={s}")
    if s < 2:
        raise ValueError("breakpoints need s >= 2")
    q = Fraction(c - 1, c)
    beta = 1 - Fraction(1, c * c)
    a = [Fraction(math.comb(c, u) * math.comb(c, s - u)) for u in range(s)]
    b = [Fraction(math.comb(c + 1, u) * math.comb(c - 1, s - u)) for u in range(s)]
    out = []
    for j in range(1, s):
        y = sum((a[u] - b[u] for u in range(1, j)), Fraction(0))
        y += sum(q ** (u - j) * (a[u] * beta ** (s - u) - b[u]) for u in range(j, s))
        big_m = s - 1 - j
        bound = Fraction(math.comb(c - 1, s - 2), s - 1) * (
            (s - 2) * q**big_m - (c - s + 1) * (1 - q**big_m)
        )
        out.append(BreakpointReport(j, y, bound, y >= 0, y >= bound))
    return out


# ---------------------------------------------------------------------------
# stop-loss kernel identity
# ---------------------------------------------------------------------------


def stop_loss_kernel_error(x: float, alpha: float) -> float:
    """Relative error of alpha(1-alpha) integral of min(T,x) T^{alpha-2} dT
    against x^alpha, by numerical quadrature split at the kink."""
    from scipy.integrate import quad

    if x <= 0 or not 0 < alpha < 1:
        raise ValueError("kernel identity needs x > 0 and alpha in (0,1)")
    head, _ = quad(lambda T: T ** (alpha - 1.0), 0.0, x)
    tail, _ = quad(lambda T: T ** (alpha - 2.0), x, math.inf)
    value = alpha * (1.0 - alpha) * (head + x * tail)
    return abs(value - x**alpha) / x**alpha


# ---------------------------------------------------------------------------
# p = 1 lemmas: mixed two-class inequality and the L_r defect
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixedDeltaReport:
    coeffs: tuple[Fraction, ...]
    sign_count: int
    first_positive: bool
    last_negative: bool
    delta_at_c: Fraction
    grid_min: Fraction

    @property
    def ok(self) -> bool:
        return (
            self.sign_count == 1
            and self.first_positive
            and self.last_negative
            and self.delta_at_c > 0
            and self.grid_min > 0
        )


def mixed_delta_p1(a: int, b: int, r: int, grid: int = 100) -> MixedDeltaReport:
    """Exact coefficients D_s of the two-class balancing difference at p=1 and
    the positivity of the difference on (0, c], c = b/(b+1)."""
    if r < 3 or b < r - 1 or a < b + 2:
        raise ValueError(f"mixed inequality needs a >= b+2, b >= r-1, r >= 3; got a={a}, b={b}, r={r}")
    up = Fraction(a, a - 1)
    dn = Fraction(b, b + 1)
    coeffs = []
    for s in range(1, r):
        d = math.comb(a - 1, s) * math.comb(b + 1, r - s) * up**s * dn ** (r - s)
        d -= math.comb(a, s) * math.comb(b, r - s)
        coeffs.append(d)
    c = Fraction(b, b + 1)

    def delta(t: Fraction) -> Fraction:
        return sum((d * t**s for s, d in enumerate(coeffs, start=1)), Fraction(0))

    grid_vals = [delta(c * i / grid) for i in range(1, grid + 1)]
    return MixedDeltaReport(
        coeffs=tuple(coeffs),
        sign_count=sign_changes(coeffs),
        first_positive=coeffs[0] > 0,
        last_negative=coeffs[-1] < 0,
        delta_at_c=delta(c),
        grid_min=min(grid_vals),
    )


def lr_defect(x, r: int) -> Fraction:
    """L_r(x) = C(x,r) - C(x-1,r) (x/(x-1))^r, exact for rational x >= r."""
    x = Fraction(x)
    if x < r:
        raise ValueError(f"defect defined for x >= r, got {x}")
    return gen_binomial(x, r) - gen_binomial(x - 1, r) * (x / (x - 1)) ** r


def lr_monotone_scan(r: int, start=None, steps: int = 20) -> bool:
    """L_r strictly increases along start, start+1, ..., start+steps."""
    x = Fraction(start) if start is not None else Fraction(r)
    prev = lr_defect(x, r)
    for j in range(1, steps + 1):
        cur = lr_defect(x + j, r)
        if cur <= prev:
            return False
        prev = cur
    return True


def coeff_monotone_scan(ell: int, m: int, t, z_steps: int = 30) -> bool:
    """F(z) = C(z,ell)/C(z,m) z^{-(ell-m)/t} is nondecreasing for integer
    z >= ell.  Exact for rational t: compares the t.numerator-th powers."""
    if not (0 <= m <= ell):
        raise ValueError("need 0 <= m <= ell")
    t = Fraction(t)
    if t < 1:
        raise ValueError("need t >= 1")
    u, v = t.numerator, t.denominator
    d = ell - m

    def f_pow(z: int) -> Fraction:
        ratio = Fraction(math.comb(z, ell), math.comb(z, m))
        return ratio**u * Fraction(1, z ** (v * d))

    prev = f_pow(ell)
    for z in range(ell + 1, ell + z_steps + 1):
        cur = f_pow(z)
        if cur < prev:
            return False
        prev = cur
    return True


# ---------------------------------------------------------------------------
# t-mass switch on class-constant vectors
# ---------------------------------------------------------------------------


def t_mass_switch_delta(t: ClassTuple, values: Sequence[float], i: int, j: int, texp: float) -> float:
    """Polyform change when the t-masses of classes i (larger) and j are
    switched; the lemma asserts the change is >= 0 when N > M and Y_i < Y_j."""
    n_i, n_j = t.sizes[i], t.sizes[j]
    if n_i <= n_j:
        raise ValueError("switch needs the first class strictly larger")
    y_i = n_i * float(values[i]) ** texp
    y_j = n_j * float(values[j]) ** texp
    if y_i >= y_j:
        raise ValueError("switch needs Y_i < Y_j")
    new_vals = list(float(v) for v in values)
    new_vals[i] = (y_j / n_i) ** (1.0 / texp)
    new_vals[j] = (y_i / n_j) ** (1.0 / texp)
    return tuple_polyform(t, new_vals) - tuple_polyform(t, [float(v) for v in values])


# ---------------------------------------------------------------------------
# ordering facts at solved maximizers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderingReport:
    opposite_order: bool
    p_mass_order: bool
    one_vertex_transfer: bool

    @property
    def ok(self) -> bool:
        return self.opposite_order and self.p_mass_order and self.one_vertex_transfer


def extremal_order_report(t: ClassTuple, values: Sequence[float], p: float, tol: float = COMPARE_SLACK) -> OrderingReport:
    """Opposite ordering, p-mass ordering, and the one-vertex transfer
    inequality for solved class values (sizes descending)."""
    a = [float(v) for v in values]
    opp = all(a[i] <= a[i + 1] + tol for i in range(t.k - 1))
    masses = [s * ai**p for s, ai in zip(t.sizes, a)]
    scale = max(max(masses), 1e-300)
    pmass = all(masses[i] >= masses[i + 1] - tol * scale for i in range(t.k - 1))
    s = t.r - 1
    lhs = math.comb(t.sizes[0] - 1, s) * a[0] ** s
    transfer = True
    for i in range(1, t.k):
        if t.sizes[i] <= t.sizes[0] - 1:
            rhs = math.comb(t.sizes[i], s) * a[i] ** s
            if lhs > rhs + tol * max(lhs, rhs, 1e-300):
                transfer = False
    return OrderingReport(opp, pmass, transfer)


# ---------------------------------------------------------------------------
# the embedded smoothing comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothingOutcome:
    """Old eigenvector value versus the proof's redistributed test value on
    the smoothed tuple, with the per-layer breakdown of the difference."""

    old_value: float
    new_value: float
    strict: bool
    breakdown: dict
    preconditions: dict
    solver_result: SpectralResult

    @property
    def preconditions_ok(self) -> bool:
        return all(self.preconditions.values())

    @property
    def breakdown_total(self) -> float:
        return sum(self.breakdown.values())


def _block_esym_list(blocks, degree: int) -> list[float]:
    """e_f for f = 0..degree of a block-weighted multiset, float arithmetic."""
    poly = [0.0] * (degree + 1)
    poly[0] = 1.0
    for size, val in blocks:
        top = min(size, degree)
        factor = [math.comb(size, jj) * float(val) ** jj for jj in range(top + 1)]
        nxt = [0.0] * (degree + 1)
        for ii, ci in enumerate(poly):
            if ci == 0.0:
                continue
            for jj in range(min(top, degree - ii) + 1):
                nxt[ii + jj] += ci * factor[jj]
        poly = nxt
    return poly


def _two_block_layer(sz1: int, v1: float, sz2: int, v2: float, s: int) -> float:
    return sum(
        math.comb(sz1, jj) * math.comb(sz2, s - jj) * v1**jj * v2 ** (s - jj)
        for jj in range(max(0, s - sz2), min(sz1, s) + 1)
    )


def smoothing_compare(t: ClassTuple, p: float, cfg: SolverConfig = SolverConfig()) -> SmoothingOutcome:
    """Execute the balancing move between the largest and smallest classes and
    compare values.

    For p > 1 this is the gap-two smoothing with preserved local p-masses on a
    (b+2)-subset of the largest class; for p = 1 it is the two-class mass
    redistribution.  The strict-increase conclusion is only claimed when the
    recorded preconditions hold.
    """
    if t.sizes[0] - t.sizes[-1] < 2:
        raise ValueError(f"smoothing needs a size gap >= 2, got sizes {t.sizes}")
    r = t.r
    rfact = math.factorial(r)
    result = lambda_p_classes(t, p, cfg)
    vals = list(result.class_values)
    a_big = t.sizes[0]
    b_small = t.sizes[-1]
    alpha = vals[0]
    beta = vals[-1]
    middles = [(t.sizes[i], vals[i]) for i in range(1, t.k - 1)]

    if p > 1:
        s_c = (b_small + 2) * alpha**p
        s_b = b_small * beta**p
        pre = {
            "gap_at_least_two": True,
            "rho_at_least_boundary": s_b * (b_small + 2) >= s_c * (b_small + 1) * (1 - 1e-12),
            "values_opposite_ordered": alpha <= beta * (1 + 1e-12),
        }
        e_size = a_big - b_small - 2
        alpha_new = ((b_small + 2) * alpha**p / (b_small + 1)) ** (1.0 / p)
        beta_new = (b_small * beta**p / (b_small + 1)) ** (1.0 / p)

        old_classes = [[(e_size, alpha), (b_small + 2, alpha)], *[[mb] for mb in middles], [(b_small, beta)]]
        new_classes = [[(e_size, alpha), (b_small + 1, alpha_new)], *[[mb] for mb in middles], [(b_small + 1, beta_new)]]
        old_value = class_polyform(r, old_classes)
        new_value = class_polyform(r, new_classes)

        outside = ([(e_size, alpha)] if e_size else []) + middles
        e_r_outside = _block_esym_list(outside, r)
        e_f_e = [math.comb(e_size, f) * alpha**f for f in range(r + 1)]
        breakdown = {}
        for s in range(1, r):
            f = r - s
            full_old = _two_block_layer(b_small + 2, alpha, b_small, beta, s)
            full_new = _two_block_layer(b_small + 1, alpha_new, b_small + 1, beta_new, s)
            w_mixed = e_r_outside[f] - e_f_e[f]
            if w_mixed:
                breakdown[("full", s)] = rfact * w_mixed * (full_new - full_old)
            one_old = full_old - math.comb(b_small + 2, s) * alpha**s
            one_new = full_new - math.comb(b_small + 1, s) * alpha_new**s
            if e_f_e[f]:
                breakdown[("one_sided", s)] = rfact * e_f_e[f] * (one_new - one_old)
        cross_old = (
            _two_block_layer(b_small + 2, alpha, b_small, beta, r)
            - math.comb(b_small + 2, r) * alpha**r
            - math.comb(b_small, r) * beta**r
        )
        cross_new = (
            _two_block_layer(b_small + 1, alpha_new, b_small + 1, beta_new, r)
            - math.comb(b_small + 1, r) * alpha_new**r
            - math.comb(b_small + 1, r) * beta_new**r
        )
        breakdown[("cross", r)] = rfact * (cross_new - cross_old)
    else:
        ratio_bound = b_small / (b_small + 1)
        pre = {
            "gap_at_least_two": True,
            "value_ratio_below_bound": alpha < beta * ratio_bound * (1 + 1e-12),
            "small_class_at_least_r_minus_1": b_small >= r - 1,
        }
        alpha_new = a_big * alpha / (a_big - 1)
        beta_new = b_small * beta / (b_small + 1)
        old_value = tuple_polyform(t, vals)
        new_sizes = [a_big - 1, *[mb[0] for mb in middles], b_small + 1]
        new_vals = [alpha_new, *[mb[1] for mb in middles], beta_new]
        new_value = class_polyform(r, [[(sz, v)] for sz, v in zip(new_sizes, new_vals)])

        e_outside = _block_esym_list(middles, r)
        breakdown = {}
        for qq in range(2, r):
            e_old = _two_block_layer(a_big, alpha, b_small, beta, qq)
            e_new = _two_block_layer(a_big - 1, alpha_new, b_small + 1, beta_new, qq)
            if e_outside[r - qq]:
                breakdown[("external", qq)] = rfact * e_outside[r - qq] * (e_new - e_old)
        mixed_old = _two_block_layer(a_big, alpha, b_small, beta, r)
        mixed_old -= math.comb(a_big, r) * alpha**r + math.comb(b_small, r) * beta**r
        mixed_new = _two_block_layer(a_big - 1, alpha_new, b_small + 1, beta_new, r)
        mixed_new -= math.comb(a_big - 1, r) * alpha_new**r + math.comb(b_small + 1, r) * beta_new**r
        breakdown[("mixed", r)] = rfact * (mixed_new - mixed_old)

    strict = new_value > old_value + 1e-9 * abs(old_value)
    return SmoothingOutcome(old_value, new_value, strict, breakdown, pre, result)
