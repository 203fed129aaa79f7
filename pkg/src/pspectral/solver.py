"""Numerical computation of the p-spectral radius.

Two solvers share the same strategy: multi-start projected gradient ascent on
the nonnegative l_p sphere (simplex projection at p=1), followed by a Newton
polish of the Lagrange stationarity system on the active support.  The ascent
is the correctness reference; the polish only replaces its answer when it
verifiably reduces the stationarity residual.  For 1 <= p < r the problem is
nonconvex, so results come with no global-optimality guarantee beyond the
multi-start evidence and the analytic sandwich bounds checked by the harness.

`lambda_p_dense` works on an explicit edge list; `lambda_p_classes` optimizes
the k class values of a complete k-chromatic graph directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hypergraph import ClassTuple, UniformHypergraph, WeightVector

_SUPPORT_EPS = 1e-13
_MIN_STEP = 1e-18


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 10000
    restarts: int = 16
    seed: int = 0
    step_shrink: float = 0.5
    armijo: float = 1e-4  # sufficient-increase constant

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("at least one restart required")


@dataclass(frozen=True)
class SpectralResult:
    lam: float
    weights: WeightVector
    residual: float
    restarts_used: int
    converged: bool
    class_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.lam < 0 or self.residual < 0:
            raise ValueError("lambda and residual must be nonnegative")


# ---------------------------------------------------------------------------
# dense polyform machinery
# ---------------------------------------------------------------------------


def _loo_products(xe: np.ndarray) -> np.ndarray:
    """Per-edge leave-one-out products, zero-safe (no division)."""
    m, r = xe.shape
    left = np.ones((m, r))
    right = np.ones((m, r))
    if r > 1:
        left[:, 1:] = np.cumprod(xe[:, :-1], axis=1)
        right[:, :-1] = np.cumprod(xe[:, :0:-1], axis=1)[:, ::-1]
    return left * right


class _DenseProblem:
    def __init__(self, G: UniformHypergraph):
        self.n = G.n
        self.r = G.r
        self.edges = np.array(G.edges, dtype=np.intp).reshape(len(G.edges), G.r)
        self.rfact = float(math.factorial(G.r))
        self.rm1fact = float(math.factorial(G.r - 1))

    def value(self, x: np.ndarray) -> float:
        return self.rfact * float(np.prod(x[self.edges], axis=1).sum())

    def link_sums(self, x: np.ndarray) -> np.ndarray:
        """L_u = sum over edges through u of the product of the other weights."""
        L = np.zeros(self.n)
        if len(self.edges):
            np.add.at(L, self.edges, _loo_products(x[self.edges]))
        return L

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.rfact * self.link_sums(x)

    def pair_sums(self, x: np.ndarray) -> np.ndarray:
        """H[u,w] = sum over edges containing both of the product of the rest."""
        H = np.zeros((self.n, self.n))
        r = self.r
        xe = x[self.edges]
        for i in range(r):
            for j in range(i + 1, r):
                others = [t for t in range(r) if t != i and t != j]
                pp = np.prod(xe[:, others], axis=1) if others else np.ones(len(self.edges))
                np.add.at(H, (self.edges[:, i], self.edges[:, j]), pp)
                np.add.at(H, (self.edges[:, j], self.edges[:, i]), pp)
        return H


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the unit simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    mask = u - css / idx > 0
    rho = idx[mask][-1]
    theta = css[mask][-1] / rho
    return np.maximum(v - theta, 0.0)


def _project_lp(v: np.ndarray, p: float) -> np.ndarray:
    y = np.maximum(v, 0.0)
    s = float((y**p).sum())
    if s <= 0.0:
        y = np.ones_like(v)
        s = float((y**p).sum())
    return y / s ** (1.0 / p)


def _ascend(x0, value, grad, project, cfg: SolverConfig):
    """Projected gradient ascent with backtracking; stops after 20 consecutive
    iterations of relative improvement below cfg.tol."""
    x = project(np.asarray(x0, dtype=float))
    f = value(x)
    eta = 1.0
    stall = 0
    converged = False
    for _ in range(cfg.max_iter):
        g = grad(x)
        step = eta
        moved = False
        while step > _MIN_STEP:
            xn = project(x + step * g)
            d = xn - x
            fn = value(xn)
            if fn >= f + cfg.armijo * max(float(g @ d), 0.0) and fn > f:
                moved = True
                break
            step *= cfg.step_shrink
        if not moved:
            converged = True
            break
        rel = (fn - f) / max(abs(f), 1e-300)
        x, f = xn, fn
        eta = min(step * 2.0, 1e6)
        if rel < cfg.tol:
            stall += 1
            if stall >= 20:
                converged = True
                break
        else:
            stall = 0
    return x, f, converged


def _dense_residual(prob: _DenseProblem, p: float, x: np.ndarray, lam: float) -> float:
    """Stationarity violation; the p>1 case is the eigenequation residual."""
    L = prob.rm1fact * prob.link_sums(x)
    pos = x > 0
    if p > 1:
        lhs = lam * np.power(x, p - 1.0, where=pos, out=np.zeros_like(x))
        res_pos = np.abs(lhs[pos] - L[pos]).max(initial=0.0)
        res_zero = np.maximum(L[~pos], 0.0).max(initial=0.0)
        return max(res_pos, res_zero)
    # p = 1: on the simplex the multiplier equals lambda on the support.
    res_pos = np.abs(L[pos] - lam).max(initial=0.0)
    res_zero = np.maximum(L[~pos] - lam, 0.0).max(initial=0.0)
    return max(res_pos, res_zero)


def _newton_polish_dense(prob: _DenseProblem, p: float, x0: np.ndarray, max_steps: int = 50):
    """Newton iteration on the KKT system over the positive support.

    Returns (x, lam, residual) of the best iterate, or None when the iteration
    fails to produce a feasible improvement.
    """
    x = x0.copy()
    supp = np.where(x > _SUPPORT_EPS)[0]
    if len(supp) == 0:
        return None
    x[x <= _SUPPORT_EPS] = 0.0
    mu = prob.value(x)
    best = None
    for _ in range(max_steps):
        xs = x[supp]
        L = prob.rm1fact * prob.link_sums(x)
        xpow = xs ** (p - 1.0)
        F = np.concatenate([L[supp] - mu * xpow, [float((xs**p).sum()) - 1.0]])
        lam_now = prob.value(x)
        res_now = _dense_residual(prob, p, x, lam_now)
        if best is None or res_now < best[2]:
            best = (x.copy(), lam_now, res_now)
        if np.abs(F).max() <= 1e-15 * max(1.0, abs(mu)):
            break
        m = len(supp)
        J = np.zeros((m + 1, m + 1))
        H = prob.pair_sums(x)
        J[:m, :m] = prob.rm1fact * H[np.ix_(supp, supp)]
        if p != 1.0:
            J[:m, :m] -= np.diag(mu * (p - 1.0) * xs ** (p - 2.0))
        J[:m, m] = -xpow
        J[m, :m] = p * xpow
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        while t > 1e-8 and np.any(xs + t * delta[:m] <= 0.0):
            t *= 0.5
        if t <= 1e-8:
            break
        x[supp] = xs + t * delta[:m]
        mu += t * delta[m]
    return best


def _restart_points(n: int, restarts: int, seed: int):
    """Restart 0 is uniform; the rest are seeded multiplicative perturbations."""
    base = np.ones(n)
    yield base.copy()
    for j in range(1, restarts):
        rng = np.random.default_rng([seed, j])
        yield base * np.exp(0.35 * rng.standard_normal(n))


def _uniform_result(G: UniformHypergraph, p: float) -> SpectralResult:
    w = (G.n ** (-1.0 / p) if G.n else 0.0) * np.ones(G.n)
    return SpectralResult(0.0, WeightVector(tuple(w), p), 0.0, 0, True)


def lambda_p_dense(G: UniformHypergraph, p: float, cfg: SolverConfig = SolverConfig()) -> SpectralResult:
    """Best value over restarts of projected ascent of the polyform on the
    nonnegative l_p sphere, Newton-polished on the final support."""
    if p < 1:
        raise ValueError(f"norm exponent must be >= 1, got {p}")
    if not G.edges:
        return _uniform_result(G, p)
    prob = _DenseProblem(G)
    project = _project_simplex if p == 1.0 else (lambda v: _project_lp(v, p))
    best = None  # (lam, x, residual, converged)
    for x0 in _restart_points(G.n, cfg.restarts, cfg.seed):
        x, f, converged = _ascend(x0, prob.value, prob.grad, project, cfg)
        res = _dense_residual(prob, p, x, f)
        polished = _newton_polish_dense(prob, p, x)
        if polished is not None:
            xp, fp, rp = polished
            if rp < res and fp >= f - 1e-7 * max(1.0, f):
                x, f, res = xp, fp, rp
        converged = converged or res <= cfg.tol * max(1.0, f)
        if best is None or f > best[0]:
            best = (f, x, res, converged)
    lam, x, res, converged = best
    return SpectralResult(float(lam), WeightVector(tuple(float(v) for v in x), p), float(res), cfg.restarts, converged)


def eigen_residual(G: UniformHypergraph, p: float, x: Sequence[float] | WeightVector, lam: float) -> float:
    """Max eigenequation violation max_u |lam x_u^{p-1} - (r-1)! link_u(x)|.

    Vertices with x_u = 0 contribute the one-sided violation only.
    """
    if p <= 1:
        raise ValueError("eigenequations require p > 1")
    entries = x.entries if isinstance(x, WeightVector) else x
    if len(entries) != G.n:
        raise ValueError(f"weight vector has length {len(entries)}, graph has {G.n} vertices")
    prob = _DenseProblem(G)
    return float(_dense_residual(prob, p, np.asarray(entries, dtype=float), lam))


# ---------------------------------------------------------------------------
# reduced k-variable solver for complete k-chromatic graphs
# ---------------------------------------------------------------------------


def _expansion(a: np.ndarray, sizes: Sequence[int], degree: int) -> np.ndarray:
    """Coefficients up to z^degree of prod_i (1 + a_i z)^{n_i}."""
    poly = np.zeros(degree + 1)
    poly[0] = 1.0
    for ai, ni in zip(a, sizes):
        top = min(ni, degree)
        fac = np.array([math.comb(ni, j) * ai**j for j in range(top + 1)])
        poly = np.convolve(poly, fac)[: degree + 1]
    return poly


def _deflate(poly: np.ndarray, ai: float) -> np.ndarray:
    """Divide a truncated expansion by the factor (1 + a_i z)."""
    rest = np.empty_like(poly)
    acc = 0.0
    for j, c in enumerate(poly):
        acc = c - ai * acc
        rest[j] = acc
    return rest


class _ClassProblem:
    """Polyform of Q(n_1,...,n_k) restricted to class-constant weights."""

    def __init__(self, t: ClassTuple):
        self.sizes = t.sizes
        self.k = t.k
        self.r = t.r
        self.rfact = float(math.factorial(t.r))
        self.rm1fact = float(math.factorial(t.r - 1))
        self.mono = np.array([math.comb(s, t.r) for s in t.sizes], dtype=float)
        self.mono_link = np.array([math.comb(s - 1, t.r - 1) for s in t.sizes], dtype=float)
        self.nsz = np.array(t.sizes, dtype=float)

    def value(self, a: np.ndarray) -> float:
        full = _expansion(a, self.sizes, self.r)
        return self.rfact * float(full[self.r] - self.mono @ a**self.r)

    def link_sums(self, a: np.ndarray) -> np.ndarray:
        """Per-class L_i, matching the dense link sums of any class vertex."""
        full = _expansion(a, self.sizes, self.r)
        L = np.empty(self.k)
        for i in range(self.k):
            rest = _deflate(full, a[i])
            L[i] = rest[self.r - 1] - self.mono_link[i] * a[i] ** (self.r - 1)
        return L

    def grad(self, a: np.ndarray) -> np.ndarray:
        return self.rfact * self.nsz * self.link_sums(a)

    def link_jacobian(self, a: np.ndarray) -> np.ndarray:
        full = _expansion(a, self.sizes, self.r)
        J = np.empty((self.k, self.k))
        for i in range(self.k):
            rest = _deflate(full, a[i])
            for j in range(self.k):
                rest2 = _deflate(rest, a[j])
                if j == i:
                    J[i, i] = (self.sizes[i] - 1) * rest2[self.r - 2] - (
                        (self.r - 1) * self.mono_link[i] * a[i] ** (self.r - 2)
                    )
                else:
                    J[i, j] = self.sizes[j] * rest2[self.r - 2]
        return J


def _class_residual(prob: _ClassProblem, p: float, a: np.ndarray, lam: float) -> float:
    L = prob.rm1fact * prob.link_sums(a)
    pos = a > 0
    if p > 1:
        lhs = lam * np.power(a, p - 1.0, where=pos, out=np.zeros_like(a))
        res_pos = np.abs(lhs[pos] - L[pos]).max(initial=0.0)
        res_zero = np.maximum(L[~pos], 0.0).max(initial=0.0)
        return max(res_pos, res_zero)
    res_pos = np.abs(L[pos] - lam).max(initial=0.0)
    res_zero = np.maximum(L[~pos] - lam, 0.0).max(initial=0.0)
    return max(res_pos, res_zero)


def _newton_polish_classes(prob: _ClassProblem, p: float, a0: np.ndarray, max_steps: int = 50):
    a = a0.copy()
    supp = np.where(a > _SUPPORT_EPS)[0]
    if len(supp) == 0:
        return None
    a[a <= _SUPPORT_EPS] = 0.0
    mu = prob.value(a)
    nsz = prob.nsz
    best = None
    for _ in range(max_steps):
        asup = a[supp]
        L = prob.rm1fact * prob.link_sums(a)
        apow = asup ** (p - 1.0)
        F = np.concatenate([L[supp] - mu * apow, [float((nsz[supp] * asup**p).sum()) - 1.0]])
        lam_now = prob.value(a)
        res_now = _class_residual(prob, p, a, lam_now)
        if best is None or res_now < best[2]:
            best = (a.copy(), lam_now, res_now)
        if np.abs(F).max() <= 1e-15 * max(1.0, abs(mu)):
            break
        m = len(supp)
        J = np.zeros((m + 1, m + 1))
        JL = prob.link_jacobian(a)
        J[:m, :m] = prob.rm1fact * JL[np.ix_(supp, supp)]
        if p != 1.0:
            J[:m, :m] -= np.diag(mu * (p - 1.0) * asup ** (p - 2.0))
        J[:m, m] = -apow
        J[m, :m] = p * nsz[supp] * apow
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        while t > 1e-8 and np.any(asup + t * delta[:m] <= 0.0):
            t *= 0.5
        if t <= 1e-8:
            break
        a[supp] = asup + t * delta[:m]
        mu += t * delta[m]
    return best


def _project_classes(a: np.ndarray, nsz: np.ndarray, p: float) -> np.ndarray:
    y = np.maximum(a, 0.0)
    s = float((nsz * y**p).sum())
    if s <= 0.0:
        y = np.ones_like(a)
        s = float((nsz * y**p).sum())
    return y / s ** (1.0 / p)


def lambda_p_classes(t: ClassTuple, p: float, cfg: SolverConfig = SolverConfig()) -> SpectralResult:
    """p-spectral radius of Q(n_1,...,n_k) via the k class values a_i,
    optimized under sum_i n_i a_i^p = 1."""
    if p < 1:
        raise ValueError(f"norm exponent must be >= 1, got {p}")
    prob = _ClassProblem(t)
    if math.comb(t.n, t.r) == sum(math.comb(s, t.r) for s in t.sizes):
        # edgeless: every r-set is monochromatic
        u = t.n ** (-1.0 / p)
        return SpectralResult(
            0.0, WeightVector((u,) * t.n, p), 0.0, 0, True, class_values=(u,) * t.k
        )
    if p == 1.0:
        # ascend in class-mass coordinates b = n_i a_i, where the constraint
        # is the plain simplex and the gradient metric is consistent
        nsz = prob.nsz
        value = lambda b: prob.value(b / nsz)
        grad = lambda b: prob.grad(b / nsz) / nsz
        project = _project_simplex
        to_classes = lambda b: b / nsz
    else:
        value, grad = prob.value, prob.grad
        project = lambda v: _project_classes(v, prob.nsz, p)
        to_classes = lambda v: v
    best = None
    for a0 in _restart_points(t.k, cfg.restarts, cfg.seed):
        a, f, converged = _ascend(a0, value, grad, project, cfg)
        a = to_classes(a)
        res = _class_residual(prob, p, a, f)
        polished = _newton_polish_classes(prob, p, a)
        if polished is not None:
            ap, fp, rp = polished
            if rp < res and fp >= f - 1e-7 * max(1.0, f):
                a, f, res = ap, fp, rp
        converged = converged or res <= cfg.tol * max(1.0, f)
        if best is None or f > best[0]:
            best = (f, a, res, converged)
    lam, a, res, converged = best
    entries = []
    for size, ai in zip(t.sizes, a):
        entries.extend([float(ai)] * size)
    return SpectralResult(
        float(lam), WeightVector(tuple(entries), p), float(res), cfg.restarts, converged, class_values=tuple(float(v) for v in a)
    )


# ---------------------------------------------------------------------------
# analytic sanity checks
# ---------------------------------------------------------------------------


def holder_check(G: UniformHypergraph, p: float, lambda_p: float, lambda_1: float, slack: float = 1e-8):
    """lambda_p <= (r!|G|)^{1-1/p} lambda_1^{1/p} + slack; returns (ok, margin)."""
    if p <= 1:
        raise ValueError("the reduction needs p > 1")
    bound = (math.factorial(G.r) * len(G.edges)) ** (1.0 - 1.0 / p) * max(lambda_1, 0.0) ** (1.0 / p)
    return lambda_p <= bound + slack, bound - lambda_p


@dataclass(frozen=True)
class StructuralReport:
    """Checks of the extremal-tuple structure from the solved class values:
    S1 opposite ordering, S2 two-sided p-mass bounds, S3 size diameter."""

    s1: bool
    s2: bool
    s3: bool
    class_values: tuple[float, ...]
    class_masses: tuple[float, ...]
    size_gap: int
    gap_bound: int
    extremal_input: bool = True

    @property
    def ok(self) -> bool:
        return self.s1 and self.s2 and self.s3


def structural_check(
    t: ClassTuple, p: float, cfg: SolverConfig = SolverConfig(), *, extremal_input: bool = True, tol: float = 1e-8
) -> StructuralReport:
    if p <= 1:
        raise ValueError("structural hypotheses are stated for p > 1")
    result = lambda_p_classes(t, p, cfg)
    a = result.class_values
    masses = tuple(n_i * ai**p for n_i, ai in zip(t.sizes, a))
    s1 = all(a[i] <= a[i + 1] + tol for i in range(t.k - 1))
    top = masses[0]
    lower = (t.sizes[0] - 1) * a[0] ** p
    scale = max(top, 1e-300)
    s2 = all(top >= m_i - tol * scale and m_i >= lower - tol * scale for m_i in masses)
    gap = t.sizes[0] - t.sizes[-1]
    bound = math.ceil(1.0 / (p - 1.0))
    s3 = gap <= bound
    return StructuralReport(s1, s2, s3, a, masses, gap, bound, extremal_input)
