"""Verification harness: tuple enumeration, main-theorem sweeps, evaluation
grid certification, randomized lemma suites, and anti-Wilf certificates.

Reports are plain dicts with a versioned schema ("schema": 1), deterministic
for fixed flags and seed: no timestamps, stable row ordering, rationals as
"num/den" strings.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict
from fractions import Fraction
from typing import Iterable, Sequence

from . import __version__
from .exact import format_rational, gen_binomial
from .evaluation import (
    EvaluationContext,
    differential_certificate,
    endpoint_defects,
    evaluation_bound_vs_solver,
    gamma_coeffs,
    gamma_oracle,
    comparison_check,
    localize_check,
    mono_bound,
    scalar_endpoint_check,
    stability_bound,
)
from .hypergraph import (
    ClassTuple,
    UniformHypergraph,
    balanced_tuple,
    tuple_polyform,
    weak_chromatic_number,
)
from .lemmas import (
    LocalPair,
    check_majorization,
    coeff_monotone_scan,
    extremal_order_report,
    full_layer_pair,
    gap_two_masses,
    lr_monotone_scan,
    mixed_delta_p1,
    one_sided_layer_pair,
    pure_cross_delta,
    smoothing_compare,
    stop_loss_breakpoints,
    stop_loss_kernel_error,
    t_mass_switch_delta,
)
from .solver import SolverConfig, lambda_p_classes, lambda_p_dense, structural_check

ARGMAX_MARGIN = 1e-7
CERT_SLACK = 1e-9  # float headroom before an anti-Wilf certificate is issued


class CertificationError(AssertionError):
    """An exact certification check failed; carries the offending instance."""


def _report(scenario: str, parameters: dict, rows: list, seed: int) -> dict:
    passed = sum(1 for r in rows if r.get("verdict") == "pass")
    failed = sum(1 for r in rows if r.get("verdict") == "fail")
    inconclusive = sum(1 for r in rows if r.get("verdict") == "inconclusive")
    return {
        "schema": 1,
        "tool_version": __version__,
        "scenario": scenario,
        "parameters": parameters,
        "seed": seed,
        "rows": rows,
        "summary": {
            "rows": len(rows),
            "passed": passed,
            "failed": failed,
            "inconclusive": inconclusive,
            "ok": failed == 0 and inconclusive == 0,
        },
    }


def enumerate_tuples(n: int, k: int) -> list[ClassTuple]:
    """All partitions of n into exactly k positive descending parts,
    reverse-lexicographically ordered, for uniformity r supplied later."""
    if n < k:
        raise ValueError(f"cannot split n={n} into k={k} positive parts")

    def rec(total: int, parts: int, cap: int):
        if parts == 1:
            if 1 <= total <= cap:
                yield (total,)
            return
        for first in range(min(total - parts + 1, cap), 0, -1):
            for rest in rec(total - first, parts - 1, first):
                yield (first,) + rest

    return list(rec(n, k, n))


def _tuples_for(r: int, n: int, k: int) -> list[ClassTuple]:
    return [ClassTuple(r, sizes) for sizes in enumerate_tuples(n, k)]


# ---------------------------------------------------------------------------
# main theorem sweep
# ---------------------------------------------------------------------------


def verify_main(r: int, k: int, n: int, p_list: Sequence[float], cfg: SolverConfig = SolverConfig()) -> dict:
    """Solve every class tuple at each p and check that the balanced tuple is
    the unique argmax with margin >= 1e-7; run the structural and smoothing
    verifiers alongside."""
    if n <= (r - 1) * k:
        raise ValueError(f"sweep needs n > (r-1)k, got n={n}, r={r}, k={k}")
    if n > 14:
        raise ValueError(f"solver budget limits the sweep to n <= 14, got n={n}")
    tuples = _tuples_for(r, n, k)
    balanced = balanced_tuple(r, k, n)
    rows = []
    for p in p_list:
        solved = [(t, lambda_p_classes(t, float(p), cfg)) for t in tuples]
        all_converged = all(res.converged for _, res in solved)
        by_lam = sorted(solved, key=lambda pair: -pair[1].lam)
        winner, win_res = by_lam[0]
        margin = win_res.lam - by_lam[1][1].lam if len(by_lam) > 1 else math.inf
        if not all_converged:
            verdict = "inconclusive"
        elif winner.sizes != balanced.sizes:
            verdict = "fail"
        elif margin < ARGMAX_MARGIN:
            verdict = "inconclusive" if len(by_lam) > 1 else "pass"
        else:
            verdict = "pass"

        ordering = extremal_order_report(winner, win_res.class_values, float(p))
        structural = None
        if p > 1:
            rep = structural_check(winner, float(p), cfg)
            structural = {"s1": rep.s1, "s2": rep.s2, "s3": rep.s3, "gap": rep.size_gap, "bound": rep.gap_bound}
            if not rep.ok:
                verdict = "fail"
        if not ordering.ok:
            verdict = "fail"

        smoothing_rows = []
        for t, res in solved:
            if t.sizes[0] - t.sizes[-1] < 2:
                continue
            out = smoothing_compare(t, float(p), cfg)
            smoothing_rows.append(
                {
                    "sizes": list(t.sizes),
                    "old": out.old_value,
                    "new": out.new_value,
                    "strict": out.strict,
                    "preconditions": out.preconditions,
                    "preconditions_ok": out.preconditions_ok,
                }
            )
            if out.preconditions_ok and not out.strict:
                verdict = "fail"

        rows.append(
            {
                "p": p,
                "verdict": verdict,
                "winner": list(winner.sizes),
                "balanced": list(balanced.sizes),
                "margin": margin,
                "lambdas": [{"sizes": list(t.sizes), "lambda": res.lam, "converged": res.converged} for t, res in solved],
                "ordering": asdict(ordering),
                "structural": structural,
                "smoothing": smoothing_rows,
            }
        )
    return _report("verify-main", {"r": r, "k": k, "n": n, "p_list": list(p_list)}, rows, cfg.seed)


# ---------------------------------------------------------------------------
# evaluation grid
# ---------------------------------------------------------------------------


def _parse_range(spec: str | Iterable[int]) -> list[int]:
    if isinstance(spec, str):
        if ".." in spec:
            lo, hi = spec.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(spec)]
    return list(spec)


def verify_evaluation(
    r_range,
    k_range,
    window: int = 20,
    p_list: Sequence[float] = (1.0,),
    cfg: SolverConfig = SolverConfig(),
    *,
    solver_comparison: bool = True,
    strict_margin: float = 1e-6,
) -> dict:
    """Run the exact certification pipeline over the (r, k, n) grid.

    Exact failures abort immediately with the offending instance; the solver
    comparison rows are numeric and only flag their own verdicts.
    """
    rows = []
    r_values, k_values = _parse_range(r_range), _parse_range(k_range)
    for r in r_values:
        for k in k_values:
            diff = differential_certificate(r) if 3 <= r <= 12 else None
            if diff is not None and not diff.ok:
                raise CertificationError(f"differential certificate failed at r={r}")
            for n in range((r - 1) * k + 1, (r - 1) * k + window + 1):
                ctx = EvaluationContext(r, k, n)
                row: dict = {"r": r, "k": k, "n": n, "t": ctx.t}
                if ctx.divisible:
                    row["note"] = "equality case, Bernstein pipeline skipped"
                else:
                    gammas = gamma_coeffs(ctx)
                    if gammas != gamma_oracle(ctx):
                        raise CertificationError(f"Bernstein oracle mismatch at (r,k,n)=({r},{k},{n})")
                    for m, g in enumerate(gammas):
                        if g <= 0:
                            raise CertificationError(f"Gamma_{m} <= 0 at (r,k,n)=({r},{k},{n})")
                    defects = endpoint_defects(ctx)
                    if defects.margin <= 0:
                        raise CertificationError(f"endpoint margin <= 0 at (r,k,n)=({r},{k},{n})")
                    if stability_bound(ctx) > defects.d_all:
                        raise CertificationError(f"stability bound exceeds D_all at (r,k,n)=({r},{k},{n})")
                    if mono_bound(ctx) < defects.d_mono:
                        raise CertificationError(f"mono bound below D_mono at (r,k,n)=({r},{k},{n})")
                    ok_scalar, _ = scalar_endpoint_check(r, ctx.q)
                    if not ok_scalar or not comparison_check(ctx):
                        raise CertificationError(f"endpoint estimate chain failed at (r,k,n)=({r},{k},{n})")
                    loc = localize_check(ctx)
                    if not loc.ok:
                        raise CertificationError(f"localization failed at (r,k,n)=({r},{k},{n})")
                    row["min_gamma"] = format_rational(min(gammas))
                    row["D_all"] = format_rational(defects.d_all)
                    row["D_mono"] = format_rational(defects.d_mono)
                    row["margin"] = format_rational(defects.margin)
                row["verdict"] = "pass"
                if solver_comparison:
                    for p in p_list:
                        cmp_ = evaluation_bound_vs_solver(ctx, float(p), cfg, strict_margin=strict_margin)
                        row[f"bound_p{p}"] = cmp_.bound
                        row[f"solver_p{p}"] = cmp_.solver.lam
                        if not cmp_.ok:
                            row["verdict"] = "fail"
                            row["witness"] = {"p": p, "bound": cmp_.bound, "lambda": cmp_.solver.lam}
                rows.append(row)
    return _report(
        "verify-evaluation",
        {"r": r_values, "k": k_values, "window": window, "p_list": list(p_list)},
        rows,
        cfg.seed,
    )


EVALUATION_CSV_COLUMNS = ["r", "k", "n", "t", "min_gamma", "D_all", "D_mono", "margin", "verdict"]


def evaluation_rows_to_csv(report: dict) -> str:
    lines = [",".join(EVALUATION_CSV_COLUMNS)]
    for row in report["rows"]:
        lines.append(",".join(str(row.get(c, "")) for c in EVALUATION_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# anti-Wilf certificates
# ---------------------------------------------------------------------------


def anti_wilf_threshold(r: int, k: int, n: int, p: float) -> float:
    if n <= (r - 1) * k:
        raise ValueError(f"threshold regime needs n > (r-1)k, got n={n}, r={r}, k={k}")
    exact = math.factorial(r) * (math.comb(n, r) - k * gen_binomial(Fraction(n, k), r))
    return float(exact) * float(n) ** (-r / p)


def anti_wilf(G: UniformHypergraph, k: int, p: float, cfg: SolverConfig = SolverConfig()) -> dict:
    """Spectral coloring certificate: a solver lower bound for lambda above
    the balanced threshold certifies chi(G) >= k+1.

    Cross-checked against the brute-force chromatic number when n <= 10.
    """
    result = lambda_p_dense(G, float(p), cfg)
    threshold = anti_wilf_threshold(G.r, k, G.n, p)
    certified = result.lam > threshold + CERT_SLACK
    cert = {
        "r": G.r,
        "n": G.n,
        "k": k,
        "p": p,
        "lambda_lower": result.lam,
        "threshold": threshold,
        "margin": result.lam - threshold,
        "verdict": f"chi >= {k + 1}" if certified else "no certificate",
        "certified": certified,
    }
    if G.r == 3:
        cert["note"] = "r=3 via quoted result"
    if G.n <= 10:
        chi_at_most_k = weak_chromatic_number(G, k) is not None
        cert["brute_force_agrees"] = (not certified) or (not chi_at_most_k)
    return cert


def random_r_graph(rng: random.Random, r: int, n: int) -> UniformHypergraph:
    import itertools

    density = rng.uniform(0.15, 0.9)
    edges = [e for e in itertools.combinations(range(n), r) if rng.random() < density]
    return UniformHypergraph(r, n, tuple(edges))


def anti_wilf_random_sweep(
    count: int, r: int, k: int, p: float, n_max: int, seed: int = 0, cfg: SolverConfig = SolverConfig()
) -> dict:
    """Random graphs with brute-force cross-checks: no false certificates."""
    rng = random.Random(seed)
    n_min = (r - 1) * k + 1
    if n_max < n_min:
        raise ValueError(f"need n_max >= {n_min}")
    rows = []
    for i in range(count):
        n = rng.randint(n_min, n_max)
        G = random_r_graph(rng, r, n)
        cert = anti_wilf(G, k, p, cfg)
        ok = cert.get("brute_force_agrees", True)
        rows.append(
            {
                "index": i,
                "n": n,
                "edges": len(G.edges),
                "certified": cert["certified"],
                "verdict": "pass" if ok else "fail",
                **({"witness": cert} if not ok else {}),
            }
        )
    return _report("anti-wilf-random", {"count": count, "r": r, "k": k, "p": p, "n_max": n_max}, rows, seed)


# ---------------------------------------------------------------------------
# randomized lemma suites
# ---------------------------------------------------------------------------


def _rand_fraction(rng: random.Random, lo_num=1, hi_num=40, hi_den=12) -> Fraction:
    return Fraction(rng.randint(lo_num, hi_num), rng.randint(1, hi_den))


def _random_local_pair(rng: random.Random) -> LocalPair:
    m = rng.randint(1, 8)
    s_c = _rand_fraction(rng)
    rho = Fraction(m + 1, m + 2) + Fraction(rng.randint(0, 400), 200)
    return LocalPair(m, s_c, s_c * rho)


def _suite_majorization(rng: random.Random) -> bool:
    pair = _random_local_pair(rng)
    old, new = gap_two_masses(pair)
    return check_majorization(old, new)


def _suite_full_layers(rng: random.Random) -> bool:
    pair = _random_local_pair(rng)
    alpha = rng.choice([0.5, 1.0 / 3.0])
    for s in range(1, 2 * pair.m + 3):
        old, new = full_layer_pair(pair, alpha, s)
        if new < old - 1e-10 * max(1.0, abs(old)):
            return False
    return True


def _suite_one_sided(rng: random.Random) -> bool:
    pair = _random_local_pair(rng)
    p = rng.choice([1.5, 2.0, 3.0])
    for s in range(1, pair.m + 3):
        old, new = one_sided_layer_pair(pair, p, s)
        if not new > old:
            return False
    return True


def _suite_t_mass_switch(rng: random.Random) -> bool:
    r = rng.randint(3, 4)
    k = rng.randint(2, 4)
    sizes = sorted((rng.randint(1, 6) for _ in range(k)), reverse=True)
    if sizes[0] == sizes[-1]:
        sizes[0] += 1
    t = ClassTuple(r, tuple(sizes))
    values = [rng.uniform(0.05, 1.0) for _ in range(k)]
    texp = rng.choice([1.0, 1.3, 2.0, 2.7])
    i, j = 0, k - 1
    n_i, n_j = t.sizes[i], t.sizes[j]
    if n_i * values[i] ** texp >= n_j * values[j] ** texp:
        values[i] = (n_j * values[j] ** texp / (2.0 * n_i)) ** (1.0 / texp)
    delta = t_mass_switch_delta(t, values, i, j, texp)
    scale = max(1.0, abs(tuple_polyform(t, values)))
    return delta >= -1e-10 * scale


def _suite_stop_loss_kernel(rng: random.Random) -> bool:
    x = rng.uniform(0.05, 10.0)
    alpha = rng.choice([0.25, 0.5, 0.75])
    return stop_loss_kernel_error(x, alpha) <= 1e-6


def _suite_pure_cross(rng: random.Random) -> bool:
    s = rng.randint(2, 8)
    c = rng.randint(s, 12)
    alpha = rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), None])
    if alpha is None:
        alpha = rng.uniform(0.05, 0.95)
    return pure_cross_delta(c, s, alpha).ok


def _suite_mixed_delta(rng: random.Random) -> bool:
    r = rng.randint(3, 6)
    b = rng.randint(r - 1, 10)
    a = rng.randint(b + 2, 14)
    return mixed_delta_p1(a, b, r).ok


def _suite_breakpoints(rng: random.Random) -> bool:
    s = rng.randint(2, 8)
    c = rng.randint(s, 14)
    return all(b.ok for b in stop_loss_breakpoints(c, s))


def _suite_lr_monotone(rng: random.Random) -> bool:
    r = rng.randint(3, 8)
    start = r + Fraction(rng.randint(0, 200), 100)
    return lr_monotone_scan(r, start, steps=20)


def _suite_coeff_monotone(rng: random.Random) -> bool:
    ell = rng.randint(0, 6)
    m = rng.randint(0, ell)
    t = rng.choice([Fraction(1), Fraction(3, 2), Fraction(2)])
    return coeff_monotone_scan(ell, m, t, z_steps=30)


LEMMA_SUITES = [
    ("majorization", _suite_majorization),
    ("full_layers", _suite_full_layers),
    ("one_sided_layers", _suite_one_sided),
    ("t_mass_switch", _suite_t_mass_switch),
    ("stop_loss_kernel", _suite_stop_loss_kernel),
    ("pure_cross", _suite_pure_cross),
    ("mixed_delta_p1", _suite_mixed_delta),
    ("stop_loss_breakpoints", _suite_breakpoints),
    ("lr_monotone", _suite_lr_monotone),
    ("coeff_monotone", _suite_coeff_monotone),
]


def verify_lemmas(count: int = 500, seed: int = 0) -> dict:
    """Run `count` seeded random instances of every lemma suite."""
    rows = []
    for index, (name, suite) in enumerate(LEMMA_SUITES):
        rng = random.Random(seed * 1_000_003 + index)
        failures = []
        for i in range(count):
            if not suite(rng):
                failures.append(i)
        rows.append(
            {
                "suite": name,
                "count": count,
                "failed": len(failures),
                "verdict": "pass" if not failures else "fail",
                **({"witness": {"instances": failures[:5]}} if failures else {}),
            }
        )
    return _report("verify-lemmas", {"count": count}, rows, seed)


# ---------------------------------------------------------------------------
# solver hygiene sweep
# ---------------------------------------------------------------------------


def verify_solver(
    n_max: int = 10,
    p_list: Sequence[float] = (1.0, 1.5, 2.0, 3.0),
    cfg: SolverConfig = SolverConfig(restarts=8),
    families: Sequence[tuple[int, int]] = ((3, 2), (3, 3), (4, 2), (4, 3)),
) -> dict:
    """Dense/reduced agreement, eigen-residuals, and Holder sandwich over all
    class tuples with n <= n_max."""
    from .hypergraph import build_complete_chromatic
    from .solver import holder_check

    rows = []
    for r, k in families:
        for n in range((r - 1) * k + 1, n_max + 1):
            for t in _tuples_for(r, n, k):
                G = build_complete_chromatic(t)
                lam1 = None
                row = {"r": r, "k": k, "sizes": list(t.sizes), "verdict": "pass"}
                for p in p_list:
                    reduced = lambda_p_classes(t, float(p), cfg)
                    dense = lambda_p_dense(G, float(p), cfg)
                    agree = abs(reduced.lam - dense.lam) <= 1e-7 * max(reduced.lam, dense.lam, 1e-300)
                    residual_ok = True
                    if p > 1:
                        residual_ok = (
                            dense.residual <= 1e-10 * max(1.0, dense.lam)
                            and reduced.residual <= 1e-10 * max(1.0, reduced.lam)
                        )
                    if p == 1.0:
                        lam1 = reduced.lam
                    holder_ok = True
                    if p > 1 and lam1 is not None:
                        holder_ok, _ = holder_check(G, float(p), dense.lam, lam1)
                    if not (agree and residual_ok and holder_ok):
                        row["verdict"] = "fail"
                        row.setdefault("witness", []).append(
                            {"p": p, "reduced": reduced.lam, "dense": dense.lam,
                             "residuals": [reduced.residual, dense.residual],
                             "agree": agree, "residual_ok": residual_ok, "holder_ok": holder_ok}
                        )
                rows.append(row)
    return _report("verify-solver", {"n_max": n_max, "p_list": list(p_list), "families": [list(f) for f in families]}, rows, cfg.seed)
