"""Executable acceptance suite: one check per verification criterion.

Each criterion returns a structured result with a pass flag, a human-readable
detail line, and its runtime against a fixed budget.  The CLI ``verify``
subcommand and the pytest acceptance module both drive these functions, so
the gate is the same everywhere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .analysis import (
    RatioKind,
    check_error_relation_quadratic,
    efficiency_report_continuous,
    efficiency_threshold,
    estimate_q_order,
    ratio_diagnostic,
)
from .backends import Binary64, DoubleDouble
from .charpoly import (
    h_map,
    p_poly,
    q_poly,
    solve_c_2m1,
    solve_c_2m2,
    solve_c_m0,
)
from .dynamics import iterate_ratio, verify_against_simulation
from .errors import PoleAtUnitPowerError
from .fibonacci import binet, fib, fib_shift_identity
from .iterate import StoppingCriteria, Termination, run_newton, run_secant, tail_ratio
from .problems import get_problem

__all__ = ["CriterionResult", "CRITERIA", "run_suite", "suite_names"]


@dataclass(frozen=True)
class CriterionResult:
    cid: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float


def _result(cid, title, budget, started, ok, detail) -> CriterionResult:
    elapsed = time.perf_counter() - started
    if elapsed >= budget:
        ok = False
        detail += f" [runtime {elapsed:.3f}s over budget {budget}s]"
    return CriterionResult(cid, title, ok, detail, elapsed, budget)


def _dd_secant_estimate():
    trace = run_secant(
        get_problem("quadratic_sqrt2"), "1.4", "1.5", backend=DoubleDouble
    )
    return estimate_q_order(trace)


def criterion_1() -> CriterionResult:
    t0 = time.perf_counter()
    est = _dd_secant_estimate()
    ok = 1.568 <= est.p_hat <= 1.668
    return _result(
        1,
        "secant order on quadratic_sqrt2 (double-double)",
        0.1,
        t0,
        ok,
        f"p_hat={est.p_hat:.6f}, want [1.568, 1.668]",
    )


def criterion_2() -> CriterionResult:
    t0 = time.perf_counter()
    est = _dd_secant_estimate()
    target = 0.52571
    ok = abs(est.c_hat - target) <= 0.10 * target
    return _result(
        2,
        "secant error constant on quadratic_sqrt2 (double-double)",
        0.1,
        t0,
        ok,
        f"c_hat={est.c_hat:.6f}, want within 10% of {target}",
    )


def criterion_3() -> CriterionResult:
    t0 = time.perf_counter()
    trace = run_newton(get_problem("quadratic_sqrt2"), "1.5", backend=DoubleDouble)
    est = estimate_q_order(trace)
    target = 0.35355
    ok = 1.9 <= est.p_hat <= 2.1 and abs(est.c_hat - target) <= 0.10 * target
    return _result(
        3,
        "newton order and error constant (double-double)",
        0.1,
        t0,
        ok,
        f"p_hat={est.p_hat:.6f} want [1.9,2.1]; c_hat={est.c_hat:.6f} want ~{target}",
    )


_LINEAR_RATES = {2: 0.6180339887, 3: 0.7548776662, 4: 0.8191725134}


def criterion_4() -> CriterionResult:
    t0 = time.perf_counter()
    details, ok = [], True
    for m, rate in _LINEAR_RATES.items():
        trace = run_secant(get_problem(f"pure_power_{m}"), 1e-3, 0.5e-3)
        tail = tail_ratio(trace)
        good = tail is not None and abs(tail - rate) <= 1e-6
        ok &= good
        details.append(f"m={m}: tail={tail:.10f} vs {rate}")
    return _result(
        4, "linear rate at pure-power multiple roots", 0.5, t0, ok, "; ".join(details)
    )


def criterion_5() -> CriterionResult:
    t0 = time.perf_counter()
    problem = get_problem("shifted_power_2_mixed")
    alpha = float(problem.root(Binary64))
    trace = run_secant(problem, alpha + 1e-4, alpha + 0.5e-4)
    tail = tail_ratio(trace)
    ok = tail is not None and abs(tail - 0.6180339887) <= 1e-4
    return _result(
        5,
        "linear rate at a non-monomial double root",
        0.1,
        t0,
        ok,
        f"tail={tail:.10f}, want within 1e-4 of 0.6180339887",
    )


def criterion_6() -> CriterionResult:
    t0 = time.perf_counter()
    B = DoubleDouble
    k_star = -(1 + B.sqrt(B.of(5))) / 2
    e0 = B.of("1e-3")
    trace = run_secant(get_problem("pure_power_2"), e0, k_star * e0, backend=B)
    diverged = trace.termination == Termination.DIVERGED
    growth_ok = True
    for n in range(20):
        ratio = float(trace.steps[n + 1].E) / float(trace.steps[n].E)
        growth_ok &= abs(ratio - 1.6180339887) <= 1e-3
    ok = diverged and growth_ok
    return _result(
        6,
        "divergence from the repelling ratio fixed point",
        0.1,
        t0,
        ok,
        f"termination={trace.termination.value} after {len(trace.steps)} steps; "
        f"first-20 growth within 1e-3 of 1.618: {growth_ok}",
    )


def criterion_7() -> CriterionResult:
    t0 = time.perf_counter()
    problem = get_problem("pure_power_2")
    t1 = run_secant(problem, 1e-3, -1e-3)
    t2 = run_secant(problem, 1e-3, -2e-3)
    ok = (
        t1.termination == Termination.SECANT_BREAKDOWN
        and t1.breakdown_step == 2
        and t2.termination == Termination.SECANT_BREAKDOWN
        and t2.breakdown_step == 3
    )
    return _result(
        7,
        "breakdown steps for mirrored and doubled starting errors",
        0.1,
        t0,
        ok,
        f"k0=-1: {t1.termination.value}@{t1.breakdown_step}; "
        f"k0=-2: {t2.termination.value}@{t2.breakdown_step}",
    )


def criterion_8() -> CriterionResult:
    t0 = time.perf_counter()
    issues = []
    for m in range(2, 9):
        if abs(float(p_poly(m, solve_c_m0(m)))) > 1e-13:
            issues.append(f"p_{m}(c_m0) residual")
        if m % 2 == 0:
            if abs(float(p_poly(m, solve_c_2m1(m)))) > 1e-13:
                issues.append(f"p_{m}(c_{m},1) residual")
            if abs(float(q_poly(m, solve_c_2m2(m)))) > 1e-13:
                issues.append(f"q_{m}(c_{m},2) residual")
    if float(solve_c_2m2(2)) != -2.0:
        issues.append("c_2,2 not exactly -2")
    for m in (2, 4):
        fixed = (float(solve_c_m0(m)), float(solve_c_2m1(m)))
        for c in fixed:
            if abs(float(h_map(m, c)) - c) > 1e-12:
                issues.append(f"h_{m} not fixed at {c:.6f}")
        for i in range(10_000):
            k = -3.0 + 6.0 * i / 9_999
            try:
                drift = abs(float(h_map(m, k)) - k)
            except PoleAtUnitPowerError:
                continue
            if drift <= 1e-12:
                issues.append(f"spurious fixed point of h_{m} at grid k={k}")
    return _result(
        8,
        "characteristic constants and ratio-map fixed points",
        1.0,
        t0,
        not issues,
        "ok" if not issues else "; ".join(issues[:4]),
    )


def criterion_9() -> CriterionResult:
    t0 = time.perf_counter()
    details, ok = [], True
    for m in (2, 4):
        c1 = float(solve_c_2m1(m))
        c2 = float(solve_c_2m2(m))
        specials = (-1.0, 0.0, 1.0, c1, c2)
        kept = agree = 0
        for i in range(401):
            k0 = -3.0 + 6.0 * i / 400
            if any(abs(k0 - s) <= 1e-3 for s in specials):
                continue
            proxy = iterate_ratio(m, k0)
            if proxy.exit_value is not None and any(
                abs(proxy.exit_value - s) <= 1e-3 for s in specials
            ):
                continue  # verdict flips inside this sliver; boundary set
            kept += 1
            agree += verify_against_simulation(m, k0, 1e-4).agree
        rate = agree / kept
        ok &= rate >= 0.99
        details.append(f"m={m}: {agree}/{kept} = {rate:.4f}")
    return _result(
        9, "classifier agrees with secant simulation", 10.0, t0, ok, "; ".join(details)
    )


def criterion_10() -> CriterionResult:
    t0 = time.perf_counter()
    binet_bad = [
        n for n in range(79) if round(float(binet(n, Binary64))) != fib(n)
    ]
    shift_bad = [
        n
        for n in range(101)
        if float(fib_shift_identity(n, DoubleDouble))
        > 10 * DoubleDouble.eps * fib(n + 1)
    ]
    ok = not binet_bad and not shift_bad
    return _result(
        10,
        "closed-form Fibonacci identities",
        0.1,
        t0,
        ok,
        f"binet mismatches (binary64, n<=78): {binet_bad or 'none'}; "
        f"shift-identity violations (dd, n<=100): {shift_bad or 'none'}",
    )


def criterion_11() -> CriterionResult:
    t0 = time.perf_counter()
    theta = efficiency_threshold()
    ok = abs(theta - 0.44042) <= 1e-4
    flips = []
    for i in range(100):
        s = 0.01 + (0.99 - 0.01) * i / 99
        rep = efficiency_report_continuous(1.0, s, 0.3536, 0.1, 1e-12)
        if (rep.t_secant < rep.t_newton) != (s > theta):
            flips.append(s)
    ok &= not flips
    return _result(
        11,
        "newton/secant cost crossover threshold",
        0.1,
        t0,
        ok,
        f"threshold={theta:.6f} (want 0.44042 +/- 1e-4); crossover violations: "
        f"{flips or 'none'}",
    )


def criterion_12() -> CriterionResult:
    t0 = time.perf_counter()
    stop = StoppingCriteria(max_iter=10, precision_floor=0.0)
    trace = run_secant(get_problem("quadratic_sqrt2"), 1.0, 2.0, stop)
    residual = check_error_relation_quadratic(trace, 2)
    ok = residual <= 1e-12 and len(trace.steps) >= 10
    return _result(
        12,
        "exact quadratic error identity",
        0.1,
        t0,
        ok,
        f"max residual={residual:.3e} over {len(trace.steps)} steps, want <= 1e-12",
    )


def criterion_13() -> CriterionResult:
    t0 = time.perf_counter()
    k = 0.5
    z = [k ** (n - 1) for n in range(1, 21)]
    y = [k ** (n + (-1) ** n) for n in range(1, 21)]
    dz = ratio_diagnostic(z)
    dy = ratio_diagnostic(y)
    ok = (
        dz.kind == RatioKind.Q_LINEAR
        and abs(dz.c - 0.5) <= 1e-6
        and dy.kind == RatioKind.OSCILLATING
    )
    return _result(
        13,
        "ratio diagnostic separates linear-in-bound from linear-in-ratio",
        0.1,
        t0,
        ok,
        f"z: {dz.kind.value}(c={dz.c}); y: {dy.kind.value}(lo={dy.lo}, hi={dy.hi})",
    )


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
    13: criterion_13,
}

# Criteria needing the double-double backend; the fast suite skips them.
_DD_CRITERIA = frozenset({1, 2, 3, 6, 10})

_SUITES = {
    "fast": tuple(cid for cid in CRITERIA if cid not in _DD_CRITERIA),
    "full": tuple(CRITERIA),
}


def suite_names() -> tuple[str, ...]:
    return tuple(_SUITES)


def run_suite(suite: str) -> list[CriterionResult]:
    try:
        cids = _SUITES[suite]
    except KeyError:
        raise ValueError(
            f"unknown suite {suite!r}; expected one of {sorted(_SUITES)}"
        ) from None
    return [CRITERIA[cid]() for cid in cids]
