"""Empirical convergence-order and error-constant estimation, plus the
Newton-vs-secant work model.

The order estimator fits the one-step-memory model

    ln E[n+1] = a * ln E[n] + b * ln E[n-1] + mu

by least squares over the usable window and reads off the order as the
dominant root of x**2 - a*x - b and the error constant as
exp(mu * p / (p + b)).  This one fit covers all three regimes that occur
here: memoryless superlinear data gives (a, b) ~ (p, 0), secant data gives
(a, b) ~ (1, 1) whose dominant root is the golden ratio, and linear data
gives p = 1 with mu the log-rate.  A plain per-step quotient of log-ratios
oscillates for secant traces (the subdominant characteristic root decays like
(1 - p)/p per step) and does not settle within the dozen steps extended
precision affords, which is why the fit is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .backends import Binary64
from .errors import (
    ExactRootTraceError,
    InsufficientDataError,
    InvalidRegimeError,
    WrongProblemError,
    ZeroCurvatureError,
)
from .iterate import IterationTrace, Termination
from .problems import Problem, curvature_ratio

__all__ = [
    "OrderEstimate",
    "estimate_q_order",
    "theoretical_aec_simple",
    "RatioKind",
    "RatioDiagnostic",
    "ratio_diagnostic",
    "check_error_relation_quadratic",
    "EfficiencyReport",
    "efficiency_report",
    "efficiency_report_continuous",
    "efficiency_threshold",
]

_R0 = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class OrderEstimate:
    p_hat: float
    c_hat: float
    samples_used: int
    window: tuple[int, int]


def _fit_order(ln_e: np.ndarray, drop: int) -> tuple[float, float, int]:
    """Least-squares fit of the one-step-memory log model.

    Returns (p_hat, c_hat, equations).  ``drop`` leading steps are excluded
    from the response side of the fit.
    """
    rows, ys = [], []
    for n in range(1 + drop, len(ln_e) - 1):
        rows.append((ln_e[n], ln_e[n - 1], 1.0))
        ys.append(ln_e[n + 1])
    coef, *_ = np.linalg.lstsq(np.array(rows), np.array(ys), rcond=None)
    a, b, mu = (float(v) for v in coef)

    disc = a * a + 4.0 * b
    if disc < 0.0:
        # Complex characteristic roots do not occur for data from these
        # iterations; fall back to the raw log-ratio quotient.
        quotients = [
            (ln_e[n + 1] - ln_e[n]) / (ln_e[n] - ln_e[n - 1])
            for n in range(1 + drop, len(ln_e) - 1)
            if ln_e[n] != ln_e[n - 1]
        ]
        p = float(np.median(quotients)) if quotients else float("nan")
        c = float(np.median([math.exp(ln_e[n + 1] - p * ln_e[n]) for n in range(1 + drop, len(ln_e) - 1)]))
        return p, c, len(ys)

    p = (a + math.sqrt(disc)) / 2.0
    c = math.exp(mu * p / (p + b)) if abs(p + b) > 1e-12 else float("nan")
    return p, c, len(ys)


def estimate_q_order(trace: IterationTrace) -> OrderEstimate:
    """Estimate (order, error constant) from a trace's error column.

    Uses every step with a defined positive error; the engine has already
    cut the trace at the precision floor, so no post-floor noise is present.
    Up to two leading steps (the user-supplied starting points) are dropped
    when at least three fit equations remain without them.
    """
    if trace.termination == Termination.EXACT_ROOT:
        raise ExactRootTraceError(
            "trace reached the root exactly; order is undefined"
        )
    errors = [
        (s.n, float(s.E))
        for s in trace.steps
        if s.E is not None and float(s.E) > 0.0
    ]
    if len(errors) < 5:
        raise InsufficientDataError(
            f"need at least 5 steps with defined errors, have {len(errors)}"
        )
    ln_e = np.log(np.array([E for _, E in errors]))
    drop = min(2, (len(ln_e) - 2) - 3)
    p, c, n_eq = _fit_order(ln_e, drop)
    return OrderEstimate(
        p_hat=p,
        c_hat=c,
        samples_used=n_eq,
        window=(errors[1 + drop][0], errors[-1][0]),
    )


def theoretical_aec_simple(problem: Problem, backend=Binary64) -> float:
    """Predicted secant error constant m_alpha**(r0 - 1) at a simple root."""
    ratio = curvature_ratio(problem, backend)
    if ratio.m_alpha == 0.0:
        raise ZeroCurvatureError(
            f"f''(alpha) = 0 for {problem.problem_id}; constant undefined"
        )
    return ratio.m_alpha ** (_R0 - 1.0)


class RatioKind(str, Enum):
    Q_LINEAR = "QLinear"
    OSCILLATING = "Oscillating"
    SUPERLINEAR = "Superlinear"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RatioDiagnostic:
    kind: RatioKind
    c: Optional[float] = None
    lo: Optional[float] = None
    hi: Optional[float] = None


def ratio_diagnostic(errors: Sequence[float]) -> RatioDiagnostic:
    """Classify the behavior of consecutive error ratios.

    Distinguishes a settled geometric rate, a two-cluster oscillation (a
    sequence that is linear only through an upper bound, not in the ratio
    itself), and ratios driving to zero.  Trailing entries at rounding-noise
    scale are discarded before forming ratios.
    """
    values = [float(v) for v in errors]
    if len(values) < 8:
        raise InsufficientDataError("need at least 8 error values")

    noise = 1e3 * Binary64.eps * max(values)
    while len(values) > 2 and values[-1] < noise:
        values.pop()
    if any(v <= 0.0 for v in values):
        raise InsufficientDataError("error values must be positive")
    ratios = [values[i + 1] / values[i] for i in range(len(values) - 1)]
    if len(ratios) < 3:
        return RatioDiagnostic(RatioKind.INCONCLUSIVE)

    # settled geometric rate: tight relative spread over the last quartile
    tail = ratios[-max(3, len(ratios) // 4):]
    mean = sum(tail) / len(tail)
    if 0.0 < mean < 1.0 and (max(tail) - min(tail)) < 1e-2 * mean:
        return RatioDiagnostic(RatioKind.Q_LINEAR, c=mean)

    # alternation between two separated clusters
    evens = ratios[0::2]
    odds = ratios[1::2]
    if len(evens) >= 2 and len(odds) >= 2:
        width = max(max(evens) - min(evens), max(odds) - min(odds))
        centers = (sum(evens) / len(evens), sum(odds) / len(odds))
        sep = abs(centers[0] - centers[1])
        if sep > 1e-12 and sep > 10.0 * width:
            return RatioDiagnostic(
                RatioKind.OSCILLATING, lo=min(centers), hi=max(centers)
            )

    # ratios collapsing toward zero over the latter half
    half = ratios[len(ratios) // 2:]
    decreasing = all(half[i + 1] < half[i] for i in range(len(half) - 1))
    if decreasing and half[-1] < 1e-2 * float(np.median(ratios)) and half[-1] < 0.5:
        return RatioDiagnostic(RatioKind.SUPERLINEAR)

    return RatioDiagnostic(RatioKind.INCONCLUSIVE)


_QUADRATIC_SHIFTS = {"quadratic_sqrt2": 2.0}


def check_error_relation_quadratic(trace: IterationTrace, a, backend=None) -> float:
    """Max residual of the exact identity e[n+1]*(x[n] + x[n-1]) == e[n]*e[n-1].

    For f(x) = x**2 - a the divided-difference error relation collapses to
    this algebraic identity, so the residual measures pure rounding.  The
    denominator carries a unit floor at the root scale: late steps have
    products e[n]*e[n-1] at rounding scale and a bare relative measure there
    would amplify noise instead of measuring the identity.
    """
    expected = _QUADRATIC_SHIFTS.get(trace.problem_id)
    if expected is None or float(a) != expected:
        raise WrongProblemError(
            f"trace of {trace.problem_id!r} is not a x**2 - {float(a)!r} problem"
        )
    steps = trace.steps
    worst = 0.0
    for n in range(1, len(steps) - 1):
        e_next, e_n, e_prev = steps[n + 1].e, steps[n].e, steps[n - 1].e
        if e_next is None or e_n is None or e_prev is None:
            continue
        lhs = e_next * (steps[n].x + steps[n - 1].x)
        rhs = e_n * e_prev
        worst = max(worst, float(abs(lhs - rhs) / (abs(rhs) + 1)))
    return worst


@dataclass(frozen=True)
class EfficiencyReport:
    t_newton: float
    t_secant: float
    k_ratio: float
    s: float
    m_cost: float
    threshold: float


def efficiency_threshold() -> float:
    """Derivative-cost ratio above which the secant method wins: ln2/ln r0 - 1."""
    return math.log(2.0) / math.log(_R0) - 1.0


def _k_ratio(m_alpha: float, e0: float, eps_target: float) -> float:
    if m_alpha <= 0 or e0 <= 0 or eps_target <= 0:
        raise InvalidRegimeError("m_alpha, E0, and eps must be positive")
    if eps_target >= e0:
        raise InvalidRegimeError("target accuracy must be below the initial error")
    if m_alpha * e0 >= 1.0 or m_alpha * eps_target >= 1.0:
        raise InvalidRegimeError(
            "m_alpha * E0 and m_alpha * eps must lie below 1 for the model"
        )
    return math.log(m_alpha * eps_target) / math.log(m_alpha * e0)


def efficiency_report(
    m_cost: float, s: float, m_alpha: float, e0: float, eps_target: float
) -> EfficiencyReport:
    """Minimum evaluation time for Newton vs secant to reach eps_target.

    With K = log(m_alpha*eps) / log(m_alpha*E0), Newton needs ceil(log2 K)
    steps at cost (1+s)*m_cost each, the secant method ceil(log_r0 K) steps
    at cost m_cost each.
    """
    if m_cost <= 0:
        raise InvalidRegimeError("m_cost must be positive")
    k = _k_ratio(m_alpha, e0, eps_target)
    return EfficiencyReport(
        t_newton=(1.0 + s) * m_cost * math.ceil(math.log2(k)),
        t_secant=m_cost * math.ceil(math.log(k) / math.log(_R0)),
        k_ratio=k,
        s=s,
        m_cost=m_cost,
        threshold=efficiency_threshold(),
    )


def efficiency_report_continuous(
    m_cost: float, s: float, m_alpha: float, e0: float, eps_target: float
) -> EfficiencyReport:
    """Ceiling-free variant: exposes the crossover exactly at the threshold,
    which the integer step counts mask by ties."""
    if m_cost <= 0:
        raise InvalidRegimeError("m_cost must be positive")
    k = _k_ratio(m_alpha, e0, eps_target)
    return EfficiencyReport(
        t_newton=(1.0 + s) * m_cost * math.log2(k),
        t_secant=m_cost * math.log(k) / math.log(_R0),
        k_ratio=k,
        s=s,
        m_cost=m_cost,
        threshold=efficiency_threshold(),
    )
