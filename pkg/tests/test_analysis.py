"""Order/constant estimation, ratio diagnostics, the exact quadratic identity
check, and the evaluation-time model."""

import math

import pytest

from secantlab.analysis import (
    RatioKind,
    check_error_relation_quadratic,
    efficiency_report,
    efficiency_report_continuous,
    efficiency_threshold,
    estimate_q_order,
    ratio_diagnostic,
    theoretical_aec_simple,
)
from secantlab.backends import DoubleDouble
from secantlab.errors import (
    ExactRootTraceError,
    InsufficientDataError,
    InvalidRegimeError,
    WrongProblemError,
    ZeroCurvatureError,
)
from secantlab.iterate import (
    IterationStep,
    IterationTrace,
    StoppingCriteria,
    Termination,
    run_newton,
    run_secant,
)
from secantlab.problems import get_problem

R0 = (1 + math.sqrt(5)) / 2
QUAD = get_problem("quadratic_sqrt2")


def synthetic_trace(p: float, c: float, e0: float = 0.1, n: int = 12) -> IterationTrace:
    """Trace whose error column follows E[n+1] = c * E[n]**p exactly."""
    errors = [e0]
    for _ in range(n - 1):
        errors.append(c * errors[-1] ** p)
    steps = [
        IterationStep(n=i, x=e, fx=1.0, e=e, E=e, k=None)
        for i, e in enumerate(errors)
    ]
    return IterationTrace(
        method="secant",
        problem_id="synthetic",
        backend_name="binary64",
        steps=steps,
        termination=Termination.MAX_ITER,
    )


@pytest.mark.parametrize("p,c", [(1.618, 0.5), (2.0, 0.35), (1.0, 0.618)])
def test_estimator_recovers_exact_power_models(p, c):
    est = estimate_q_order(synthetic_trace(p, c))
    assert abs(est.p_hat - p) <= 1e-6
    assert abs(est.c_hat - c) <= 1e-6


def test_secant_order_on_simple_root_dd():
    trace = run_secant(QUAD, "1.4", "1.5", backend=DoubleDouble)
    est = estimate_q_order(trace)
    assert 1.568 <= est.p_hat <= 1.668
    assert est.samples_used >= 3


def test_newton_order_on_simple_root_dd():
    trace = run_newton(QUAD, "1.5", backend=DoubleDouble)
    est = estimate_q_order(trace)
    assert 1.9 <= est.p_hat <= 2.1
    assert abs(est.c_hat - 0.35355) <= 0.035


def test_secant_is_slower_than_newton():
    secant = estimate_q_order(run_secant(QUAD, "1.4", "1.5", backend=DoubleDouble))
    newton = estimate_q_order(run_newton(QUAD, "1.5", backend=DoubleDouble))
    assert secant.p_hat < newton.p_hat


def test_estimated_constant_matches_prediction():
    est = estimate_q_order(run_secant(QUAD, "1.4", "1.5", backend=DoubleDouble))
    assert abs(est.c_hat - theoretical_aec_simple(QUAD)) <= 0.1 * est.c_hat


def test_linear_regime_estimate():
    trace = run_secant(get_problem("pure_power_2"), 1e-3, 0.5e-3)
    est = estimate_q_order(trace)
    assert 0.95 <= est.p_hat <= 1.05
    assert abs(est.c_hat - 0.6180339887) <= 1e-3


def test_estimator_preconditions():
    short = run_secant(QUAD, 1.0, 2.0, StoppingCriteria(max_iter=1))
    with pytest.raises(InsufficientDataError):
        estimate_q_order(short)
    exact = run_newton(get_problem("cubic_simple"), 1.0)
    with pytest.raises(ExactRootTraceError):
        estimate_q_order(exact)


def test_theoretical_constant_values():
    got = theoretical_aec_simple(QUAD)
    assert got == pytest.approx((1 / (2 * math.sqrt(2))) ** (R0 - 1), rel=1e-12)
    assert got == pytest.approx(0.52571, abs=1e-3)
    cubic = theoretical_aec_simple(get_problem("cubic_simple"))
    assert cubic == pytest.approx(1.5 ** (R0 - 1), rel=1e-12)
    assert cubic == pytest.approx(1.28486, abs=1e-4)


def test_theoretical_constant_of_unit_ratio_is_one():
    import dataclasses

    # m_alpha = 1 gives constant 1 regardless of the exponent
    tweaked = dataclasses.replace(
        QUAD, f2=lambda x: 4 * x  # f''(a)/(2 f'(a)) = 4a/(4a) = 1
    )
    assert theoretical_aec_simple(tweaked) == pytest.approx(1.0, rel=1e-12)


def test_zero_curvature_rejected():
    with pytest.raises(ZeroCurvatureError):
        theoretical_aec_simple(get_problem("linear"))


def test_ratio_diagnostic_linear_in_ratio():
    z = [0.5 ** (n - 1) for n in range(1, 21)]
    got = ratio_diagnostic(z)
    assert got.kind == RatioKind.Q_LINEAR
    assert abs(got.c - 0.5) <= 1e-6


def test_ratio_diagnostic_linear_only_through_bound():
    y = [0.5 ** (n + (-1) ** n) for n in range(1, 21)]
    got = ratio_diagnostic(y)
    assert got.kind == RatioKind.OSCILLATING
    assert got.lo == pytest.approx(0.125)
    assert got.hi == pytest.approx(2.0)


def test_ratio_diagnostic_superlinear_secant():
    stop = StoppingCriteria(max_iter=10, precision_floor=0.0)
    trace = run_secant(QUAD, 1.0, 2.0, stop)
    errors = [float(s.E) for s in trace.steps]
    assert ratio_diagnostic(errors).kind == RatioKind.SUPERLINEAR


def test_ratio_diagnostic_inconclusive_and_short():
    with pytest.raises(InsufficientDataError):
        ratio_diagnostic([0.5] * 7)
    wobble = [1.0, 0.9, 1.1, 0.8, 1.2, 0.7, 1.3, 0.6, 1.4, 0.5]
    assert ratio_diagnostic(wobble).kind == RatioKind.INCONCLUSIVE


def test_quadratic_identity_residual_binary64():
    stop = StoppingCriteria(max_iter=10, precision_floor=0.0)
    trace = run_secant(QUAD, 1.0, 2.0, stop)
    assert check_error_relation_quadratic(trace, 2) <= 1e-12


def test_quadratic_identity_single_triple():
    trace = run_secant(QUAD, 1.0, 2.0, StoppingCriteria(max_iter=1))
    assert check_error_relation_quadratic(trace, 2) <= 1e-12


def test_quadratic_identity_double_double():
    stop = StoppingCriteria(max_iter=8)
    trace = run_secant(QUAD, 1.0, 2.0, stop, backend=DoubleDouble)
    assert check_error_relation_quadratic(trace, 2) <= 1e-28


def test_quadratic_identity_wrong_problem():
    cubic_trace = run_secant(get_problem("cubic_simple"), 1.2, 1.3)
    with pytest.raises(WrongProblemError):
        check_error_relation_quadratic(cubic_trace, 2)
    quad_trace = run_secant(QUAD, 1.0, 2.0, StoppingCriteria(max_iter=3))
    with pytest.raises(WrongProblemError):
        check_error_relation_quadratic(quad_trace, 3)


def test_efficiency_report_hand_example():
    rep = efficiency_report(1.0, 1.0, 0.3536, 0.1, 1e-12)
    assert rep.k_ratio == pytest.approx(8.577, abs=2e-3)
    assert rep.t_newton == 8.0  # (1+1) * ceil(log2 8.578) = 2 * 4
    assert rep.t_secant == 5.0  # ceil(log_r0 8.578) = ceil(4.466)
    assert rep.threshold == pytest.approx(0.44042, abs=1e-4)


def test_cheap_derivative_favors_newton():
    rep = efficiency_report(1.0, 0.2, 0.3536, 0.1, 1e-12)
    assert rep.t_newton == pytest.approx(4.8)
    assert rep.t_newton < rep.t_secant == 5.0


def test_threshold_value():
    assert efficiency_threshold() == pytest.approx(
        math.log(2) / math.log(R0) - 1, rel=1e-15
    )


def test_continuous_crossover_exactly_at_threshold():
    theta = efficiency_threshold()
    for i in range(100):
        s = 0.01 + 0.98 * i / 99
        rep = efficiency_report_continuous(1.0, s, 0.3536, 0.1, 1e-12)
        assert (rep.t_secant < rep.t_newton) == (s > theta), s


def test_ceilinged_time_monotone_in_s():
    times = [
        efficiency_report(1.0, s, 0.3536, 0.1, 1e-12).t_newton
        for s in [0.1 * j for j in range(11)]
    ]
    assert all(a <= b for a, b in zip(times, times[1:]))


def test_invalid_regimes():
    with pytest.raises(InvalidRegimeError):
        efficiency_report(1.0, 1.0, 0.3536, 1e-12, 0.1)  # eps above E0
    with pytest.raises(InvalidRegimeError):
        efficiency_report(1.0, 1.0, 20.0, 0.1, 1e-12)  # m_alpha * E0 >= 1
    with pytest.raises(InvalidRegimeError):
        efficiency_report(0.0, 1.0, 0.3536, 0.1, 1e-12)
