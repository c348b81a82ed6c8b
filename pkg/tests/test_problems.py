"""Corpus contents, derivative consistency, and multiplicity detection."""

import dataclasses
import math

import pytest

from secantlab.backends import Binary64, DoubleDouble
from secantlab.errors import (
    NotSimpleRootError,
    UnknownProblemError,
    ZeroDerivativeError,
)
from secantlab.problems import (
    builtin_corpus,
    check_multiplicity,
    curvature_ratio,
    get_problem,
)

CORPUS = builtin_corpus()


def test_required_entries_present():
    ids = {p.problem_id for p in CORPUS}
    assert {"quadratic_sqrt2", "cubic_simple"} <= ids
    assert {f"pure_power_{m}" for m in range(2, 7)} <= ids
    assert {f"shifted_power_{m}_mixed" for m in (2, 3, 4)} <= ids


def test_direct_evaluations():
    assert float(get_problem("pure_power_2").f(0.5)) == 0.25
    assert float(get_problem("quadratic_sqrt2").root()) == pytest.approx(
        1.41421356, abs=1e-8
    )
    shifted = get_problem("shifted_power_2_mixed")
    assert float(shifted.f(1.0)) == 0.0
    assert float(shifted.f(2.0)) == 4.0


def test_roots_are_roots():
    for p in CORPUS:
        alpha = p.root(Binary64)
        scale = max(1.0, abs(float(alpha)))
        assert abs(float(p.f(alpha))) <= 8 * Binary64.eps * scale ** p.multiplicity, (
            p.problem_id
        )


def test_roots_in_double_double():
    alpha = get_problem("quadratic_sqrt2").root(DoubleDouble)
    assert abs(float(alpha * alpha - 2)) <= 8 * DoubleDouble.eps


def test_unknown_problem():
    with pytest.raises(UnknownProblemError):
        get_problem("mystery")


def test_curvature_quadratic():
    got = curvature_ratio(get_problem("quadratic_sqrt2")).m_alpha
    assert got == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-14)
    assert got == pytest.approx(0.35355339, abs=1e-8)


def test_curvature_cubic():
    # f'(1) = 2, f''(1) = 6 for the through-zero cubic
    assert curvature_ratio(get_problem("cubic_simple")).m_alpha == pytest.approx(1.5)


def test_curvature_flat_line_is_zero():
    assert curvature_ratio(get_problem("linear")).m_alpha == 0.0


def test_curvature_rejects_multiple_roots():
    with pytest.raises(NotSimpleRootError):
        curvature_ratio(get_problem("pure_power_2"))


def test_curvature_rejects_zero_slope():
    fake = dataclasses.replace(get_problem("pure_power_2"), multiplicity=1)
    with pytest.raises(ZeroDerivativeError):
        curvature_ratio(fake)


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _central2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


@pytest.mark.parametrize("problem", CORPUS, ids=lambda p: p.problem_id)
def test_derivatives_match_finite_differences(problem):
    alpha = float(problem.root())
    f = lambda x: float(problem.f(x))
    h = 1e-5 * max(1.0, abs(alpha))
    for t in (-0.8, -0.4, 0.3, 0.6, 0.9):
        x = alpha + t * problem.domain_halfwidth
        scale_1 = max(abs(float(problem.f1(x))), 1e-6)
        assert abs(float(problem.f1(x)) - _central(f, x, h)) <= 1e-6 * scale_1
        scale_2 = max(abs(float(problem.f2(x))), 1e-6)
        assert abs(float(problem.f2(x)) - _central2(f, x, h)) <= 1e-5 * scale_2


@pytest.mark.parametrize("problem", CORPUS, ids=lambda p: p.problem_id)
def test_declared_multiplicity_confirmed(problem):
    assert check_multiplicity(problem)


def test_wrong_multiplicity_rejected():
    quad = get_problem("quadratic_sqrt2")
    assert not check_multiplicity(dataclasses.replace(quad, multiplicity=2))
    cubic_power = get_problem("pure_power_3")
    assert not check_multiplicity(dataclasses.replace(cubic_power, multiplicity=2))
    assert check_multiplicity(get_problem("shifted_power_3_mixed"))
