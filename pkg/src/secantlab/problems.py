"""Test-function corpus with analytic derivatives and known roots.

Each problem carries closed-form f, f', f'' (hand-coded, no autodiff), the
root location, its multiplicity, and the halfwidth of the neighborhood the
iteration theory is valid on.  Functions are written against plain arithmetic
operators so they evaluate identically under the binary64 and double-double
backends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .backends import Binary64
from .errors import NotSimpleRootError, UnknownProblemError, ZeroDerivativeError

__all__ = [
    "Problem",
    "CurvatureRatio",
    "builtin_corpus",
    "corpus_ids",
    "get_problem",
    "curvature_ratio",
    "check_multiplicity",
]


@dataclass(frozen=True)
class Problem:
    """A target function with derivatives, known root, and multiplicity."""

    problem_id: str
    expression: str
    f: Callable
    f1: Callable
    f2: Callable
    root_of: Callable
    multiplicity: int
    domain_halfwidth: float

    def root(self, backend=Binary64):
        """Root location alpha as a value of the given backend."""
        return self.root_of(backend)


@dataclass(frozen=True)
class CurvatureRatio:
    """|f''(alpha) / (2 f'(alpha))|, the curvature-to-slope scale at a
    simple root; it sets both the superlinear and quadratic error constants."""

    m_alpha: float


def _pure_power(m: int) -> Problem:
    return Problem(
        problem_id=f"pure_power_{m}",
        expression=f"x^{m}",
        f=lambda x, m=m: x ** m,
        f1=lambda x, m=m: m * x ** (m - 1),
        f2=lambda x, m=m: (m * (m - 1)) * x ** (m - 2) if m > 2 else x * 0 + 2,
        root_of=lambda B: B.of(0),
        multiplicity=m,
        domain_halfwidth=1.0,
    )


def _shifted_power(m: int) -> Problem:
    # (x-1)^m (x+2): an m-fold root at 1 of a non-monomial function.
    return Problem(
        problem_id=f"shifted_power_{m}_mixed",
        expression=f"(x-1)^{m} (x+2)",
        f=lambda x, m=m: (x - 1) ** m * (x + 2),
        f1=lambda x, m=m: (x - 1) ** (m - 1) * (m * (x + 2) + (x - 1)),
        f2=lambda x, m=m: (x - 1) ** (m - 2)
        * ((m * (m - 1)) * (x + 2) + (2 * m) * (x - 1)),
        root_of=lambda B: B.of(1),
        multiplicity=m,
        domain_halfwidth=0.5,
    )


def builtin_corpus() -> list[Problem]:
    """All built-in problems, addressable by id from the CLI and service."""
    corpus = [
        Problem(
            problem_id="linear",
            expression="x",
            f=lambda x: x,
            f1=lambda x: x * 0 + 1,
            f2=lambda x: x * 0,
            root_of=lambda B: B.of(0),
            multiplicity=1,
            domain_halfwidth=1.0,
        ),
        Problem(
            problem_id="quadratic_sqrt2",
            expression="x^2 - 2",
            f=lambda x: x * x - 2,
            f1=lambda x: 2 * x,
            f2=lambda x: x * 0 + 2,
            root_of=lambda B: B.sqrt(B.of(2)),
            multiplicity=1,
            domain_halfwidth=1.0,
        ),
        # Simple root of a cubic with nonzero curvature: f'(1) = 2, f''(1) = 6.
        # The halfwidth keeps the domain clear of the stationary points at
        # +/- 1/sqrt(3) and of the other roots.
        Problem(
            problem_id="cubic_simple",
            expression="x^3 - x",
            f=lambda x: x ** 3 - x,
            f1=lambda x: 3 * x ** 2 - 1,
            f2=lambda x: 6 * x,
            root_of=lambda B: B.of(1),
            multiplicity=1,
            domain_halfwidth=0.4,
        ),
    ]
    corpus.extend(_pure_power(m) for m in range(2, 7))
    corpus.extend(_shifted_power(m) for m in (2, 3, 4))
    return corpus


_BY_ID = {p.problem_id: p for p in builtin_corpus()}


def corpus_ids() -> list[str]:
    return sorted(_BY_ID)


def get_problem(problem_id: str) -> Problem:
    try:
        return _BY_ID[problem_id]
    except KeyError:
        raise UnknownProblemError(
            f"unknown problem {problem_id!r}; known ids: {', '.join(corpus_ids())}"
        ) from None


def curvature_ratio(problem: Problem, backend=Binary64) -> CurvatureRatio:
    """Curvature ratio |f''(alpha)/(2 f'(alpha))| at a simple root."""
    if problem.multiplicity != 1:
        raise NotSimpleRootError(
            f"{problem.problem_id} has multiplicity {problem.multiplicity}"
        )
    alpha = problem.root(backend)
    d1 = problem.f1(alpha)
    if float(d1) == 0.0:
        raise ZeroDerivativeError(f"f'(alpha) = 0 for {problem.problem_id}")
    return CurvatureRatio(m_alpha=abs(float(problem.f2(alpha)) / (2.0 * float(d1))))


def _central_difference(f, alpha: float, order: int, h: float) -> float:
    """Central finite difference of the given order, scaled by h**order."""
    total = 0.0
    for i in range(order + 1):
        node = alpha + (order / 2.0 - i) * h
        total += (-1) ** i * math.comb(order, i) * f(node)
    return total / h ** order


def check_multiplicity(problem: Problem, h: float | None = None) -> bool:
    """Numerically confirm the declared multiplicity via finite differences.

    True iff derivative estimates of orders 1..m-1 at the root are small
    relative to the order-m estimate, and the order-m estimate is clearly
    above rounding noise.  Desk-scale binary64 only.
    """
    if h is None:
        h = 1e-3 * problem.domain_halfwidth
    m = problem.multiplicity
    alpha = float(problem.root(Binary64))
    f = lambda x: float(problem.f(x))

    estimates = [_central_difference(f, alpha, j, h) for j in range(1, m + 1)]
    d_m = abs(estimates[-1])

    fmax = max(abs(f(alpha + (m / 2.0 - i) * h)) for i in range(m + 1))
    noise = 2.0 ** m * Binary64.eps * max(fmax, 1e-300) / h ** m

    if d_m <= 1e3 * noise:
        return False
    slack = math.sqrt(h)
    return all(abs(d) <= slack * d_m + 1e3 * noise for d in estimates[:-1])
