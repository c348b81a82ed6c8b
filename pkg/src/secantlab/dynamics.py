"""Ratio-sequence dynamics and convergence classification of initial values.

Near an m-fold root the fate of the secant iteration is decided by the
consecutive-error ratio k0 = e1/e0.  For even m the classifier iterates the
ratio map on a proxy sequence until it first leaves the alternating band
(c_{m,2}, -1); the exit value then decides the verdict: a generic exit
converges linearly with rate c_{m,0}, while exits at the repelling fixed
point c_{m,1}, at -1, or at c_{m,2} mean divergence or a vanishing secant
denominator a step or two later.  For odd m every k0 away from {-1, 0, 1}
converges.  Equality with a forbidden value is only meaningful numerically as
an absolute eps-neighborhood (1e-12 here).

``verify_against_simulation`` cross-checks the classifier against an actual
secant run on the pure power x**m, for which the ratio recursion is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .backends import Binary64
from .charpoly import h_map, solve_c_2m1, solve_c_2m2, solve_c_m0
from .errors import (
    EvenMultiplicityError,
    OddMultiplicityError,
    PoleAtUnitPowerError,
)
from .iterate import StoppingCriteria, Termination, run_secant, tail_ratio
from .problems import get_problem

__all__ = [
    "EQUALITY_EPS",
    "SMALL_ERROR_BUDGET",
    "RatioTrace",
    "Verdict",
    "Classification",
    "iterate_ratio",
    "classify_odd",
    "classify_even",
    "basin_sweep",
    "SimulationAgreement",
    "verify_against_simulation",
]

# Absolute neighborhood treated as "equal" to a forbidden ratio value.
EQUALITY_EPS = 1e-12
# "Sufficiently small |e0|" for a definite verdict, on the unit-halfwidth
# reference scale of the pure powers; larger errors yield Undetermined
# because the theory is local and gives no explicit radius.
SMALL_ERROR_BUDGET = 1e-3
# Numerically stationary ratio sequence (pinned at a fixed point).
_STALL_EPS = 1e-12


class Verdict(str, Enum):
    CONVERGES_LINEARLY = "ConvergesLinearly"
    DIVERGES = "Diverges"
    BREAKDOWN = "Breakdown"
    EXCLUDED_BY_HYPOTHESIS = "ExcludedByHypothesis"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class RatioTrace:
    m: int
    k_values: tuple[float, ...]
    exit_index: Optional[int] = None
    exit_value: Optional[float] = None
    pole_index: Optional[int] = None
    stalled: bool = False


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    breakdown_step: Optional[int] = None
    predicted_aec: Optional[float] = None
    witness: Optional[RatioTrace] = None


_CONSTANTS_CACHE: dict[int, tuple[float, Optional[float], Optional[float]]] = {}


def _constants(m: int) -> tuple[float, Optional[float], Optional[float]]:
    if m not in _CONSTANTS_CACHE:
        c0 = float(solve_c_m0(m))
        if m % 2:
            _CONSTANTS_CACHE[m] = (c0, None, None)
        else:
            _CONSTANTS_CACHE[m] = (c0, float(solve_c_2m1(m)), float(solve_c_2m2(m)))
    return _CONSTANTS_CACHE[m]


def iterate_ratio(m: int, k0: float, max_steps: int = 10_000) -> RatioTrace:
    """Iterate the ratio map from k0, watching the alternating band (even m).

    Stops at the first value outside the band, at a pole of the map, when
    the sequence goes numerically stationary (a fixed point, including the
    repelling one inside the band), or after max_steps.  For odd m there is
    no band and the walk just runs until a pole, stall, or the step cap.
    """
    if max_steps < 1 or max_steps > 10 ** 6:
        raise ValueError("max_steps must be in [1, 1e6]")
    _, _, c2 = _constants(m)
    in_band = (lambda v: c2 < v < -1.0) if m % 2 == 0 else (lambda v: True)

    ks = [float(k0)]
    exit_index = exit_value = pole_index = None
    stalled = False
    if not in_band(ks[0]) and m % 2 == 0:
        return RatioTrace(m=m, k_values=(ks[0],), exit_index=0, exit_value=ks[0])
    while len(ks) <= max_steps:
        try:
            nxt = float(h_map(m, ks[-1]))
        except PoleAtUnitPowerError:
            pole_index = len(ks) - 1
            break
        moved = abs(nxt - ks[-1])
        ks.append(nxt)
        if m % 2 == 0 and not in_band(nxt):
            exit_index = len(ks) - 1
            exit_value = nxt
            break
        if moved <= _STALL_EPS * max(1.0, abs(ks[-2])):
            stalled = True
            break
    return RatioTrace(
        m=m,
        k_values=tuple(ks),
        exit_index=exit_index,
        exit_value=exit_value,
        pole_index=pole_index,
        stalled=stalled,
    )


def _near(value: float, target: float) -> bool:
    return abs(value - target) <= EQUALITY_EPS


def classify_odd(m: int, k0: float, e0: float) -> Classification:
    """Initial-value verdict for odd multiplicity m >= 3.

    Any k0 off the eps-neighborhoods of {-1, 0, 1} converges linearly for a
    small enough starting error.  k0 = 0 puts the second iterate on the root
    (excluded from the asymptotic theory); k0 = 1 means equal starting
    points; k0 = -1 is the excluded mirror configuration, reported as the
    breakdown the pure-power model exhibits two steps in.
    """
    if m < 3 or m % 2 == 0:
        raise EvenMultiplicityError(f"multiplicity {m} is not an odd value >= 3")
    k0 = float(k0)
    if _near(k0, 0.0):
        return Classification(Verdict.EXCLUDED_BY_HYPOTHESIS)
    if _near(k0, 1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=1)
    if _near(k0, -1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=2)
    if abs(float(e0)) > SMALL_ERROR_BUDGET:
        return Classification(Verdict.UNDETERMINED)
    c0, _, _ = _constants(m)
    return Classification(Verdict.CONVERGES_LINEARLY, predicted_aec=c0)


def classify_even(
    m: int, k0: float, e0: float, max_steps: int = 10_000
) -> Classification:
    """Initial-value verdict for even multiplicity m >= 2.

    Walks the proxy ratio sequence out of the alternating band and reads the
    verdict off the first exit value v: near c_{m,1} the ratio is pinned at a
    repelling fixed point of magnitude > 1 (divergence); near -1 or c_{m,2}
    the secant denominator vanishes two or three steps later; near 0 the
    iteration lands on the root; near 1 the iterates coincide; anything else
    converges linearly with rate c_{m,0}.
    """
    if m < 2 or m % 2:
        raise OddMultiplicityError(f"multiplicity {m} is not an even value >= 2")
    k0 = float(k0)
    c0, c1, c2 = _constants(m)

    if _near(k0, 0.0):
        return Classification(Verdict.EXCLUDED_BY_HYPOTHESIS)
    if _near(k0, 1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=1)
    if _near(k0, -1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=2)
    if _near(k0, c1):
        return Classification(Verdict.DIVERGES)
    if _near(k0, c2):
        return Classification(Verdict.BREAKDOWN, breakdown_step=3)
    if abs(float(e0)) > SMALL_ERROR_BUDGET:
        return Classification(Verdict.UNDETERMINED)

    trace = iterate_ratio(m, k0, max_steps)
    if trace.pole_index is not None:
        # a pole inside the band means the ratio reached -1 to rounding scale
        return Classification(
            Verdict.BREAKDOWN, breakdown_step=trace.pole_index + 2, witness=trace
        )
    if trace.exit_index is None:
        return Classification(Verdict.UNDETERMINED, witness=trace)

    ell, v = trace.exit_index, trace.exit_value
    if _near(v, c1):
        return Classification(Verdict.DIVERGES, witness=trace)
    if _near(v, -1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=ell + 2, witness=trace)
    if _near(v, c2):
        return Classification(Verdict.BREAKDOWN, breakdown_step=ell + 3, witness=trace)
    if _near(v, 0.0):
        return Classification(Verdict.EXCLUDED_BY_HYPOTHESIS, witness=trace)
    if _near(v, 1.0):
        return Classification(Verdict.BREAKDOWN, breakdown_step=ell + 1, witness=trace)
    return Classification(Verdict.CONVERGES_LINEARLY, predicted_aec=c0, witness=trace)


def basin_sweep(
    m: int, k_grid: Sequence[float], e0: float
) -> list[tuple[float, Classification]]:
    """Classification per grid point; deterministic and order-independent."""
    classify = classify_odd if m % 2 else classify_even
    return [(float(k0), classify(m, float(k0), e0)) for k0 in k_grid]


@dataclass(frozen=True)
class SimulationAgreement:
    predicted: Classification
    observed: Classification
    agree: bool


def verify_against_simulation(
    m: int, k0: float, e0: float, backend=Binary64, max_iter: int = 400
) -> SimulationAgreement:
    """Cross-check a classification against a secant run on x**m.

    The simulation starts from x0 = e0, x1 = k0*e0 (the root is 0, so the
    errors are the iterates themselves).  Observed verdicts: divergence from
    the bound, breakdown from a vanished denominator, root hits, or linear
    convergence when the pre-floor tail ratio sits within 1e-6 of c_{m,0}.
    Agreement compares verdicts only; breakdown step indices are reported by
    both sides but rounding can shift the simulated one.
    """
    classify = classify_odd if m % 2 else classify_even
    predicted = classify(m, k0, e0)

    problem = get_problem(f"pure_power_{m}")
    x0 = backend.of(e0)
    x1 = backend.of(k0) * x0
    # The root is 0, so errors are iterates themselves: no cancellation, and
    # ratios stay exact far below the generic floor.  Run deep enough for the
    # ratio transient to die out before the iteration cap.
    stop = StoppingCriteria(max_iter=max_iter, precision_floor=1e-200)
    trace = run_secant(problem, x0, x1, stop, backend=backend)

    if trace.termination == Termination.DIVERGED:
        observed = Classification(Verdict.DIVERGES)
    elif trace.termination in (
        Termination.SECANT_BREAKDOWN,
        Termination.NEWTON_BREAKDOWN,
    ):
        observed = Classification(
            Verdict.BREAKDOWN, breakdown_step=trace.breakdown_step
        )
    elif trace.termination == Termination.EXACT_ROOT:
        observed = Classification(Verdict.EXCLUDED_BY_HYPOTHESIS)
    else:
        c0, _, _ = _constants(m)
        tail = tail_ratio(trace)
        if tail is not None and abs(tail - c0) <= 1e-6:
            observed = Classification(Verdict.CONVERGES_LINEARLY, predicted_aec=c0)
        else:
            observed = Classification(Verdict.UNDETERMINED)

    return SimulationAgreement(
        predicted=predicted,
        observed=observed,
        agree=predicted.verdict == observed.verdict,
    )
