"""Secant and Newton iteration engines with full error/ratio traces.

Traces record the raw iterate x_n and residual f(x_n) always, and the signed
error e_n = x_n - alpha, its magnitude E_n, and the consecutive ratio
k = e_n / e_{n-1} whenever the problem's root is known.  Stopping conditions
are checked in a fixed documented order so traces are reproducible bit for
bit; the secant update is evaluated exactly as written (no algebraic
rearrangement), because the breakdown taxonomy refers to that form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .backends import Binary64
from .errors import (
    EqualIteratesError,
    NewtonBreakdownError,
    SecantBreakdownError,
)
from .problems import Problem

__all__ = [
    "Termination",
    "StoppingCriteria",
    "IterationStep",
    "IterationTrace",
    "secant_step",
    "newton_step",
    "run_secant",
    "run_newton",
    "tail_ratio",
    "trace_to_csv",
    "trace_to_json",
]


class Termination(str, Enum):
    MAX_ITER = "MaxIter"
    RESIDUAL = "Residual"
    STEP_SIZE = "StepSize"
    DIVERGED = "Diverged"
    EXACT_ROOT = "ExactRoot"
    SECANT_BREAKDOWN = "SecantBreakdown"
    NEWTON_BREAKDOWN = "NewtonBreakdown"
    PRECISION_FLOOR = "PrecisionFloor"


_BREAKDOWNS = (Termination.SECANT_BREAKDOWN, Termination.NEWTON_BREAKDOWN)


@dataclass(frozen=True)
class StoppingCriteria:
    """Stopping configuration; zero tolerances disable those checks.

    The residual and step tolerances default to disabled because the lab
    studies asymptotics: runs are meant to proceed until the divergence
    bound, the precision floor, or the iteration cap intervenes.
    """

    max_iter: int = 200
    residual_tol: float = 0.0
    step_tol: float = 0.0
    divergence_bound: Optional[float] = None  # default 1e12 * halfwidth
    precision_floor: Optional[float] = None  # default 4 * sqrt(backend eps)

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.divergence_bound is not None and self.divergence_bound <= 0:
            raise ValueError("divergence_bound must be positive")

    def resolve(self, problem: Problem, backend) -> tuple[float, float]:
        """Concrete (divergence_bound, precision_floor) for this run."""
        bound = self.divergence_bound
        if bound is None:
            bound = 1e12 * problem.domain_halfwidth
        floor = self.precision_floor
        if floor is None:
            floor = 4.0 * backend.eps ** 0.5
        return bound, floor


@dataclass(frozen=True)
class IterationStep:
    n: int
    x: object
    fx: object
    e: object = None
    E: object = None
    k: object = None


@dataclass
class IterationTrace:
    method: str  # "secant" | "newton"
    problem_id: str
    backend_name: str
    steps: list = field(default_factory=list)
    termination: Termination = Termination.MAX_ITER
    stop: StoppingCriteria = field(default_factory=StoppingCriteria)

    @property
    def breakdown_step(self) -> Optional[int]:
        """Index of the first uncomputable iterate, for breakdown traces."""
        if self.termination in _BREAKDOWNS:
            return len(self.steps)
        return None


def secant_step(problem: Problem, x_prev, x_curr, backend=Binary64):
    """One secant update from (x_prev, x_curr), evaluated as written."""
    x_prev = backend.of(x_prev)
    x_curr = backend.of(x_curr)
    if x_prev == x_curr:
        raise EqualIteratesError("secant step needs two distinct points")
    f_prev = problem.f(x_prev)
    f_curr = problem.f(x_curr)
    if f_prev == f_curr:
        raise SecantBreakdownError(
            f"f({float(x_prev)!r}) == f({float(x_curr)!r}); denominator vanishes"
        )
    return x_curr - f_curr * (x_curr - x_prev) / (f_curr - f_prev)


def newton_step(problem: Problem, x, backend=Binary64):
    """One Newton update x - f(x)/f'(x)."""
    x = backend.of(x)
    d = problem.f1(x)
    if float(d) == 0.0:
        raise NewtonBreakdownError(f"f'({float(x)!r}) == 0")
    return x - problem.f(x) / d


class _Recorder:
    """Shared per-step bookkeeping and terminal-condition checks."""

    def __init__(self, problem, backend, stop, method):
        self.problem = problem
        self.backend = backend
        self.stop = stop
        self.bound, self.floor = stop.resolve(problem, backend)
        self.alpha = problem.root(backend) if problem.root_of else None
        self.alpha_scale = max(1.0, abs(float(self.alpha))) if self.alpha is not None else 1.0
        self.trace = IterationTrace(
            method=method,
            problem_id=problem.problem_id,
            backend_name=backend.name,
            stop=stop,
        )
        self._prev_e = None
        self._prev_x = None

    def record(self, x) -> Optional[Termination]:
        """Append a step and return a termination reason if one fires.

        Check order on the recorded step: ExactRoot, Diverged,
        PrecisionFloor, Residual, StepSize.  (Breakdowns are detected by the
        engines when the next update is attempted.)
        """
        fx = self.problem.f(x)
        e = E = k = None
        if self.alpha is not None:
            e = x - self.alpha
            E = abs(e)
            if self._prev_e is not None and float(self._prev_e) != 0.0:
                k = e / self._prev_e
        step = IterationStep(n=len(self.trace.steps), x=x, fx=fx, e=e, E=E, k=k)
        self.trace.steps.append(step)

        reason = None
        magnitude = float(E) if E is not None else abs(float(x))
        if float(fx) == 0.0:
            reason = Termination.EXACT_ROOT
        elif magnitude > self.bound:
            reason = Termination.DIVERGED
        elif E is not None and float(E) < self.floor * self.alpha_scale:
            reason = Termination.PRECISION_FLOOR
        elif self.stop.residual_tol > 0 and abs(float(fx)) <= self.stop.residual_tol:
            reason = Termination.RESIDUAL
        elif (
            self.stop.step_tol > 0
            and self._prev_x is not None
            and abs(float(x - self._prev_x)) <= self.stop.step_tol
        ):
            reason = Termination.STEP_SIZE

        self._prev_e = e
        self._prev_x = x
        return reason

    def finish(self, reason: Termination) -> IterationTrace:
        self.trace.termination = reason
        return self.trace


def run_secant(
    problem: Problem, x0, x1, stop: StoppingCriteria | None = None, backend=Binary64
) -> IterationTrace:
    """Run the secant iteration from (x0, x1) until a stopping condition."""
    stop = stop or StoppingCriteria()
    x_prev = backend.of(x0)
    x_curr = backend.of(x1)
    if x_prev == x_curr:
        raise EqualIteratesError("secant iteration needs x0 != x1")

    rec = _Recorder(problem, backend, stop, "secant")
    reason = rec.record(x_prev)
    if reason is None:
        reason = rec.record(x_curr)
    while reason is None:
        if len(rec.trace.steps) >= stop.max_iter + 2:
            reason = Termination.MAX_ITER
            break
        f_prev = problem.f(x_prev)
        f_curr = problem.f(x_curr)
        if f_prev == f_curr:
            reason = Termination.SECANT_BREAKDOWN
            break
        x_next = x_curr - f_curr * (x_curr - x_prev) / (f_curr - f_prev)
        x_prev, x_curr = x_curr, x_next
        reason = rec.record(x_curr)
    return rec.finish(reason)


def run_newton(
    problem: Problem, x0, stop: StoppingCriteria | None = None, backend=Binary64
) -> IterationTrace:
    """Run the Newton iteration from x0 until a stopping condition."""
    stop = stop or StoppingCriteria()
    x = backend.of(x0)
    rec = _Recorder(problem, backend, stop, "newton")
    reason = rec.record(x)
    while reason is None:
        if len(rec.trace.steps) >= stop.max_iter + 1:
            reason = Termination.MAX_ITER
            break
        d = problem.f1(x)
        if float(d) == 0.0:
            reason = Termination.NEWTON_BREAKDOWN
            break
        x = x - problem.f(x) / d
        reason = rec.record(x)
    return rec.finish(reason)


def tail_ratio(trace: IterationTrace) -> Optional[float]:
    """Last consecutive error ratio whose own error is above the floor.

    Ratios recorded past the precision floor are rounding noise for roots
    away from zero, so the tail is read just before the floor.
    """
    problem = _problem_of(trace)
    backend = _backend_of(trace)
    _, floor = trace.stop.resolve(problem, backend)
    scale = max(1.0, abs(float(problem.root(backend))))
    best = None
    for step in trace.steps:
        if step.E is None:
            continue
        if step.k is not None and float(step.E) >= floor * scale:
            best = float(step.k)
    return best


def _problem_of(trace: IterationTrace) -> Problem:
    from .problems import get_problem

    return get_problem(trace.problem_id)


def _backend_of(trace: IterationTrace):
    from .backends import get_backend

    return get_backend(trace.backend_name)


def _fmt_cell(value, backend) -> str:
    return "" if value is None else backend.fmt(value)


def trace_to_csv(trace: IterationTrace) -> str:
    """CSV serialization: header n,x,fx,e,E,k; empty cells when undefined."""
    backend = _backend_of(trace)
    lines = ["n,x,fx,e,E,k"]
    for s in trace.steps:
        cells = [
            str(s.n),
            backend.fmt(s.x),
            backend.fmt(s.fx),
            _fmt_cell(s.e, backend),
            _fmt_cell(s.E, backend),
            _fmt_cell(s.k, backend),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def trace_to_json(trace: IterationTrace) -> dict:
    """JSON-ready dict with the CSV fields plus termination metadata."""
    backend = _backend_of(trace)
    return {
        "method": trace.method,
        "problem_id": trace.problem_id,
        "backend": trace.backend_name,
        "termination": trace.termination.value,
        "breakdown_step": trace.breakdown_step,
        "steps": [
            {
                "n": s.n,
                "x": backend.fmt(s.x),
                "fx": backend.fmt(s.fx),
                "e": _fmt_cell(s.e, backend) or None,
                "E": _fmt_cell(s.E, backend) or None,
                "k": _fmt_cell(s.k, backend) or None,
            }
            for s in trace.steps
        ],
    }


def trace_json_text(trace: IterationTrace) -> str:
    return json.dumps(trace_to_json(trace), indent=2, sort_keys=True) + "\n"
