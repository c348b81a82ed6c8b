"""Request/response models and handlers for the lab's operations.

This is the single entry layer for every front end: the FastAPI app binds
these handlers to HTTP routes, and the CLI calls them in-process (or posts
the same payloads to a remote server).  Numeric inputs may be given as JSON
numbers or as decimal strings; strings are parsed at full backend precision,
which matters for double-double runs seeded with non-representable values.

All high-precision outputs travel as strings (17 significant digits for
binary64, 32 for double-double) so responses are byte-deterministic.
"""

from __future__ import annotations

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from . import acceptance
from .analysis import estimate_q_order, theoretical_aec_simple
from .backends import get_backend
from .charpoly import char_constants, p_poly, q_poly
from .dynamics import Classification, basin_sweep, classify_even, classify_odd
from .errors import (
    NotSimpleRootError,
    SecantLabError,
    ZeroCurvatureError,
    ZeroDerivativeError,
)
from .iterate import (
    StoppingCriteria,
    run_newton,
    run_secant,
    trace_to_csv,
    trace_to_json,
)
from .problems import builtin_corpus, curvature_ratio, get_problem

Number = Union[float, str]

_R0 = (1.0 + math.sqrt(5.0)) / 2.0


# --------------------------------------------------------------------------
# trace
# --------------------------------------------------------------------------


class TraceRequest(BaseModel):
    problem_id: str
    method: Literal["secant", "newton"] = "secant"
    backend: Literal["binary64", "dd"] = "binary64"
    x0: Optional[Number] = None
    x1: Optional[Number] = None
    k0: Optional[Number] = None
    e0: Optional[Number] = None
    max_iter: int = Field(default=200, ge=1)
    residual_tol: float = 0.0
    step_tol: float = 0.0
    divergence_bound: Optional[float] = None
    precision_floor: Optional[float] = None


class TraceStepModel(BaseModel):
    n: int
    x: str
    fx: str
    e: Optional[str] = None
    E: Optional[str] = None
    k: Optional[str] = None


class TraceAnalysisModel(BaseModel):
    p_hat: Optional[float] = None
    c_hat: Optional[float] = None
    theoretical_p: Optional[float] = None
    theoretical_c: Optional[float] = None
    verdict: str = "unavailable"
    note: Optional[str] = None


class TraceResponse(BaseModel):
    problem_id: str
    method: str
    backend: str
    termination: str
    breakdown_step: Optional[int] = None
    steps: list[TraceStepModel]
    analysis: TraceAnalysisModel
    csv: str


def _starting_points(req: TraceRequest, problem, backend):
    """Resolve (x0, x1): either given directly or via the (k0, e0) pairing
    x0 = alpha + e0, x1 = alpha + k0*e0."""
    has_x = req.x0 is not None
    has_k = req.k0 is not None or req.e0 is not None
    if has_x and has_k:
        raise ValueError("give either x0/x1 or k0/e0, not both")
    if req.method == "newton":
        if req.k0 is not None:
            raise ValueError("k0 applies to the secant method only")
        if has_x:
            return backend.of(req.x0), None
        if req.e0 is not None:
            return problem.root(backend) + backend.of(req.e0), None
        raise ValueError("newton needs x0 (or e0)")
    if has_x:
        if req.x1 is None:
            raise ValueError("secant needs both x0 and x1")
        return backend.of(req.x0), backend.of(req.x1)
    if req.k0 is None or req.e0 is None:
        raise ValueError("give x0/x1, or both k0 and e0")
    alpha = problem.root(backend)
    e0 = backend.of(req.e0)
    return alpha + e0, alpha + backend.of(req.k0) * e0


def _theory(problem, method: str):
    """(order, error constant) the local theory predicts, when it has one."""
    if problem.multiplicity == 1:
        try:
            if method == "secant":
                return _R0, theoretical_aec_simple(problem)
            return 2.0, curvature_ratio(problem).m_alpha
        except (ZeroCurvatureError, ZeroDerivativeError, NotSimpleRootError):
            return None, None
    if method == "secant":
        from .charpoly import solve_c_m0

        return 1.0, float(solve_c_m0(problem.multiplicity))
    return None, None


def handle_trace(req: TraceRequest) -> TraceResponse:
    problem = get_problem(req.problem_id)
    backend = get_backend(req.backend)
    stop = StoppingCriteria(
        max_iter=req.max_iter,
        residual_tol=req.residual_tol,
        step_tol=req.step_tol,
        divergence_bound=req.divergence_bound,
        precision_floor=req.precision_floor,
    )
    x0, x1 = _starting_points(req, problem, backend)
    if req.method == "secant":
        trace = run_secant(problem, x0, x1, stop, backend=backend)
    else:
        trace = run_newton(problem, x0, stop, backend=backend)

    theo_p, theo_c = _theory(problem, req.method)
    analysis = TraceAnalysisModel(theoretical_p=theo_p, theoretical_c=theo_c)
    try:
        est = estimate_q_order(trace)
        analysis.p_hat = est.p_hat
        analysis.c_hat = est.c_hat
        if theo_p is not None:
            consistent = (
                abs(est.p_hat - theo_p) <= 0.1 * theo_p
                and theo_c is not None
                and abs(est.c_hat - theo_c) <= 0.25 * theo_c
            )
            analysis.verdict = "matches_theory" if consistent else "differs"
        else:
            analysis.verdict = "estimated"
    except SecantLabError as exc:
        analysis.note = str(exc)

    payload = trace_to_json(trace)
    return TraceResponse(
        problem_id=trace.problem_id,
        method=trace.method,
        backend=trace.backend_name,
        termination=payload["termination"],
        breakdown_step=payload["breakdown_step"],
        steps=[TraceStepModel(**s) for s in payload["steps"]],
        analysis=analysis,
        csv=trace_to_csv(trace),
    )


# --------------------------------------------------------------------------
# constants
# --------------------------------------------------------------------------


class ConstantsRequest(BaseModel):
    m: list[int] = Field(min_length=1)
    backend: Literal["binary64", "dd"] = "binary64"


class ConstantsRow(BaseModel):
    m: int
    c_m0: str
    c_2m1: Optional[str] = None
    c_2m2: Optional[str] = None
    residual_c_m0: float
    residual_c_2m1: Optional[float] = None
    residual_c_2m2: Optional[float] = None


class ConstantsResponse(BaseModel):
    backend: str
    rows: list[ConstantsRow]


def handle_constants(req: ConstantsRequest) -> ConstantsResponse:
    backend = get_backend(req.backend)
    rows = []
    for m in req.m:
        if m < 2:
            raise ValueError(f"multiplicity must be >= 2, got {m}")
        cc = char_constants(m, backend)
        row = ConstantsRow(
            m=m,
            c_m0=backend.fmt(cc.c_m0),
            residual_c_m0=abs(float(p_poly(m, cc.c_m0))),
        )
        if cc.c_2m1 is not None:
            row.c_2m1 = backend.fmt(cc.c_2m1)
            row.residual_c_2m1 = abs(float(p_poly(m, cc.c_2m1)))
            row.c_2m2 = backend.fmt(cc.c_2m2)
            row.residual_c_2m2 = abs(float(q_poly(m, cc.c_2m2)))
        rows.append(row)
    return ConstantsResponse(backend=backend.name, rows=rows)


# --------------------------------------------------------------------------
# classify / basin
# --------------------------------------------------------------------------


class ClassifyRequest(BaseModel):
    m: int = Field(ge=2)
    k0: float
    e0: float


class ClassificationModel(BaseModel):
    verdict: str
    breakdown_step: Optional[int] = None
    predicted_aec: Optional[float] = None
    exit_index: Optional[int] = None
    exit_value: Optional[float] = None


class ClassifyResponse(BaseModel):
    m: int
    k0: float
    e0: float
    classification: ClassificationModel


def _classification_model(c: Classification) -> ClassificationModel:
    return ClassificationModel(
        verdict=c.verdict.value,
        breakdown_step=c.breakdown_step,
        predicted_aec=c.predicted_aec,
        exit_index=c.witness.exit_index if c.witness else None,
        exit_value=c.witness.exit_value if c.witness else None,
    )


def handle_classify(req: ClassifyRequest) -> ClassifyResponse:
    classify = classify_odd if req.m % 2 else classify_even
    return ClassifyResponse(
        m=req.m,
        k0=req.k0,
        e0=req.e0,
        classification=_classification_model(classify(req.m, req.k0, req.e0)),
    )


class BasinRequest(BaseModel):
    m: int = Field(ge=2)
    lo: float
    hi: float
    n: int = Field(ge=1)
    e0: float


class BasinRow(BaseModel):
    k0: float
    verdict: str
    exit_index: Optional[int] = None
    exit_value: Optional[float] = None
    predicted_aec: Optional[float] = None


class BasinResponse(BaseModel):
    m: int
    e0: float
    constants: dict[str, float]
    rows: list[BasinRow]
    csv: str


def _fmt_opt(v) -> str:
    return "" if v is None else f"{v:.17g}"


def handle_basin(req: BasinRequest) -> BasinResponse:
    if req.hi < req.lo:
        raise ValueError("grid upper bound must be >= lower bound")
    if req.n == 1:
        grid = [req.lo]
    else:
        grid = [req.lo + (req.hi - req.lo) * i / (req.n - 1) for i in range(req.n)]

    cc = char_constants(req.m)
    constants = {"c_m0": float(cc.c_m0)}
    if cc.c_2m1 is not None:
        constants["c_2m1"] = float(cc.c_2m1)
        constants["c_2m2"] = float(cc.c_2m2)

    rows = []
    for k0, cls in basin_sweep(req.m, grid, req.e0):
        model = _classification_model(cls)
        rows.append(
            BasinRow(
                k0=k0,
                verdict=model.verdict,
                exit_index=model.exit_index,
                exit_value=model.exit_value,
                predicted_aec=model.predicted_aec,
            )
        )

    const_text = " ".join(f"{k}={v:.17g}" for k, v in sorted(constants.items()))
    lines = [
        f"# m={req.m} e0={req.e0:.17g} {const_text}",
        "k0,verdict,exit_index,exit_value,predicted_aec",
    ]
    for r in rows:
        lines.append(
            f"{r.k0:.17g},{r.verdict},"
            f"{'' if r.exit_index is None else r.exit_index},"
            f"{_fmt_opt(r.exit_value)},{_fmt_opt(r.predicted_aec)}"
        )
    return BasinResponse(
        m=req.m, e0=req.e0, constants=constants, rows=rows, csv="\n".join(lines) + "\n"
    )


# --------------------------------------------------------------------------
# efficiency
# --------------------------------------------------------------------------


class EfficiencyRequest(BaseModel):
    m_cost: float = Field(default=1.0, gt=0)
    s: float = Field(ge=0)
    m_alpha: float = Field(gt=0)
    e0: float = Field(gt=0)
    eps_target: float = Field(gt=0)


class EfficiencyResponse(BaseModel):
    t_newton: float
    t_secant: float
    t_newton_continuous: float
    t_secant_continuous: float
    k_ratio: float
    s: float
    threshold: float
    secant_wins: bool


def handle_efficiency(req: EfficiencyRequest) -> EfficiencyResponse:
    from .analysis import efficiency_report, efficiency_report_continuous

    rep = efficiency_report(req.m_cost, req.s, req.m_alpha, req.e0, req.eps_target)
    cont = efficiency_report_continuous(
        req.m_cost, req.s, req.m_alpha, req.e0, req.eps_target
    )
    return EfficiencyResponse(
        t_newton=rep.t_newton,
        t_secant=rep.t_secant,
        t_newton_continuous=cont.t_newton,
        t_secant_continuous=cont.t_secant,
        k_ratio=rep.k_ratio,
        s=req.s,
        threshold=rep.threshold,
        secant_wins=rep.t_secant < rep.t_newton,
    )


# --------------------------------------------------------------------------
# verify / problems
# --------------------------------------------------------------------------


class VerifyRequest(BaseModel):
    suite: Literal["fast", "full"] = "fast"


class CriterionModel(BaseModel):
    cid: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    results: list[CriterionModel]


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    results = [
        CriterionModel(
            cid=r.cid,
            title=r.title,
            passed=r.passed,
            detail=r.detail,
            seconds=r.seconds,
            budget=r.budget,
        )
        for r in acceptance.run_suite(req.suite)
    ]
    return VerifyResponse(
        suite=req.suite, passed=all(r.passed for r in results), results=results
    )


class ProblemModel(BaseModel):
    problem_id: str
    expression: str
    multiplicity: int
    root: float
    domain_halfwidth: float


def handle_problems() -> list[ProblemModel]:
    return [
        ProblemModel(
            problem_id=p.problem_id,
            expression=p.expression,
            multiplicity=p.multiplicity,
            root=float(p.root()),
            domain_halfwidth=p.domain_halfwidth,
        )
        for p in builtin_corpus()
    ]
