"""FastAPI application exposing the lab handlers over HTTP.

Run with:  uvicorn secantlab.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from . import service
from .errors import SecantLabError, UnknownProblemError


def create_app() -> FastAPI:
    app = FastAPI(
        title="secantlab",
        description=(
            "Root-finding laboratory: secant/Newton traces with error and "
            "ratio columns, characteristic constants, initial-value "
            "classification near multiple roots, basin sweeps, and the "
            "Newton-vs-secant cost model."
        ),
        version="0.1.0",
    )

    @app.exception_handler(UnknownProblemError)
    async def _unknown_problem(_: Request, exc: UnknownProblemError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(SecantLabError)
    async def _domain_error(_: Request, exc: SecantLabError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/problems", response_model=list[service.ProblemModel])
    def problems():
        return service.handle_problems()

    @app.post("/trace", response_model=service.TraceResponse)
    def trace(req: service.TraceRequest):
        return service.handle_trace(req)

    @app.get("/constants", response_model=service.ConstantsResponse)
    def constants(
        m: list[int] = Query(min_length=1), backend: str = "binary64"
    ):
        return service.handle_constants(
            service.ConstantsRequest(m=m, backend=backend)
        )

    @app.post("/classify", response_model=service.ClassifyResponse)
    def classify(req: service.ClassifyRequest):
        return service.handle_classify(req)

    @app.post("/basin", response_model=service.BasinResponse)
    def basin(req: service.BasinRequest):
        return service.handle_basin(req)

    @app.post("/efficiency", response_model=service.EfficiencyResponse)
    def efficiency(req: service.EfficiencyRequest):
        return service.handle_efficiency(req)

    @app.post("/verify", response_model=service.VerifyResponse)
    def verify(req: service.VerifyRequest):
        return service.handle_verify(req)

    return app


app = create_app()
