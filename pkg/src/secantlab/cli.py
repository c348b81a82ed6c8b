"""Command-line front end.

The CLI is a thin client over the service layer: each subcommand builds the
same request model the HTTP API accepts and either executes it in-process
(default) or posts it to a running server (``--server URL``).  Exit codes:
0 success, 1 usage error or failed verification, 2 the trace ended in a
mathematical breakdown (so shell-driven experiments can branch on it).

Optional ``--config FILE`` supplies defaults from a JSON object whose keys
mirror the flag names; explicit flags win.  Numeric flags accept decimal
strings at full backend precision; use the ``--flag=value`` form for
negative scientific literals like ``--k0=-1e-3``.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.parse
import urllib.request
from typing import Optional

from . import service
from .errors import SecantLabError

_USAGE_EXIT = 1
_BREAKDOWN_EXIT = 2
_BREAKDOWN_TERMINATIONS = ("SecantBreakdown", "NewtonBreakdown")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_USAGE_EXIT)


def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="secantlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers: dict[str, _Parser] = {}

    def common(p: _Parser, outputs=("text", "csv", "json")) -> None:
        p.add_argument("--output", choices=outputs, default=outputs[0])
        p.add_argument("--out", metavar="PATH", help="write result to PATH")
        p.add_argument("--server", metavar="URL", help="POST to a running service")
        p.add_argument("--config", metavar="FILE", help="JSON defaults for flags")

    p = subparsers["trace"] = sub.add_parser(
        "trace", help="run one secant/newton trace and estimate its order"
    )
    p.add_argument("--problem", dest="problem_id")
    p.add_argument("--method", choices=("secant", "newton"), default="secant")
    p.add_argument("--backend", choices=("binary64", "dd"), default="binary64")
    p.add_argument("--x0")
    p.add_argument("--x1")
    p.add_argument("--k0")
    p.add_argument("--e0")
    p.add_argument("--max-iter", type=int, default=200, dest="max_iter")
    p.add_argument("--residual-tol", type=float, default=0.0, dest="residual_tol")
    p.add_argument("--step-tol", type=float, default=0.0, dest="step_tol")
    p.add_argument("--divergence-bound", type=float, dest="divergence_bound")
    p.add_argument("--precision-floor", type=float, dest="precision_floor")
    common(p)

    p = subparsers["constants"] = sub.add_parser(
        "constants", help="characteristic constants table for multiplicities"
    )
    p.add_argument("--m", type=int, action="append", dest="m_list")
    p.add_argument("--backend", choices=("binary64", "dd"), default="binary64")
    common(p)

    p = subparsers["classify"] = sub.add_parser(
        "classify", help="convergence verdict for initial data (k0, e0)"
    )
    p.add_argument("--m", type=int)
    p.add_argument("--k0", type=float)
    p.add_argument("--e0", type=float)
    common(p, outputs=("text", "json"))

    p = subparsers["basin"] = sub.add_parser(
        "basin", help="sweep a k0 grid and emit a classification CSV"
    )
    p.add_argument("--m", type=int)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--e0", type=float)
    common(p, outputs=("csv", "json"))

    p = subparsers["efficiency"] = sub.add_parser(
        "efficiency", help="newton-vs-secant time model and threshold"
    )
    p.add_argument("--m-cost", type=float, default=1.0, dest="m_cost")
    p.add_argument("--s", type=float)
    p.add_argument("--m-alpha", type=float, dest="m_alpha")
    p.add_argument("--e0", type=float)
    p.add_argument("--eps-target", type=float, dest="eps_target")
    common(p, outputs=("text", "json"))

    p = subparsers["verify"] = sub.add_parser(
        "verify", help="run the acceptance suite and print PASS/FAIL per criterion"
    )
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    common(p, outputs=("text", "json"))

    return parser, subparsers


def _load_config(argv: list[str], parser: _Parser) -> Optional[dict]:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        parser.error(f"config {path} must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in cfg.items()}


def _post(server: str, path: str, payload: dict) -> dict:
    req = urllib.request.Request(
        server.rstrip("/") + path,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(req) as resp:
        return json.load(resp)


def _get(server: str, path: str, params: list[tuple[str, str]]) -> dict:
    url = server.rstrip("/") + path + "?" + urllib.parse.urlencode(params)
    with urllib.request.urlopen(url) as resp:
        return json.load(resp)


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(model) -> str:
    return model.model_dump_json(indent=2) + "\n"


def _render_trace(resp: service.TraceResponse, output: str) -> str:
    if output == "csv":
        return resp.csv
    if output == "json":
        return _json_text(resp)
    a = resp.analysis
    lines = [
        f"problem      {resp.problem_id}",
        f"method       {resp.method} ({resp.backend})",
        f"termination  {resp.termination}"
        + (f" (breakdown at step {resp.breakdown_step})" if resp.breakdown_step else ""),
        f"steps        {len(resp.steps)}",
        f"estimate     p_hat={a.p_hat}  c_hat={a.c_hat}",
        f"theory       p={a.theoretical_p}  c={a.theoretical_c}  [{a.verdict}]",
    ]
    if a.note:
        lines.append(f"note         {a.note}")
    lines.append("")
    lines.append(f"{'n':>4}  {'x':<40} {'e':<40} {'k':<40}")
    for s in resp.steps:
        lines.append(f"{s.n:>4}  {s.x:<40} {s.e or '':<40} {s.k or '':<40}")
    return "\n".join(lines) + "\n"


def _render_constants(resp: service.ConstantsResponse, output: str) -> str:
    if output == "json":
        return _json_text(resp)
    if output == "csv":
        lines = ["m,c_m0,c_2m1,c_2m2,residual_c_m0,residual_c_2m1,residual_c_2m2"]
        for r in resp.rows:
            lines.append(
                f"{r.m},{r.c_m0},{r.c_2m1 or ''},{r.c_2m2 or ''},"
                f"{r.residual_c_m0:.3e},"
                f"{'' if r.residual_c_2m1 is None else f'{r.residual_c_2m1:.3e}'},"
                f"{'' if r.residual_c_2m2 is None else f'{r.residual_c_2m2:.3e}'}"
            )
        return "\n".join(lines) + "\n"
    width = 36 if resp.backend == "dd" else 22
    head = f"{'m':>3}  {'c_m0':<{width}} {'c_2m1':<{width}} {'c_2m2':<{width}} residuals"
    lines = [head]
    for r in resp.rows:
        res = f"{r.residual_c_m0:.1e}"
        if r.residual_c_2m1 is not None:
            res += f" {r.residual_c_2m1:.1e} {r.residual_c_2m2:.1e}"
        lines.append(
            f"{r.m:>3}  {r.c_m0:<{width}} {r.c_2m1 or '':<{width}} "
            f"{r.c_2m2 or '':<{width}} {res}"
        )
    return "\n".join(lines) + "\n"


def _render_classify(resp: service.ClassifyResponse, output: str) -> str:
    if output == "json":
        return _json_text(resp)
    c = resp.classification
    parts = [f"m={resp.m} k0={resp.k0:.17g} e0={resp.e0:.17g}: {c.verdict}"]
    if c.breakdown_step is not None:
        parts.append(f"(step {c.breakdown_step})")
    if c.predicted_aec is not None:
        parts.append(f"rate={c.predicted_aec:.10f}")
    if c.exit_index is not None:
        parts.append(f"band exit at {c.exit_index} -> {c.exit_value:.6g}")
    return " ".join(parts) + "\n"


def _render_verify(resp: service.VerifyResponse, output: str) -> str:
    if output == "json":
        return _json_text(resp)
    lines = [f"acceptance suite: {resp.suite}"]
    for r in resp.results:
        flag = "PASS" if r.passed else "FAIL"
        lines.append(f"{flag}  {r.cid:>2}  {r.seconds:7.3f}s  {r.title}: {r.detail}")
    lines.append("result: " + ("all criteria passed" if resp.passed else "FAILURES"))
    return "\n".join(lines) + "\n"


def _render_efficiency(resp: service.EfficiencyResponse, output: str) -> str:
    if output == "json":
        return _json_text(resp)
    winner = "secant" if resp.secant_wins else "newton"
    return (
        f"K={resp.k_ratio:.6f} threshold={resp.threshold:.6f} s={resp.s:.6f}\n"
        f"T_newton={resp.t_newton:.6f} T_secant={resp.t_secant:.6f}"
        f" (continuous: {resp.t_newton_continuous:.6f} /"
        f" {resp.t_secant_continuous:.6f})\n"
        f"faster: {winner}\n"
    )


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()

    try:
        command = next((tok for tok in argv if not tok.startswith("-")), None)
        config = _load_config(argv, parser)
        if config is not None and command in subparsers:
            known = {
                action.dest
                for action in subparsers[command]._actions
                if action.dest != "help"
            }
            unknown = set(config) - known
            if unknown:
                parser.error(f"config keys not recognized: {sorted(unknown)}")
            subparsers[command].set_defaults(**config)

        args = parser.parse_args(argv)
        if args.command is None:
            parser.error("a subcommand is required")
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return _dispatch(args)
    except SecantLabError as exc:
        print(f"secantlab: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except ValueError as exc:
        print(f"secantlab: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except urllib.error.URLError as exc:
        print(f"secantlab: server error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "trace":
        req = service.TraceRequest(
            problem_id=args.problem_id,
            method=args.method,
            backend=args.backend,
            x0=args.x0,
            x1=args.x1,
            k0=args.k0,
            e0=args.e0,
            max_iter=args.max_iter,
            residual_tol=args.residual_tol,
            step_tol=args.step_tol,
            divergence_bound=args.divergence_bound,
            precision_floor=args.precision_floor,
        )
        if args.server:
            resp = service.TraceResponse.model_validate(
                _post(args.server, "/trace", req.model_dump(mode="json"))
            )
        else:
            resp = service.handle_trace(req)
        _emit(_render_trace(resp, args.output), args.out)
        return _BREAKDOWN_EXIT if resp.termination in _BREAKDOWN_TERMINATIONS else 0

    if args.command == "constants":
        req = service.ConstantsRequest(m=args.m_list, backend=args.backend)
        if args.server:
            resp = service.ConstantsResponse.model_validate(
                _get(
                    args.server,
                    "/constants",
                    [("m", str(m)) for m in req.m] + [("backend", req.backend)],
                )
            )
        else:
            resp = service.handle_constants(req)
        _emit(_render_constants(resp, args.output), args.out)
        return 0

    if args.command == "classify":
        req = service.ClassifyRequest(m=args.m, k0=args.k0, e0=args.e0)
        if args.server:
            resp = service.ClassifyResponse.model_validate(
                _post(args.server, "/classify", req.model_dump(mode="json"))
            )
        else:
            resp = service.handle_classify(req)
        _emit(_render_classify(resp, args.output), args.out)
        return 0

    if args.command == "basin":
        req = service.BasinRequest(
            m=args.m, lo=args.lo, hi=args.hi, n=args.n, e0=args.e0
        )
        if args.server:
            resp = service.BasinResponse.model_validate(
                _post(args.server, "/basin", req.model_dump(mode="json"))
            )
        else:
            resp = service.handle_basin(req)
        text = resp.csv if args.output == "csv" else _json_text(resp)
        _emit(text, args.out)
        return 0

    if args.command == "efficiency":
        req = service.EfficiencyRequest(
            m_cost=args.m_cost,
            s=args.s,
            m_alpha=args.m_alpha,
            e0=args.e0,
            eps_target=args.eps_target,
        )
        if args.server:
            resp = service.EfficiencyResponse.model_validate(
                _post(args.server, "/efficiency", req.model_dump(mode="json"))
            )
        else:
            resp = service.handle_efficiency(req)
        _emit(_render_efficiency(resp, args.output), args.out)
        return 0

    if args.command == "verify":
        req = service.VerifyRequest(suite=args.suite)
        if args.server:
            resp = service.VerifyResponse.model_validate(
                _post(args.server, "/verify", req.model_dump(mode="json"))
            )
        else:
            resp = service.handle_verify(req)
        _emit(_render_verify(resp, args.output), args.out)
        return 0 if resp.passed else 1

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
