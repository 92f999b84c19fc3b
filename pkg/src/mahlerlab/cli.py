"""Command line front end: ``mahler-lab <command> -e "<equation>"``.

Reports are JSON on stdout.  Exit status is 0 for a definite answer, 2 when
the answer is Unknown and 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .calmness import WitnessTrace, act, is_precalm, polynomialize, precalm_witness
from .errors import MahlerError, Undecided
from .operators import (
    ASSUMPTION_VIOLATED,
    REGULAR,
    UNKNOWN,
    MahlerEquation,
    kernel_orbit,
    regularity_search,
)
from .parser import parse_equation
from .serialize import (
    SCHEMA,
    equation_field,
    equation_from_json,
    equation_to_json,
    ext_int,
    ratfun_to_json,
    truncation_to_json,
)
from .series import guess_relation, kernel_rank_probe, solve_series, verify_counterexample
from .poly import format_poly, format_ratfun

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


@dataclass
class RunConfig:
    field_zeta: int = 1
    k: int | None = None
    horizon_cap: int = 64
    m_max: int = 32
    terms: int | None = None
    depth: int | None = None
    trace: bool = False
    pretty: bool = False


def _load_equation(args, cfg: RunConfig) -> MahlerEquation:
    if args.expr is not None and args.json_path is not None:
        raise ValueError("give either -e EXPR or --json FILE, not both")
    if args.expr is not None:
        return parse_equation(args.expr, cfg.field_zeta, cfg.k)
    if args.json_path is not None:
        text = sys.stdin.read() if args.json_path == "-" else open(args.json_path).read()
        eq = equation_from_json(json.loads(text))
        if cfg.k is not None and cfg.k != eq.k:
            raise ValueError(f"--k {cfg.k} disagrees with k={eq.k} in the JSON input")
        return eq
    raise ValueError("give an equation with -e EXPR or --json FILE")


def _class_name(cls) -> str:
    return format_poly(cls.poly)


def _violation_json(violation) -> dict:
    cls, spec, val = violation
    return {"class": _class_name(cls), "sequence": list(spec.entries), "mode": spec.mode, "clm": ext_int(val)}


def _trace_json(trace: WitnessTrace) -> list:
    def clean(x):
        if isinstance(x, dict):
            return {str(a): clean(b) for a, b in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(b) for b in x]
        if isinstance(x, float):
            return ext_int(x)
        return x

    return [clean(s) for s in trace.steps]


def precalm_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    try:
        verdict = is_precalm(eq.coeffs, eq.k, cfg.horizon_cap)
    except Undecided as exc:
        return {"precalm": None, "status": UNKNOWN, "reason": str(exc)}, EXIT_UNKNOWN
    out = {"precalm": verdict.precalm}
    if verdict.precalm:
        out["witness"] = format_poly(verdict.witness)
        out["calm_coefficients"] = [format_ratfun(c) for c in act(verdict.witness, eq.coeffs, eq.k)]
        if cfg.trace:
            out["trace"] = _trace_json(verdict.trace)
    else:
        out["violation"] = _violation_json(verdict.violation)
    return out, EXIT_OK


def witness_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    K = equation_field(eq)
    trace = WitnessTrace()
    h = precalm_witness(eq.coeffs, eq.k, cfg.horizon_cap, trace)
    p = polynomialize(eq.coeffs, eq.k, cfg.horizon_cap)
    out = {
        "witness": format_poly(h),
        "witness_degree": h.deg,
        "calm_coefficients": [ratfun_to_json(c, K) for c in act(h, eq.coeffs, eq.k)],
        "polynomializer": format_poly(p),
        "polynomial_coefficients": [format_ratfun(c) for c in act(p, eq.coeffs, eq.k)],
    }
    if cfg.trace:
        out["trace"] = _trace_json(trace)
    return out, EXIT_OK


def regularity_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    v = regularity_search(eq, cfg.m_max, cfg.horizon_cap)
    out: dict = {"status": v.status}
    if v.status == REGULAR:
        out["witness_m"] = v.witness_m
        out["calm_equation"] = equation_to_json(v.calm_equation)
        out["calm_coefficients"] = [format_ratfun(c) for c in v.calm_equation.coeffs]
        out["multiplier"] = format_poly(v.multiplier)
    elif v.certificate is not None:
        out["certificate"] = _violation_json(v.certificate)
    if v.reason:
        out["reason"] = v.reason
    if cfg.trace:
        t = v.trace
        out["trace"] = {
            "windows": {c: [[m, [ext_int(x) for x in vals]] for m, vals in rows] for c, rows in t.windows.items()},
            "digit_depth": t.digit_depth,
            "B": {str(m): b for m, b in t.B.items()},
            "psi": {str(m): format_ratfun(p) for m, p in t.psi.items()},
            "witness_m": t.witness_m,
        }
    code = EXIT_UNKNOWN if v.status in (UNKNOWN, ASSUMPTION_VIOLATED) else EXIT_OK
    return out, code


def series_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    T = cfg.terms or 32
    rep = solve_series(eq, T)
    K = equation_field(eq)
    return {
        "terms": T,
        "coefficients": truncation_to_json(rep.solution, K),
        "free_parameters": rep.free_parameters,
        "consistency": [[j, s] for j, s in rep.consistency],
    }, EXIT_OK


def kernel_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    depth = cfg.depth or 4
    T = cfg.terms or 32 * eq.k ** (depth - 1)
    probe = kernel_rank_probe(eq, depth, T)
    exact = kernel_orbit(eq, min(depth, 5))
    return {
        "probe": {"rank": probe.rank, "closed": probe.closed, "ranks": probe.ranks, "retained": probe.retained, "terms": T},
        "exact_orbit": {
            "closed": exact.closed,
            "levels": [
                {"depth": lv.depth, "added": lv.added, "rank": lv.rank, "pole_orders": lv.pole_orders}
                for lv in exact.levels
            ],
        },
    }, EXIT_OK


def guess_report(eq: MahlerEquation, cfg: RunConfig, order: int, degree: int) -> tuple[dict, int]:
    T = cfg.terms or max(400, 2 * (order + 1) * (degree + 1) + 32)
    t = solve_series(eq, T).solution
    rel = guess_relation(t, order, degree, eq.k)
    if rel is None:
        return {"relation": None, "order_bound": order, "degree_bound": degree, "terms": T}, EXIT_OK
    return {
        "relation": equation_to_json(rel),
        "coefficients": [format_ratfun(c) for c in rel.coeffs],
        "order_bound": order,
        "degree_bound": degree,
        "terms": T,
    }, EXIT_OK


def analyze_report(eq: MahlerEquation, cfg: RunConfig) -> tuple[dict, int]:
    out = {"equation": equation_to_json(eq)}
    pre, c1 = precalm_report(eq, cfg)
    reg, c2 = regularity_report(eq, cfg)
    out["precalm"] = pre
    out["regularity"] = reg
    try:
        small = RunConfig(**{**cfg.__dict__, "depth": cfg.depth or 4})
        out["kernel"], _ = kernel_report(eq, small)
    except MahlerError as exc:
        out["kernel"] = {"error": type(exc).__name__, "message": str(exc)}
    return out, max(c1, c2)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-e", "--expr", help="equation text, e.g. 'f(z) = (1+z)*f(z^2)'")
    common.add_argument("--json", dest="json_path", help="equation JSON file ('-' for stdin)")
    common.add_argument("--field-zeta", type=int, default=1, help="work over Q(zeta_N)")
    common.add_argument("--k", type=int, help="radix (overrides inference)")
    common.add_argument("--horizon-cap", type=int, default=64)
    common.add_argument("--m-max", type=int, default=32)
    common.add_argument("--terms", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--pretty", action="store_true", help="indented output")

    p = argparse.ArgumentParser(prog="mahler-lab", description="Exact analysis of Mahler equations.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("analyze", "precalmness, regularity and kernel probes in one report"),
        ("precalm", "decide precalmness and give a witness or a violating sequence"),
        ("witness", "precalmness witness and polynomializing factor"),
        ("regularity", "run the regularity criterion"),
        ("series", "solve for a power-series solution"),
        ("kernel", "Cartier-orbit rank probe"),
    ]:
        sub.add_parser(name, parents=[common], help=helptext)
    g = sub.add_parser("guess", parents=[common], help="guess a relation from the solved series")
    g.add_argument("--order", type=int, default=1)
    g.add_argument("--degree", type=int, default=4)
    v = sub.add_parser("verify-example", parents=[common], help="check the precalm-versus-regular counterexample")
    v.add_argument("--alpha", default="2")
    return p


def _emit(doc: dict, pretty: bool):
    print(json.dumps(doc, indent=2 if pretty else None, sort_keys=False))


def run_command(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        field_zeta=args.field_zeta,
        k=args.k,
        horizon_cap=args.horizon_cap,
        m_max=args.m_max,
        terms=args.terms,
        depth=args.depth,
        trace=args.trace,
        pretty=args.pretty,
    )
    head = {"schema": SCHEMA, "command": args.command}
    try:
        if args.command == "verify-example":
            alpha = Fraction(args.alpha)
            rep = verify_counterexample(cfg.k or 3, alpha)
            code = {"pass": EXIT_OK, "fail": EXIT_ERROR}.get(rep["status"], EXIT_UNKNOWN)
            _emit({**head, **rep}, cfg.pretty)
            return code
        eq = _load_equation(args, cfg)
        if args.command == "precalm":
            doc, code = precalm_report(eq, cfg)
        elif args.command == "witness":
            doc, code = witness_report(eq, cfg)
        elif args.command == "regularity":
            doc, code = regularity_report(eq, cfg)
        elif args.command == "series":
            doc, code = series_report(eq, cfg)
        elif args.command == "kernel":
            doc, code = kernel_report(eq, cfg)
        elif args.command == "guess":
            doc, code = guess_report(eq, cfg, args.order, args.degree)
        else:
            doc, code = analyze_report(eq, cfg)
    except (MahlerError, ValueError, OSError) as exc:
        print(f"mahler-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit({**head, "error": type(exc).__name__, "message": str(exc)}, cfg.pretty)
        return EXIT_ERROR
    _emit({**head, **doc}, cfg.pretty)
    return code


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
