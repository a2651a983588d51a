"""Command line entry point: ``relcp detect | simulate | power``."""

from __future__ import annotations

import argparse
import json
import sys

from .config import EstimationConfig
from .datagen import MODELS, SimScenario
from .errors import RelcpError
from .harness import Method, power_curve, rejection_rate
from .io import (
    SCHEMA_VERSION,
    DetectRequest,
    emit_plot_data,
    report_to_json,
    run_detect,
    write_json,
)

EXIT_ERROR = 1


def _add_estimation_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("estimation")
    g.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    g.add_argument("--t-min", type=float, default=0.05, help="boundary fraction excluded from the change search (default 0.05)")
    g.add_argument("--S", dest="separation", type=float, default=0.9, help="separation constant of the variance split samples (default 0.9)")
    g.add_argument("--bandwidth", type=int, default=None, help="Bartlett bandwidth; default floor(m^(1/3)) per split sample")
    g.add_argument("--s-minus-sq", type=float, default=1e-4, help="lower clamp of the squared long-run sd (default 1e-4)")
    g.add_argument("--s-plus-sq", type=float, default=1e4, help="upper clamp of the squared long-run sd (default 1e4)")
    g.add_argument("--combine", choices=("max", "average"), default="max", help="merge rule for the two split variances (default max)")
    g.add_argument("--no-bias-correction", dest="bias_correction", action="store_false", help="disable the finite sample bias correction")


def _add_method_flags(p: argparse.ArgumentParser, replicates: int) -> None:
    g = p.add_argument_group("calibration")
    g.add_argument("--method", choices=("asymptotic", "bootstrap"), default="asymptotic", help="critical value source (default asymptotic)")
    g.add_argument("--K", type=int, default=None, help="bootstrap block length; required for --method bootstrap, must divide n")
    g.add_argument("--replicates", type=int, default=replicates, help=f"bootstrap replicates (default {replicates})")


def _config(args) -> EstimationConfig:
    return EstimationConfig(
        t_min=args.t_min,
        separation=args.separation,
        bandwidth=args.bandwidth,
        s_minus_sq=args.s_minus_sq,
        s_plus_sq=args.s_plus_sq,
        combine=args.combine,
        bias_correction=args.bias_correction,
    )


def _method(args) -> Method:
    cfg = _config(args)
    if args.method == "bootstrap":
        return Method.bootstrap(args.K, args.replicates, args.alpha, cfg)
    return Method.asymptotic(args.alpha, cfg)


def _scenario(args, mu: float) -> SimScenario:
    return SimScenario(args.model, args.n, args.d, mu=mu, t=args.t, deltas=args.delta, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcp",
        description="Tests for relevant mean changes in high dimensional time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="test a CSV panel for relevant changes")
    p.add_argument("input", help="CSV file; header row of column labels, one row per time point")
    th = p.add_mutually_exclusive_group(required=True)
    th.add_argument("--delta", type=float, help="threshold applied to every column")
    th.add_argument("--deltas-file", help="file with one threshold per column")
    p.add_argument("--seed", type=int, default=0, help="bootstrap multiplier seed (default 0)")
    p.add_argument("--output", "-o", default=None, help="JSON report path (default stdout)")
    _add_method_flags(p, replicates=500)
    _add_estimation_flags(p)

    for name, help_text in (
        ("simulate", "rejection rate of one simulation cell"),
        ("power", "rejection rates over a grid of shifts"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", choices=MODELS, required=True, help="innovation model")
        p.add_argument("--n", type=int, required=True, help="sample size")
        p.add_argument("--d", type=int, required=True, help="dimension")
        if name == "simulate":
            p.add_argument("--mu", type=float, required=True, help="common mean shift")
        else:
            p.add_argument("--mu-grid", required=True, help="comma separated shifts, e.g. 0.9,1.0,1.1")
            p.add_argument("--csv", default=None, help="plot data CSV path")
        p.add_argument("--t", type=float, default=0.5, help="change location (default 0.5)")
        p.add_argument("--delta", type=float, default=1.0, help="common threshold (default 1.0)")
        p.add_argument("--runs", type=int, default=1000, help="Monte-Carlo runs (default 1000)")
        p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
        p.add_argument("--output", "-o", default=None, help="JSON results path (default stdout)")
        _add_method_flags(p, replicates=200)
        _add_estimation_flags(p)
    return parser


def _emit(doc: dict, path) -> None:
    if path is None:
        sys.stdout.write(report_to_json(doc))
    else:
        write_json(doc, path)


def _results_doc(results) -> dict:
    return {"schema_version": SCHEMA_VERSION, "results": [r.to_dict() for r in results]}


def _run(args) -> None:
    if args.command == "detect":
        req = DetectRequest(
            input_path=args.input,
            delta=args.delta,
            deltas_path=args.deltas_file,
            alpha=args.alpha,
            method=args.method,
            K=args.K,
            replicates=args.replicates,
            seed=args.seed,
            config=_config(args),
            output_path=args.output,
        )
        _emit(run_detect(req), args.output)
    elif args.command == "simulate":
        res = rejection_rate(_scenario(args, args.mu), _method(args), args.runs, args.seed, args.workers)
        _emit(_results_doc([res]), args.output)
    else:
        try:
            grid = [float(v) for v in args.mu_grid.split(",") if v.strip()]
        except ValueError as exc:
            raise RelcpError(f"bad --mu-grid: {exc}") from None
        curve = power_curve(_scenario(args, grid[0] if grid else 0.0), grid, _method(args), args.runs, args.seed, args.workers)
        doc = _results_doc(curve)
        if args.csv:
            emit_plot_data(curve, args.csv)
        _emit(doc, args.output)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except (RelcpError, OSError, ValueError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
