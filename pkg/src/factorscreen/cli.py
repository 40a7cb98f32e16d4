"""``factorscreen`` command line: screen a CSV, simulate datasets, run benchmarks.

Exit codes: 0 on success, 2 for bad flags or unusable input, 1 for failures
during the computation itself.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import bench, io
from ._errors import CsvError, InvalidFactorCount, InvalidK, InvalidSpikeCounts, ScreeningError
from .linalg import center_response, standardize_columns
from .selection import DEFAULT_ALPHA_GRID, grid_search
from .simulate import SimulationSpec, generate
from .transforms import Method, PpisVariant

log = logging.getLogger("factorscreen")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
_USAGE_ERRORS = (CsvError, InvalidFactorCount, InvalidK, InvalidSpikeCounts, FileNotFoundError)


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _method(text):
    try:
        return Method.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _methods(text):
    return tuple(_method(t) for t in text.split(",") if t.strip())


def _add_grid_flags(p):
    p.add_argument("--d-grid", type=_int_list, help="factor counts to search, e.g. 20,40,60")
    p.add_argument("--alpha-grid", type=_float_list, help="truncation levels in (0, 1]")
    p.add_argument("--k-max", type=int, help="largest model size considered")
    p.add_argument("--variant", choices=[v.value for v in PpisVariant],
                   default=PpisVariant.PUFFER_INVERSE.value, help="PPIS scaling of kept directions")
    p.add_argument("--bic-residual", choices=("original", "profiled"), default="original",
                   help="data used for the BIC residual")


def _add_sim_flags(p, require_example=True):
    p.add_argument("--example", type=int, choices=(1, 2, 3, 4), required=require_example)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--phi", type=float, help="equicorrelation (examples 1-3)")
    p.add_argument("--d", type=int, default=3, help="strong spikes (example 4)")
    p.add_argument("--m", type=int, help="weak spikes (example 4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x4-coef", type=float,
                   help="override the coefficient of x4 in examples 1-3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factorscreen",
                                     description="Factor-profiled variable screening.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("screen", help="screen the predictors of a CSV dataset")
    s.add_argument("--csv", required=True, type=Path)
    s.add_argument("--response", default="y", help="response column name or 0-based index")
    s.add_argument("--method", type=_method, required=True)
    _add_grid_flags(s)
    s.add_argument("--out", type=Path, help="write the full importance ranking here (CSV)")

    g = sub.add_parser("simulate", help="write one simulated dataset as CSV")
    _add_sim_flags(g)
    g.add_argument("--replicate", type=int, help="replicate substream (default: none)")
    g.add_argument("--out", type=Path, help="output file (default: stdout)")

    b = sub.add_parser("bench", help="Monte Carlo table for one simulation setting")
    _add_sim_flags(b)
    b.add_argument("--replicates", type=int, default=100)
    b.add_argument("--methods", type=_methods, default=bench.ALL_METHODS)
    _add_grid_flags(b)
    b.add_argument("--format", choices=("csv", "markdown"), default="csv")
    b.add_argument("--workers", type=int, help=f"worker processes (default: ${bench.WORKERS_ENV} or 1)")
    b.add_argument("--out", type=Path, help="output file (default: stdout)")
    b.add_argument("--alpha-profile", type=Path,
                   help="also write TPPIS mean BIC/F2 per alpha to this CSV")
    return parser


def _sim_spec(args) -> SimulationSpec:
    if args.example == 4:
        if args.m is None:
            raise UsageError("--example 4 needs --m")
        return SimulationSpec(4, args.n, args.p, d_spike=args.d, m_spike=args.m, seed=args.seed)
    if args.phi is None:
        raise UsageError(f"--example {args.example} needs --phi")
    return SimulationSpec(args.example, args.n, args.p, phi=args.phi, seed=args.seed)


def _generator_options(args) -> dict:
    if args.x4_coef is None:
        return {}
    if args.example == 4:
        raise UsageError("--x4-coef applies to examples 1-3 only")
    return {"x4_coef": args.x4_coef}


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_screen(args) -> int:
    if args.method is Method.SIS and (args.d_grid or args.alpha_grid):
        log.warning("SIS does not use a factor count or truncation; ignoring --d-grid/--alpha-grid")
    data = io.load_csv(args.csv, args.response)
    X = standardize_columns(data.X)
    y = center_response(data.y)
    res = grid_search(args.method, X, y, d_grid=args.d_grid, alpha_grid=args.alpha_grid,
                      k_max=args.k_max, variant=PpisVariant(args.variant),
                      residual=args.bic_residual, keep_cells=False)
    names = [data.names[j] for j in res.selected]
    fmt = lambda v: "-" if v is None else f"{v:g}"
    print(f"method    {res.method.value}")
    print(f"n, p      {X.n}, {X.p}")
    print(f"d         {fmt(res.best_d)}")
    print(f"alpha     {fmt(res.best_alpha)}")
    print(f"k         {res.best_k}")
    print(f"bic       {res.best_bic:.17g}")
    print(f"selected  {', '.join(names)}")
    if args.out is not None:
        omega = res.best_scores.omega
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "variable", "omega"])
            for r, j in enumerate(res.best_scores.ranking, start=1):
                w.writerow([r, data.names[j], f"{omega[j]:.17g}"])
        print(f"ranking   {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _sim_spec(args)
    ds = generate(spec, replicate=args.replicate, **_generator_options(args))
    _emit(io.dataset_csv_text(ds.X_raw, ds.y_raw, [f"x{j + 1}" for j in range(spec.p)]), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.alpha_profile is not None and Method.TPPIS not in args.methods:
        raise UsageError("--alpha-profile needs tppis among --methods")
    try:
        plan = bench.ExperimentPlan(
            sim=_sim_spec(args),
            methods=args.methods,
            replicates=args.replicates,
            base_seed=args.seed,
            d_grid=args.d_grid,
            alpha_grid=args.alpha_grid or DEFAULT_ALPHA_GRID,
            k_max=args.k_max,
            variant=PpisVariant(args.variant),
            residual=args.bic_residual,
            generator_options=_generator_options(args),
        )
    except ValueError as exc:
        if isinstance(exc, ScreeningError):
            raise
        raise UsageError(str(exc)) from None
    aggs = bench.run_experiment(plan, workers=args.workers)
    _emit(bench.emit_table(aggs, fmt=args.format), args.out)
    if args.alpha_profile is not None:
        args.alpha_profile.write_text(bench.emit_alpha_profile(aggs[Method.TPPIS]),
                                      encoding="utf-8")
    return EXIT_OK


COMMANDS = {"screen": cmd_screen, "simulate": cmd_simulate, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, *_USAGE_ERRORS) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScreeningError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
