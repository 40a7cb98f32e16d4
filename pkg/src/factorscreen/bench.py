"""Monte Carlo runner that reproduces the layout of the simulation tables."""

from __future__ import annotations

import csv
import io
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import center_response, standardize_columns, thin_svd
from .metrics import f2_score
from .selection import DEFAULT_ALPHA_GRID, grid_search
from .simulate import SimulationSpec, generate
from .transforms import Method, PpisVariant

WORKERS_ENV = "FACTORSCREEN_WORKERS"
ALL_METHODS = (Method.SIS, Method.FPSIS, Method.FPSIS_BIC, Method.PPIS, Method.TPPIS)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def default_tracked(spec: SimulationSpec) -> tuple[int, ...]:
    """True support, plus the correlated decoy ``x6`` for example 3 (0-based)."""
    support = {1: range(4), 2: range(5), 3: range(6), 4: range(4)}[spec.example_id]
    return tuple(support)


@dataclass(frozen=True)
class ExperimentPlan:
    sim: SimulationSpec
    methods: tuple = ALL_METHODS
    replicates: int = 100
    base_seed: int = 0
    d_grid: tuple | None = None
    alpha_grid: tuple = DEFAULT_ALPHA_GRID
    k_max: int | None = None
    tracked: tuple | None = None
    variant: PpisVariant = PpisVariant.PUFFER_INVERSE
    residual: str = "original"
    generator_options: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        object.__setattr__(self, "methods", tuple(Method.parse(m) for m in self.methods))
        if not self.methods:
            raise ValueError("no methods requested")
        if not self.alpha_grid:
            raise ValueError("alpha grid is empty")
        if self.tracked is None:
            object.__setattr__(self, "tracked", default_tracked(self.sim))


@dataclass(frozen=True)
class MethodOutcome:
    """What one method did on one replicate."""

    method: Method
    selected: tuple
    bic: float
    f2: float
    best_d: int | None
    best_alpha: float | None
    # alpha -> (best BIC at that alpha, F2 of the matching selection)
    alpha_profile: dict = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class ReplicateAggregate:
    method: Method
    replicates: int
    tracked: tuple
    selection_count: tuple
    mean_bic: float
    mean_f2: float
    mean_k: float
    modal_best_alpha: float | None
    alpha_profile: dict = field(default_factory=dict, hash=False)


def run_replicate(plan: ExperimentPlan, replicate: int) -> list[MethodOutcome]:
    """Generate replicate ``replicate`` and run every planned method on it."""
    ds = generate(_reseed(plan.sim, plan.base_seed), replicate=replicate,
                  **plan.generator_options)
    X = standardize_columns(ds.X_raw)
    y = center_response(ds.y_raw)
    p = X.p
    support = ds.true_support
    svd = thin_svd(X) if any(m is not Method.SIS for m in plan.methods) else None
    outcomes = []
    for method in plan.methods:
        res = grid_search(method, X, y, d_grid=plan.d_grid, alpha_grid=plan.alpha_grid,
                          k_max=plan.k_max, svd=svd, variant=plan.variant,
                          residual=plan.residual, keep_cells=method is Method.TPPIS)
        profile = {}
        if method is Method.TPPIS:
            for cell in res.cells:
                prev = profile.get(cell.alpha)
                if prev is None or cell.model.bic < prev[0]:
                    profile[cell.alpha] = (cell.model.bic, cell.model.indices)
            profile = {a: (b, f2_score(sel, support, p)) for a, (b, sel) in sorted(profile.items())}
        outcomes.append(MethodOutcome(
            method=method,
            selected=tuple(int(j) for j in res.selected),
            bic=res.best_bic,
            f2=f2_score(res.selected, support, p),
            best_d=res.best_d,
            best_alpha=res.best_alpha,
            alpha_profile=profile,
        ))
    return outcomes


def _reseed(spec: SimulationSpec, seed: int) -> SimulationSpec:
    if spec.seed == seed:
        return spec
    return SimulationSpec(spec.example_id, spec.n, spec.p, spec.phi, spec.d_spike,
                          spec.m_spike, seed)


def _mode(values):
    counts = Counter(values)
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def aggregate(method: Method, outcomes: Sequence[MethodOutcome], tracked) -> ReplicateAggregate:
    """Commutative reduction over replicates; the result ignores input order."""
    R = len(outcomes)
    counts = tuple(sum(j in o.selected for o in outcomes) for j in tracked)
    alphas = [o.best_alpha for o in outcomes if o.best_alpha is not None]
    profile = {}
    for a in sorted({a for o in outcomes for a in o.alpha_profile}):
        vals = [o.alpha_profile[a] for o in outcomes if a in o.alpha_profile]
        profile[a] = (math.fsum(v[0] for v in vals) / len(vals),
                      math.fsum(v[1] for v in vals) / len(vals), len(vals))
    return ReplicateAggregate(
        method=method,
        replicates=R,
        tracked=tuple(tracked),
        selection_count=counts,
        mean_bic=math.fsum(o.bic for o in outcomes) / R,
        mean_f2=math.fsum(o.f2 for o in outcomes) / R,
        mean_k=math.fsum(len(o.selected) for o in outcomes) / R,
        modal_best_alpha=_mode(alphas) if alphas else None,
        alpha_profile=profile,
    )


def run_outcomes(plan: ExperimentPlan, workers: int | None = None) -> list[list[MethodOutcome]]:
    """Per-replicate outcomes in replicate order, whatever the schedule."""
    workers = default_workers() if workers is None else max(1, int(workers))
    reps = range(plan.replicates)
    if workers == 1 or plan.replicates == 1:
        return [run_replicate(plan, r) for r in reps]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_replicate, [plan] * plan.replicates, reps))


def run_experiment(plan: ExperimentPlan, workers: int | None = None) -> dict:
    """Run the plan and return ``{Method: ReplicateAggregate}`` in plan order.

    Any replicate failure propagates: the counts are always over exactly
    ``plan.replicates`` runs.
    """
    per_rep = run_outcomes(plan, workers)
    return {
        m: aggregate(m, [rep[i] for rep in per_rep], plan.tracked)
        for i, m in enumerate(plan.methods)
    }


TABLE_LABELS = {
    Method.SIS: "SIS",
    Method.FPSIS: "FPSIS",
    Method.FPSIS_BIC: "FPSIS_BIC",
    Method.PPIS: "PPIS",
    Method.TPPIS: "TPPIS",
}


def table_header(tracked) -> list[str]:
    return ["method", "best_alpha", "bic", "f2"] + [f"x({j + 1})" for j in tracked]


def _fmt(x, fmt, precision):
    if x is None:
        return "nan" if fmt == "csv" else "-"
    if precision is None:
        return f"{x:.17g}" if fmt == "csv" else f"{x:.3f}"
    return f"{x:.{precision}f}"


def emit_table(aggregates, fmt: str = "csv", precision: int | None = None) -> str:
    """Render aggregates as CSV or a markdown table.

    Columns are method, best alpha, mean BIC, mean F2 and the selection
    count of each tracked variable.  CSV writes
    floats with 17 significant digits (lossless); markdown uses 3 decimals.
    Methods without an alpha get ``nan`` in CSV and ``-`` in markdown.
    """
    aggs = list(aggregates.values()) if isinstance(aggregates, dict) else list(aggregates)
    if not aggs:
        raise ValueError("nothing to emit")
    if fmt not in ("csv", "markdown"):
        raise ValueError(f"format must be 'csv' or 'markdown', got {fmt!r}")
    header = table_header(aggs[0].tracked)
    rows = []
    for a in aggs:
        rows.append([TABLE_LABELS[a.method], _fmt(a.modal_best_alpha, fmt, precision),
                     _fmt(a.mean_bic, fmt, precision), _fmt(a.mean_f2, fmt, precision)]
                    + [str(c) for c in a.selection_count])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    def line(cells):
        padded = [cells[0].ljust(widths[0])] + [c.rjust(wd) for c, wd in zip(cells[1:], widths[1:])]
        return "| " + " | ".join(padded) + " |"
    out = [line(header), "|" + "|".join("-" * (wd + 2) for wd in widths) + "|"]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def emit_alpha_profile(agg: ReplicateAggregate) -> str:
    """CSV of mean best BIC and F2 per alpha (TPPIS), for plotting elsewhere."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "mean_bic", "mean_f2", "replicates"])
    for a, (b, f, cnt) in sorted(agg.alpha_profile.items()):
        w.writerow([f"{a:.17g}", f"{b:.17g}", f"{f:.17g}", cnt])
    return buf.getvalue()
