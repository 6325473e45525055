"""Command-line front end.

    python -m cli.main bounds --r1 1.2 --r2 1.2 --p1 3 --p2 3
    python -m cli.main sweep --p 3 --steps 41 > p3.csv
    python -m cli.main capacity-check --r0 1.2 --p 3
    python -m cli.main simulate --n 24 --r1 0.4167 --r2 0.4167 --p1 3 --p2 3 --rho 0.3
    python -m cli.main example
    python -m cli.main curves --r0 1.2 --p 3

Results go to stdout (or `--output`); logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from channel.bounds import (
    cooperative_rate,
    cut_set_bound,
    degenerate_powers,
    grid_bound,
    lower_bound,
    meeting_check,
    objective_t1,
    objective_t2,
    rho_circ,
    rho_star,
    upper_bound,
)
from channel.config import get_config
from channel.errors import (
    ArgumentError,
    DomainError,
    SimulationError,
    StructureError,
)
from channel.schemas import (
    ChannelParams,
    Decoder,
    Interval,
    SimConfig,
    SweepRow,
    SweepSpec,
    SymmetricParams,
    Tolerances,
)
from channel.symmetric import capacity_check, f1, f2, f3
from channel.utils import default_sweep_range, linspace_inclusive
from cli.reports import (
    CURVES_HEADER,
    SWEEP_HEADER,
    bound_payload,
    numeric_csv_rows,
    render_text,
    sweep_csv_rows,
)
from sim.mc_sim import predicted_pair_exponent, run_trials
from storage.paths import write_csv, write_json, write_text

logger = logging.getLogger(__name__)

# -----------------------------
# Exit codes
# -----------------------------
EXIT_OK = 0
EXIT_EXAMPLE_DELTA = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_STRUCTURE = 4
EXIT_SIMULATION = 5
EXIT_IO = 6

# Worked example at P = 3, R0 = 1.2, printed to four decimals.
EXAMPLE_R0 = 1.2
EXAMPLE_P = 3.0
EXAMPLE_VALUES: List[Tuple[str, float]] = [
    ("rho_circ", 0.9003),
    ("rho_star", 0.8471),
    ("rho_bar1", 0.7734),
    ("rho_bar2", 0.7643),
    ("f1_at_rho_star", 1.6426),
    ("f3_at_rho_bar2", 1.7671),
]
EXAMPLE_CAPACITY = 1.7671
EXAMPLE_MAX_DELTA = 1e-3


def tolerances(tol: float | None) -> Tolerances:
    """Flag value when given, DIAMOND_TOL otherwise."""
    value = get_config().tol if tol is None else tol
    return Tolerances(tol_rho=value, tol_val=value)


# -----------------------------
# bounds
# -----------------------------
def _grid_reference(params: ChannelParams) -> Dict[str, float]:
    """Brute-force values of the three bounds on a 10^6-point grid."""
    rc = rho_circ(params.r1, params.r2)
    _, lower = grid_bound(lambda r: objective_t1(params, r), Interval(lo=0.0, hi=rc))
    lower = max(lower, cooperative_rate(params))
    _, cut = grid_bound(lambda r: objective_t2(params, r), Interval(lo=0.0, hi=1.0))
    if degenerate_powers(params.p1, params.p2):
        upper = cut
    else:
        rs = rho_star(params.p1, params.p2)
        _, t1 = grid_bound(lambda r: objective_t1(params, r), Interval(lo=0.0, hi=rs))
        _, t2 = grid_bound(lambda r: objective_t2(params, r), Interval(lo=rs, hi=1.0))
        upper = max(t1, t2)
    return {"lower": lower, "upper": upper, "cutset": cut}


def cmd_bounds(params: ChannelParams, tol: Tolerances, fmt: str, output: str | None, check: bool = False) -> int:
    results = {
        "lower": lower_bound(params, tol),
        "upper": upper_bound(params, tol),
        "cutset": cut_set_bound(params, tol),
    }
    meeting = meeting_check(params, tol)
    reference = _grid_reference(params) if check else None

    if fmt == "json":
        payload = {
            "params": params.model_dump(mode="json"),
            **{k: bound_payload(v) for k, v in results.items()},
            "meeting": meeting.model_dump(mode="json"),
        }
        if reference is not None:
            payload["grid_check"] = {
                k: {"grid": v, "delta": results[k].value - v} for k, v in reference.items()
            }
        write_json(output, payload)
    else:
        write_text(
            output,
            render_text("bounds.txt.j2", params=params, results=results, meeting=meeting, reference=reference),
        )
    return EXIT_OK


# -----------------------------
# sweep
# -----------------------------
def sweep_row(r0: float, p: float, tol: Tolerances) -> SweepRow:
    sym = SymmetricParams(r0=r0, p=p)
    params = sym.to_channel()
    lower = lower_bound(params, tol)
    upper = upper_bound(params, tol)
    cut = cut_set_bound(params, tol)
    report = capacity_check(sym, tol)
    return SweepRow(
        r0=r0,
        p=p,
        lower=lower.value,
        upper=upper.value,
        cutset=cut.value,
        capacity_known=report.capacity is not None,
        capacity=report.capacity,
        rho_lower=lower.argmax_rho,
        rho_upper=upper.argmax_rho,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRow]:
    """One row per r0 step; rows come back in r0 order whatever the thread count."""
    grid = linspace_inclusive(spec.r0_min, spec.r0_max, spec.steps)
    if workers <= 1:
        return [sweep_row(r0, spec.p, spec.tol) for r0 in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r0: sweep_row(r0, spec.p, spec.tol), grid))


def cmd_sweep(spec: SweepSpec, fmt: str, output: str | None, workers: int = 1) -> int:
    rows = run_sweep(spec, workers)
    logger.info("swept %d rows at p=%s", len(rows), spec.p)
    if fmt == "json":
        write_json(output, [r.model_dump(mode="json") for r in rows])
    else:
        write_csv(output, SWEEP_HEADER, sweep_csv_rows(rows))
    return EXIT_OK


# -----------------------------
# capacity-check
# -----------------------------
def cmd_capacity_check(sym: SymmetricParams, tol: Tolerances, fmt: str, output: str | None) -> int:
    report = capacity_check(sym, tol)
    if fmt == "json":
        write_json(output, report.model_dump(mode="json"))
    else:
        write_text(output, render_text("capacity_check.txt.j2", report=report))
    return EXIT_OK


# -----------------------------
# simulate
# -----------------------------
def cmd_simulate(config: SimConfig, fmt: str, output: str | None, workers: int | None = None) -> int:
    predicted = predicted_pair_exponent(config.r1, config.r2, config.rho)
    result = run_trials(config, workers=workers)
    if fmt == "json":
        write_json(
            output,
            {
                "config": config.model_dump(mode="json"),
                "result": result.model_dump(mode="json"),
                "predicted_pair_exponent": predicted,
            },
        )
    else:
        write_text(output, render_text("simulate.txt.j2", config=config, result=result, predicted=predicted))
    return EXIT_OK


# -----------------------------
# example
# -----------------------------
def example_rows(tol: Tolerances) -> Tuple[List[Dict[str, float | str | None]], float | None]:
    report = capacity_check(SymmetricParams(r0=EXAMPLE_R0, p=EXAMPLE_P), tol)
    computed = report.model_dump()
    rows: List[Dict[str, float | str | None]] = []
    for name, published in EXAMPLE_VALUES:
        value = computed[name]
        rows.append({"name": name, "computed": value, "published": published, "delta": abs(value - published)})
    capacity = report.capacity
    rows.append(
        {
            "name": "capacity",
            "computed": capacity,
            "published": EXAMPLE_CAPACITY,
            "delta": math.inf if capacity is None else abs(capacity - EXAMPLE_CAPACITY),
        }
    )
    return rows, capacity


def cmd_example(tol: Tolerances, fmt: str, output: str | None) -> int:
    rows, capacity = example_rows(tol)
    ok = all(r["delta"] <= EXAMPLE_MAX_DELTA for r in rows)
    if fmt == "json":
        write_json(
            output,
            {
                "r0": EXAMPLE_R0,
                "p": EXAMPLE_P,
                "rows": [{**r, "delta": None if math.isinf(r["delta"]) else r["delta"]} for r in rows],
                "capacity": capacity,
                "ok": ok,
            },
        )
    else:
        write_text(
            output,
            render_text("example.txt.j2", r0=EXAMPLE_R0, p=EXAMPLE_P, rows=rows, ok=ok, max_delta=EXAMPLE_MAX_DELTA),
        )
    if not ok:
        logger.error("worked example deviates from the published values by more than %g", EXAMPLE_MAX_DELTA)
        return EXIT_EXAMPLE_DELTA
    return EXIT_OK


# -----------------------------
# curves
# -----------------------------
def curve_rows(sym: SymmetricParams, steps: int) -> List[Tuple[float, float, float, float, float]]:
    """f1, f2, f3 and their min on `steps` points of [0, 1)."""
    if steps < 2:
        raise ArgumentError("curves needs at least two steps")
    rho = np.linspace(0.0, 1.0, steps + 1)[:-1]
    a, b, c = f1(sym, rho), f2(sym, rho), f3(sym, rho)
    obj = np.minimum(np.minimum(a, b), c)
    return [tuple(float(v) for v in row) for row in zip(rho, a, b, c, obj)]


def cmd_curves(sym: SymmetricParams, steps: int, fmt: str, output: str | None) -> int:
    rows = curve_rows(sym, steps)
    if fmt == "json":
        write_json(output, [dict(zip(CURVES_HEADER, row)) for row in rows])
    else:
        write_csv(output, CURVES_HEADER, numeric_csv_rows(rows))
    return EXIT_OK


# -----------------------------
# Argument parsing
# -----------------------------
def _common(p: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    p.add_argument("--tol", type=float, default=None, help="numerical tolerance (overrides DIAMOND_TOL)")
    p.add_argument("--format", choices=list(formats), default=formats[0])
    p.add_argument("--output", default=None, metavar="PATH", help="write here instead of stdout")


def _channel_flags(p: argparse.ArgumentParser) -> None:
    for name in ("--r1", "--r2", "--p1", "--p2"):
        p.add_argument(name, type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamond",
        description="Capacity bounds for the Gaussian multiple access diamond channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="lower, upper and cut-set bounds for one channel")
    _channel_flags(p)
    p.add_argument("--check", action="store_true", help="compare against a 10^6-point grid search")
    _common(p, ("text", "json"))
    p.set_defaults(func=_run_bounds)

    p = sub.add_parser("sweep", help="symmetric bounds over a range of link rates (CSV)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r0-min", type=float, default=None)
    p.add_argument("--r0-max", type=float, default=None)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--workers", type=int, default=None)
    _common(p, ("csv", "json"))
    p.set_defaults(func=_run_sweep)

    p = sub.add_parser("capacity-check", help="meeting conditions for a symmetric channel")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    _common(p, ("text", "json"))
    p.set_defaults(func=_run_capacity_check)

    p = sub.add_parser("simulate", help="Monte-Carlo run of the typical-pair scheme")
    p.add_argument("--n", type=int, required=True)
    _channel_flags(p)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=[d.value for d in Decoder], default=Decoder.MINIMUM_DISTANCE.value)
    p.add_argument("--workers", type=int, default=None)
    _common(p, ("text", "json"))
    p.set_defaults(func=_run_simulate)

    p = sub.add_parser("example", help="reproduce the P=3, R0=1.2 worked example")
    _common(p, ("text", "json"))
    p.set_defaults(func=_run_example)

    p = sub.add_parser("curves", help="f1, f2, f3 over the correlation range (CSV)")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    _common(p, ("csv", "json"))
    p.set_defaults(func=_run_curves)
    return parser


def _workers(value: int | None) -> int:
    if value is not None and value < 1:
        raise ArgumentError("--workers must be at least 1")
    return value or get_config().workers


def _run_bounds(args: argparse.Namespace) -> int:
    params = ChannelParams(r1=args.r1, r2=args.r2, p1=args.p1, p2=args.p2)
    return cmd_bounds(params, tolerances(args.tol), args.format, args.output, check=args.check)


def _run_sweep(args: argparse.Namespace) -> int:
    if args.p < 0 or not math.isfinite(args.p):
        raise DomainError(f"power must be finite and nonnegative, got {args.p}")
    lo, hi = default_sweep_range(args.p)
    spec = SweepSpec(
        p=args.p,
        r0_min=lo if args.r0_min is None else args.r0_min,
        r0_max=hi if args.r0_max is None else args.r0_max,
        steps=args.steps,
        tol=tolerances(args.tol),
    )
    return cmd_sweep(spec, args.format, args.output, _workers(args.workers))


def _run_capacity_check(args: argparse.Namespace) -> int:
    sym = SymmetricParams(r0=args.r0, p=args.p)
    return cmd_capacity_check(sym, tolerances(args.tol), args.format, args.output)


def _run_simulate(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise ArgumentError("--trials must be positive")
    config = SimConfig(
        n=args.n,
        r1=args.r1,
        r2=args.r2,
        p1=args.p1,
        p2=args.p2,
        rho=args.rho,
        delta=args.delta,
        trials=args.trials,
        seed=args.seed,
        decoder=Decoder(args.decoder),
    )
    return cmd_simulate(config, args.format, args.output, _workers(args.workers))


def _run_example(args: argparse.Namespace) -> int:
    return cmd_example(tolerances(args.tol), args.format, args.output)


def _run_curves(args: argparse.Namespace) -> int:
    sym = SymmetricParams(r0=args.r0, p=args.p)
    return cmd_curves(sym, args.steps, args.format, args.output)


_EXIT_CODES: List[Tuple[type, int]] = [
    (ArgumentError, EXIT_USAGE),
    (DomainError, EXIT_DOMAIN),
    (ValidationError, EXIT_DOMAIN),
    (StructureError, EXIT_STRUCTURE),
    (SimulationError, EXIT_SIMULATION),
    (OSError, EXIT_IO),
]


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, get_config().log_level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except tuple(exc for exc, _ in _EXIT_CODES) as e:
        logger.error("%s", e)
        return next(c for exc, c in _EXIT_CODES if isinstance(e, exc))


if __name__ == "__main__":
    sys.exit(main())
