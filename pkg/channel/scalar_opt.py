"""One-dimensional solvers for min-of-monotone objectives.

Every bound in this package has the shape

    max over rho in [lo, hi] of  min{ g(rho), d_1(rho), ..., d_k(rho) }

with `g` nondecreasing and every `d_i` nonincreasing. Such an objective is
quasi-concave: its maximum sits at `lo`, at `hi`, or where `g` meets
`min(d_i)`, and `g - min(d_i)` changes sign at most once. A coarse grid
checks the monotonicity promise and brackets the sign change, then
bisection closes in on it.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np

from channel.config import get_config
from channel.errors import ArgumentError, NoCrossingError, StructureError
from channel.schemas import Interval, Tolerances

logger = logging.getLogger(__name__)

Term = Callable[[float], float]

# Cap on the halvings taken past the tol_rho bracket.
MAX_REFINE_HALVINGS = 64


def evaluate_on_grid(term: Term, grid: np.ndarray) -> np.ndarray:
    """Evaluate `term` on every grid point, vectorised when the term allows it."""
    try:
        out = np.asarray(term(grid), dtype=float)
        if out.shape == grid.shape:
            return out
    except Exception:
        pass
    return np.array([term(float(x)) for x in grid], dtype=float)


def _check_monotone(values: np.ndarray, *, increasing: bool, slack: float, label: str) -> None:
    if np.any(np.isnan(values)):
        raise StructureError(f"{label} evaluates to NaN on the bracketing grid")
    with np.errstate(invalid="ignore"):
        if increasing:
            bad = values[1:] < values[:-1] - slack
        else:
            bad = values[1:] > values[:-1] + slack
    if np.any(bad):
        k = int(np.argmax(bad))
        raise StructureError(
            f"{label} is not {'nondecreasing' if increasing else 'nonincreasing'} "
            f"near grid index {k}"
        )


def bisection_budget(width: float, tol_rho: float) -> int:
    """Upper bound on bisection steps needed to shrink `width` below `tol_rho`."""
    if width <= tol_rho:
        return 0
    return int(math.ceil(math.log2(width / tol_rho))) + 2


def bisect_sign_change(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    tol_rho: float,
) -> Tuple[float, float, int]:
    """Shrink [lo, hi] around the point where `predicate` flips to True.

    `predicate(lo)` is assumed False and `predicate(hi)` True. Returns the
    final bracket and the number of halvings used.
    """
    budget = bisection_budget(hi - lo, tol_rho)
    steps = 0
    while hi - lo > tol_rho and steps < budget:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        steps += 1
    return lo, hi, steps


def maximize_min(
    increasing_term: Term,
    decreasing_terms: Sequence[Term],
    interval: Interval,
    tol: Tolerances,
    *,
    grid_points: int | None = None,
) -> Tuple[float, float]:
    """Maximise min(increasing_term, *decreasing_terms) over `interval`.

    Returns (rho, value) where value is the objective evaluated at rho. The
    crossing search takes at most `bisection_budget` halvings of the grid cell
    plus `MAX_REFINE_HALVINGS` more while the value spread exceeds tol_val/2.
    """
    terms: List[Term] = list(decreasing_terms)
    if not terms:
        raise ArgumentError("maximize_min needs at least one decreasing term")

    def d_min(x: float) -> float:
        return min(t(x) for t in terms)

    def objective(x: float) -> float:
        return min(increasing_term(x), d_min(x))

    lo, hi = interval.lo, interval.hi
    if interval.width == 0.0:
        return lo, objective(lo)

    points = grid_points or get_config().grid_points
    grid = np.linspace(lo, hi, points)
    inc_vals = evaluate_on_grid(increasing_term, grid)
    _check_monotone(inc_vals, increasing=True, slack=tol.tol_val, label="increasing term")
    dec_vals = []
    for k, t in enumerate(terms):
        vals = evaluate_on_grid(t, grid)
        _check_monotone(vals, increasing=False, slack=tol.tol_val, label=f"decreasing term {k}")
        dec_vals.append(vals)
    d_vals = np.min(np.vstack(dec_vals), axis=0)

    # inc >= D  <=>  h(rho) >= 0; comparing avoids -inf - -inf.
    crossed = inc_vals >= d_vals
    if crossed[0]:
        return lo, objective(lo)
    if not crossed[-1]:
        return hi, objective(hi)

    k = int(np.argmax(crossed))

    def above(x: float) -> bool:
        return increasing_term(x) >= d_min(x)

    a, b, steps = bisect_sign_change(above, float(grid[k - 1]), float(grid[k]), tol.tol_rho)

    # The maximum lies between the two bracket values; keep halving until
    # their spread is below half of tol_val or the bracket hits float resolution.
    def spread(lo_: float, hi_: float) -> float:
        return min(increasing_term(hi_) - increasing_term(lo_), d_min(lo_) - d_min(hi_))

    refine = 0
    while refine < MAX_REFINE_HALVINGS and spread(a, b) > 0.5 * tol.tol_val:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if above(mid):
            b = mid
        else:
            a = mid
        steps += 1
        refine += 1
    logger.debug("maximize_min bracket [%.12g, %.12g] after %d halvings", a, b, steps)
    va, vb = objective(a), objective(b)
    return (a, va) if va >= vb else (b, vb)


def find_crossing(f: Term, g: Term, interval: Interval, tol: Tolerances) -> float:
    """Locate the single point in `interval` where f and g swap order."""
    lo, hi = interval.lo, interval.hi
    f_lo, g_lo, f_hi, g_hi = f(lo), g(lo), f(hi), g(hi)
    if math.isfinite(f_lo - g_lo) and abs(f_lo - g_lo) <= tol.tol_val:
        return lo
    if math.isfinite(f_hi - g_hi) and abs(f_hi - g_hi) <= tol.tol_val:
        return hi
    end_state = f_hi >= g_hi
    if (f_lo >= g_lo) == end_state:
        raise NoCrossingError(f"f - g keeps its sign on [{lo}, {hi}]")

    def flipped(x: float) -> bool:
        return (f(x) >= g(x)) == end_state

    a, b, steps = bisect_sign_change(flipped, lo, hi, tol.tol_rho)

    def residual(x: float) -> float:
        r = abs(f(x) - g(x))
        return r if math.isfinite(r) else math.inf

    # Keep halving past tol_rho until the residual meets tol_val or the
    # bracket reaches float resolution.
    refine = 0
    while refine < MAX_REFINE_HALVINGS and min(residual(a), residual(b)) > tol.tol_val:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if flipped(mid):
            b = mid
        else:
            a = mid
        steps += 1
        refine += 1
    logger.debug("find_crossing converged after %d halvings", steps)
    return a if residual(a) <= residual(b) else b


__all__ = [
    "Term",
    "MAX_REFINE_HALVINGS",
    "evaluate_on_grid",
    "bisection_budget",
    "bisect_sign_change",
    "maximize_min",
    "find_crossing",
]
