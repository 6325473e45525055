"""Capacity bounds for the general (asymmetric) channel.

Every bound is a max over the relay correlation rho of a min of four terms:

    B1 = r1 + (1/2) log2(1 + (1 - rho^2) p2)
    B2 = r2 + (1/2) log2(1 + (1 - rho^2) p1)
    B3 = (1/2) log2(1 + p1 + p2 + 2 rho sqrt(p1 p2))
    B4 = r1 + r2 - (1/2) log2(1 / (1 - rho^2))     (B4' = r1 + r2)

B3 is the only nondecreasing term, so each bound is a `maximize_min` call.
The tightened upper bound uses B4 below rho* and B4' above it; the lower
bound uses B4 up to the largest correlation the links can carry, rho°; the
cut-set bound uses B4' everywhere.
"""

from __future__ import annotations

import logging
import math
from functools import partial
from typing import Callable, Dict, Tuple

import numpy as np

from channel.core import ArrayLike, check_rho, gauss_rate, penalized_sum
from channel.errors import DegenerateChannelError, DomainError
from channel.scalar_opt import evaluate_on_grid, maximize_min
from channel.schemas import (
    BoundResult,
    Branch,
    ChannelParams,
    Constraint,
    Interval,
    MeetingReport,
    Tolerances,
)

logger = logging.getLogger(__name__)

Objective = Callable[[ArrayLike], ArrayLike]


# -----------------
# Objective terms
# -----------------
def term_b1(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    return params.r1 + gauss_rate(np.clip(1.0 - r * r, 0.0, 1.0) * params.p2)


def term_b2(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    return params.r2 + gauss_rate(np.clip(1.0 - r * r, 0.0, 1.0) * params.p1)


def term_b3(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    return gauss_rate(params.p1 + params.p2 + 2.0 * r * math.sqrt(params.p1) * math.sqrt(params.p2))


def term_b4(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    return penalized_sum(params.r1 + params.r2, rho)


def term_b4_prime(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    out = np.full(np.shape(r), params.r1 + params.r2, dtype=float)
    return float(out) if out.ndim == 0 else out


def _terms(params: ChannelParams, fourth: Constraint) -> Dict[Constraint, Objective]:
    fourth_fn = term_b4 if fourth is Constraint.B4 else term_b4_prime
    return {
        Constraint.B1: partial(term_b1, params),
        Constraint.B2: partial(term_b2, params),
        Constraint.B3: partial(term_b3, params),
        fourth: partial(fourth_fn, params),
    }


def _min_of(terms: Dict[Constraint, Objective], rho: ArrayLike) -> ArrayLike:
    vals = [np.asarray(t(rho), dtype=float) for t in terms.values()]
    out = np.minimum.reduce(vals)
    return float(out) if out.ndim == 0 else out


def objective_t1(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    """Four-term min with the correlation-penalised fourth term (B4)."""
    return _min_of(_terms(params, Constraint.B4), rho)


def objective_t2(params: ChannelParams, rho: ArrayLike) -> ArrayLike:
    """Four-term min with the plain link-sum fourth term (B4')."""
    return _min_of(_terms(params, Constraint.B4_PRIME), rho)


# -----------------
# Special correlations
# -----------------
def degenerate_powers(p1: float, p2: float) -> bool:
    """True when a relay is silent, so correlation between the relays is vacuous."""
    return math.sqrt(p1) * math.sqrt(p2) == 0.0


def rho_star(p1: float, p2: float) -> float:
    """Correlation where the auxiliary noise variance vanishes.

    Root of sqrt(p1 p2) (1/rho - rho) = 1, written as 2q / (1 + sqrt(1 + 4 q^2))
    with q = sqrt(p1 p2) to avoid cancellation at large powers.
    """
    if not (math.isfinite(p1) and math.isfinite(p2)) or p1 < 0 or p2 < 0:
        raise DomainError(f"powers must be finite and nonnegative, got p1={p1}, p2={p2}")
    if degenerate_powers(p1, p2):
        raise DegenerateChannelError("rho* is undefined when a relay has zero power")
    q = math.sqrt(p1) * math.sqrt(p2)
    return 2.0 * q / (1.0 + math.sqrt(1.0 + 4.0 * q * q))


def noise_variance_n(p1: float, p2: float, rho: float) -> float:
    """sqrt(p1 p2)(1/rho - rho) - 1, nonnegative for 0 < rho <= rho*."""
    if min(p1, p2) < 0.0 or degenerate_powers(p1, p2):
        raise DegenerateChannelError("noise variance needs p1 * p2 > 0")
    check_rho(rho)
    if rho == 0.0:
        raise DomainError("noise variance is undefined at rho = 0")
    value = math.sqrt(p1) * math.sqrt(p2) * (1.0 / rho - rho) - 1.0
    if value < -1e-9:
        raise DomainError(f"rho={rho} lies beyond rho*; noise variance would be {value:.6g}")
    return max(value, 0.0)


def rho_circ(r1: float, r2: float) -> float:
    """Largest correlation the typical-pair scheme can realise given the weaker link."""
    if min(r1, r2) < 0 or not (math.isfinite(r1) and math.isfinite(r2)):
        raise DomainError(f"rates must be finite and nonnegative, got r1={r1}, r2={r2}")
    return math.sqrt(1.0 - 2.0 ** (-2.0 * min(r1, r2)))


# -----------------
# Bounds
# -----------------
def _solve(
    terms: Dict[Constraint, Objective],
    interval: Interval,
    tol: Tolerances,
    branch: Branch,
) -> BoundResult:
    decreasing = [t for c, t in terms.items() if c is not Constraint.B3]
    rho, value = maximize_min(terms[Constraint.B3], decreasing, interval, tol)
    binding = []
    for c, t in terms.items():
        v = t(rho)
        if v == value or v - value <= tol.active:
            binding.append(c)
    logger.debug("%s: value=%.12g rho=%.12g binding=%s", branch.value, value, rho, binding)
    return BoundResult(value=value, argmax_rho=rho, binding=tuple(binding), branch=branch)


def _t1_t2(params: ChannelParams, tol: Tolerances) -> Tuple[BoundResult | None, BoundResult]:
    if degenerate_powers(params.p1, params.p2):
        # Correlation is vacuous with a silent relay; T2 over the full range.
        full = _solve(_terms(params, Constraint.B4_PRIME), Interval(lo=0.0, hi=1.0), tol, Branch.FULL_RANGE)
        return None, full
    rs = rho_star(params.p1, params.p2)
    t1 = _solve(_terms(params, Constraint.B4), Interval(lo=0.0, hi=rs), tol, Branch.T1_SEGMENT)
    t2 = _solve(_terms(params, Constraint.B4_PRIME), Interval(lo=rs, hi=1.0), tol, Branch.T2_SEGMENT)
    return t1, t2


def upper_bound(params: ChannelParams, tol: Tolerances) -> BoundResult:
    """Tightened upper bound max(T1, T2)."""
    t1, t2 = _t1_t2(params, tol)
    if t1 is None or t2.value > t1.value:
        return t2
    return t1


def cooperative_rate(params: ChannelParams) -> float:
    """Rate when both relays receive the whole message and beamform coherently.

    Equals the B4' objective at rho = 1: min{r1, r2, (1/2) log2(1 + (sqrt p1 + sqrt p2)^2)}.
    """
    return objective_t2(params, 1.0)


def lower_bound(params: ChannelParams, tol: Tolerances) -> BoundResult:
    """Achievable rate: correlated typical-pair coding up to rho°, or full cooperation."""
    rc = rho_circ(params.r1, params.r2)
    correlated = _solve(_terms(params, Constraint.B4), Interval(lo=0.0, hi=rc), tol, Branch.LOWER_RANGE)
    coop = cooperative_rate(params)
    if coop <= correlated.value + tol.tol_val:
        return correlated
    terms = _terms(params, Constraint.B4_PRIME)
    binding = tuple(c for c, t in terms.items() if t(1.0) - coop <= tol.active)
    return BoundResult(value=coop, argmax_rho=1.0, binding=binding, branch=Branch.COOPERATION)


def cut_set_bound(params: ChannelParams, tol: Tolerances) -> BoundResult:
    return _solve(_terms(params, Constraint.B4_PRIME), Interval(lo=0.0, hi=1.0), tol, Branch.FULL_RANGE)


def meeting_check(params: ChannelParams, tol: Tolerances) -> MeetingReport:
    """Check the general sufficient condition rho° >= rho* and T1 >= T2."""
    t1, t2 = _t1_t2(params, tol)
    rc = rho_circ(params.r1, params.r2)
    rs = None if t1 is None else rho_star(params.p1, params.p2)
    lower = lower_bound(params, tol).value
    upper = t2.value if t1 is None else max(t1.value, t2.value)
    sufficient = (
        t1 is not None
        and rs is not None
        and rc >= rs - tol.tol_rho
        and t1.value >= t2.value - tol.tol_val
    )
    return MeetingReport(
        rho_star=rs,
        rho_circ=rc,
        t1=None if t1 is None else t1.value,
        t2=t2.value,
        lower=lower,
        upper=upper,
        sufficient=sufficient,
        meets=abs(upper - lower) <= tol.active,
    )


def grid_bound(objective: Objective, interval: Interval, points: int = 1_000_001) -> Tuple[float, float]:
    """Brute-force max of `objective` on an evenly spaced grid (reference oracle)."""
    grid = np.linspace(interval.lo, interval.hi, points)
    vals = evaluate_on_grid(objective, grid)
    k = int(np.argmax(vals))
    return float(grid[k]), float(vals[k])


__all__ = [
    "term_b1",
    "term_b2",
    "term_b3",
    "term_b4",
    "term_b4_prime",
    "objective_t1",
    "objective_t2",
    "degenerate_powers",
    "rho_star",
    "noise_variance_n",
    "rho_circ",
    "upper_bound",
    "cooperative_rate",
    "lower_bound",
    "cut_set_bound",
    "meeting_check",
    "grid_bound",
]
