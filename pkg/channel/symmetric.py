"""Symmetric channel analysis (r1 = r2 = r0, p1 = p2 = p).

In the symmetric case the four bound terms collapse to three functions of
the correlation:

    f1(rho) = r0 + (1/2) log2(1 + (1 - rho^2) p)     decreasing
    f2(rho) = (1/2) log2(1 + 2 (1 + rho) p)           increasing
    f3(rho) = 2 r0 - (1/2) log2(1 / (1 - rho^2))      decreasing

The upper and lower bounds meet exactly when the crossings of f2 with f1
and with f3 sit in the right order relative to rho* and rho°; then the
capacity is f3 at the f3/f2 crossing.
"""

from __future__ import annotations

import logging
import math
from functools import partial
from typing import Callable, Tuple

import numpy as np

from channel.bounds import degenerate_powers, lower_bound, rho_circ, rho_star, upper_bound
from channel.core import ArrayLike, check_rho, gauss_rate, penalized_sum
from channel.errors import DomainError, RegimeError
from channel.scalar_opt import find_crossing, maximize_min
from channel.schemas import (
    BoundResult,
    Branch,
    ConditionReport,
    Constraint,
    Interval,
    Regime,
    SymmetricParams,
    Tolerances,
)

logger = logging.getLogger(__name__)


def f1(sym: SymmetricParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    return sym.r0 + gauss_rate(np.clip(1.0 - r * r, 0.0, 1.0) * sym.p)


def f2(sym: SymmetricParams, rho: ArrayLike) -> ArrayLike:
    r = check_rho(rho)
    return gauss_rate(2.0 * (1.0 + r) * sym.p)


def f3(sym: SymmetricParams, rho: ArrayLike) -> ArrayLike:
    return penalized_sum(2.0 * sym.r0, rho)


# -----------------
# Regimes
# -----------------
def classify(sym: SymmetricParams) -> Regime:
    """Which stage, if any, is the bottleneck. Source-limited wins ties."""
    if gauss_rate(2.0 * sym.p) >= 2.0 * sym.r0:
        return Regime.SOURCE_LIMITED
    if sym.r0 >= gauss_rate(4.0 * sym.p):
        return Regime.MAC_LIMITED
    return Regime.NONTRIVIAL


def bottleneck_capacity(sym: SymmetricParams, regime: Regime) -> float:
    if regime is Regime.SOURCE_LIMITED:
        return 2.0 * sym.r0
    if regime is Regime.MAC_LIMITED:
        return gauss_rate(4.0 * sym.p)
    raise RegimeError("the nontrivial regime has no bottleneck closed form")


# -----------------
# Crossings
# -----------------
def _positive_root(a: float, b: float, c: float) -> float:
    # (-b + sqrt(b^2 - 4ac)) / 2a rewritten as -2c / (b + sqrt(...)); c < 0, b >= 0.
    disc = b * b - 4.0 * a * c
    return -2.0 * c / (b + math.sqrt(disc))


def _refined(
    rho: float,
    f: Callable[[float], float],
    g: Callable[[float], float],
    tol: Tolerances,
    label: str,
) -> float:
    residual = abs(f(rho) - g(rho))
    if residual <= tol.tol_val:
        return rho
    logger.debug("%s closed form residual %.3g, refining by bisection", label, residual)
    return find_crossing(f, g, Interval(lo=0.0, hi=1.0), tol)


def _require_nontrivial(sym: SymmetricParams) -> None:
    regime = classify(sym)
    if regime is not Regime.NONTRIVIAL:
        raise RegimeError(f"crossing roots only exist in the nontrivial regime, got {regime.value}")


def rho_bar1(sym: SymmetricParams, tol: Tolerances | None = None) -> float:
    """Positive root of f1(rho) = f2(rho)."""
    _require_nontrivial(sym)
    k = 2.0 ** (2.0 * sym.r0)
    root = _positive_root(k * sym.p, 2.0 * sym.p, 1.0 + 2.0 * sym.p - k * (1.0 + sym.p))
    return _refined(root, partial(f1, sym), partial(f2, sym), tol or Tolerances(), "rho_bar1")


def rho_bar2(sym: SymmetricParams, tol: Tolerances | None = None) -> float:
    """Positive root of f3(rho) = f2(rho)."""
    _require_nontrivial(sym)
    k = 2.0 ** (4.0 * sym.r0)
    root = _positive_root(k, 2.0 * sym.p, 1.0 + 2.0 * sym.p - k)
    return _refined(root, partial(f3, sym), partial(f2, sym), tol or Tolerances(), "rho_bar2")


def f1_f3_crossing(sym: SymmetricParams) -> float | None:
    """Correlation above which f1 >= f3, or None when f1 >= f3 everywhere."""
    d = 2.0 ** (2.0 * sym.r0) - sym.p
    if d <= 1.0:
        return None
    return math.sqrt(1.0 - 1.0 / d)


def matched_power(r0: float) -> float:
    """Power at which rho*, rho_bar1 and rho_bar2 coincide."""
    if r0 < 0 or not math.isfinite(r0):
        raise DomainError(f"rate must be finite and nonnegative, got {r0}")
    k = 2.0 ** (2.0 * r0)
    return k * (k - 1.0) / (2.0 * k - 1.0)


def mutual_inequality_gap(sym: SymmetricParams, rho: float) -> float:
    """2(f1 - r0) - (f2 + f3 - 2 r0); never negative."""
    check_rho(rho)
    if rho >= 1.0:
        return math.inf
    return 2.0 * (f1(sym, rho) - sym.r0) - (f2(sym, rho) + f3(sym, rho) - 2.0 * sym.r0)


# -----------------
# Bounds written with f1, f2, f3
# -----------------
def f3_at_zero(sym: SymmetricParams, rho: ArrayLike) -> ArrayLike:
    """The link-sum term 2 r0, constant in rho."""
    r = check_rho(rho)
    out = np.full(np.shape(r), 2.0 * sym.r0)
    return float(out) if out.ndim == 0 else out


def _sym_result(sym: SymmetricParams, rho: float, value: float, fourth: Constraint, branch: Branch, tol: Tolerances) -> BoundResult:
    f4 = f3(sym, rho) if fourth is Constraint.B4 else 2.0 * sym.r0
    binding = []
    for cs, v in (((Constraint.B1, Constraint.B2), f1(sym, rho)), ((Constraint.B3,), f2(sym, rho)), ((fourth,), f4)):
        if v == value or v - value <= tol.active:
            binding.extend(cs)
    return BoundResult(value=value, argmax_rho=rho, binding=tuple(binding), branch=branch)


def corollary_upper_bound(sym: SymmetricParams, tol: Tolerances) -> BoundResult:
    """max(T1, T2) with T1 over [0, rho*] of min{f1,f2,f3} and T2 over [rho*, 1] of min{f1,f2,f3(0)}."""
    g, d1, flat = partial(f2, sym), partial(f1, sym), partial(f3_at_zero, sym)
    if degenerate_powers(sym.p, sym.p):
        rho, value = maximize_min(g, [d1, flat], Interval(lo=0.0, hi=1.0), tol)
        return _sym_result(sym, rho, value, Constraint.B4_PRIME, Branch.FULL_RANGE, tol)
    rs = rho_star(sym.p, sym.p)
    rho1, t1 = maximize_min(g, [d1, partial(f3, sym)], Interval(lo=0.0, hi=rs), tol)
    rho2, t2 = maximize_min(g, [d1, flat], Interval(lo=rs, hi=1.0), tol)
    if t2 > t1:
        return _sym_result(sym, rho2, t2, Constraint.B4_PRIME, Branch.T2_SEGMENT, tol)
    return _sym_result(sym, rho1, t1, Constraint.B4, Branch.T1_SEGMENT, tol)


def corollary_lower_bound(sym: SymmetricParams, tol: Tolerances) -> BoundResult:
    """max over [0, rho°] of min{f1, f2, f3}, or the cooperative point min{f1(1), f2(1)}."""
    rc = rho_circ(sym.r0, sym.r0)
    rho, value = maximize_min(partial(f2, sym), [partial(f1, sym), partial(f3, sym)], Interval(lo=0.0, hi=rc), tol)
    coop = min(f1(sym, 1.0), f2(sym, 1.0))
    if coop > value + tol.tol_val:
        return _sym_result(sym, 1.0, coop, Constraint.B4_PRIME, Branch.COOPERATION, tol)
    return _sym_result(sym, rho, value, Constraint.B4, Branch.LOWER_RANGE, tol)


# -----------------
# Meeting conditions
# -----------------
def _bracket(sym: SymmetricParams, tol: Tolerances) -> Tuple[float, float]:
    params = sym.to_channel()
    return lower_bound(params, tol).value, upper_bound(params, tol).value


def capacity_check(sym: SymmetricParams, tol: Tolerances) -> ConditionReport:
    """Evaluate the meeting conditions and cross-check them against the bounds."""
    regime = classify(sym)
    rc = rho_circ(sym.r0, sym.r0)
    rs = None if degenerate_powers(sym.p, sym.p) else rho_star(sym.p, sym.p)
    lo, up = _bracket(sym, tol)
    agree = abs(up - lo) <= tol.active
    common = dict(
        r0=sym.r0,
        p=sym.p,
        regime=regime,
        rho_star=rs,
        rho_circ=rc,
        f1_f3_crossing=f1_f3_crossing(sym),
        f1_at_rho_star=None if rs is None else f1(sym, rs),
        bracket=(lo, up),
        bounds_agree=agree,
    )

    if regime is not Regime.NONTRIVIAL:
        capacity = bottleneck_capacity(sym, regime)
        if not (agree and abs(capacity - lo) <= tol.active):
            logger.warning(
                "bottleneck capacity %.9f disagrees with bracket (%.9f, %.9f) at r0=%s p=%s",
                capacity, lo, up, sym.r0, sym.p,
            )
        return ConditionReport(capacity=capacity, **common)

    rb1 = rho_bar1(sym, tol)
    rb2 = rho_bar2(sym, tol)
    assert rs is not None  # nontrivial implies p > 0
    f1_star = f1(sym, rs)
    f3_bar2 = f3(sym, rb2)
    cond1 = rc >= rb2 - tol.tol_rho
    cond2 = rs >= rb1 - tol.tol_rho
    cond3 = f1_star <= f3_bar2 + tol.tol_val
    meets = cond1 and cond2 and cond3
    # A capacity is only reported when the bounds module confirms it.
    if meets != agree:
        logger.warning(
            "meeting conditions (%s, %s, %s) disagree with bound gap %.3g at r0=%s p=%s",
            cond1, cond2, cond3, up - lo, sym.r0, sym.p,
        )
    return ConditionReport(
        rho_bar1=rb1,
        rho_bar2=rb2,
        f3_at_rho_bar2=f3_bar2,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        capacity=f3_bar2 if meets and agree else None,
        **common,
    )


__all__ = [
    "f1",
    "f2",
    "f3",
    "f3_at_zero",
    "classify",
    "bottleneck_capacity",
    "rho_bar1",
    "rho_bar2",
    "f1_f3_crossing",
    "matched_power",
    "mutual_inequality_gap",
    "corollary_upper_bound",
    "corollary_lower_bound",
    "capacity_check",
]
