"""Shared Gaussian-rate helpers.

All rates are in bits per channel use (base-2 logarithms) and all powers are
SNRs relative to the unit-variance receiver noise. Every helper accepts a
float or a numpy array and returns the same shape, so the bound objectives
can be evaluated on a whole correlation grid at once.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from channel.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _as_out(x: np.ndarray) -> ArrayLike:
    return float(x) if np.ndim(x) == 0 else x


def check_rho(rho: ArrayLike) -> np.ndarray:
    """Return `rho` as an array after checking it lies in [0, 1]."""
    arr = np.asarray(rho, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"correlation must lie in [0, 1], got {rho!r}")
    return arr


def gauss_rate(snr: ArrayLike) -> ArrayLike:
    """(1/2) log2(1 + snr)."""
    arr = np.asarray(snr, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError(f"snr must be finite and nonnegative, got {snr!r}")
    return _as_out(0.5 * np.log2(1.0 + arr))


def correlation_penalty(rho: ArrayLike) -> ArrayLike:
    """(1/2) log2(1 / (1 - rho^2)), the rate lost to correlating the relays.

    Diverges at rho = 1, which is rejected here; objective terms that
    subtract the penalty go through `penalized_sum`, which maps that
    endpoint to -inf.
    """
    arr = check_rho(rho)
    if np.any(arr >= 1.0):
        raise DomainError("correlation penalty diverges at rho = 1")
    return _as_out(-0.5 * np.log2(1.0 - arr * arr))


def penalized_sum(total: ArrayLike, rho: ArrayLike) -> ArrayLike:
    """`total - correlation_penalty(rho)`, equal to -inf where rho == 1."""
    arr = check_rho(rho)
    one_minus = 1.0 - arr * arr
    with np.errstate(divide="ignore"):
        penalty = -0.5 * np.log2(one_minus)
    out = np.where(one_minus > 0.0, np.asarray(total, dtype=float) - penalty, -math.inf)
    return _as_out(out)


__all__ = [
    "ArrayLike",
    "check_rho",
    "gauss_rate",
    "correlation_penalty",
    "penalized_sum",
]
