from __future__ import annotations

import math
from typing import Any, List, Tuple

import numpy as np

from channel.core import gauss_rate


def fmt6(x: Any) -> str:
    """Six-decimal rendering used by every CSV column; None becomes an empty cell."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    x = float(x)
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    # avoid "-0.000000" for values that round to zero
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def linspace_inclusive(lo: float, hi: float, steps: int) -> List[float]:
    """`steps` evenly spaced points from lo to hi, both endpoints exact."""
    pts = np.linspace(lo, hi, steps).tolist()
    pts[0], pts[-1] = float(lo), float(hi)
    return pts


def default_sweep_range(p: float) -> Tuple[float, float]:
    """Nontrivial r0 interval for power p, widened by 10% of its width each side."""
    lo = 0.5 * gauss_rate(2.0 * p)
    hi = gauss_rate(4.0 * p)
    pad = 0.1 * (hi - lo)
    if pad <= 0.0:
        # p = 0: the interval collapses, sweep a small range above zero
        return 0.0, 1.0
    return max(0.0, lo - pad), hi + pad


__all__ = ["fmt6", "linspace_inclusive", "default_sweep_range"]
