"""Central configuration for numerical tolerances and execution settings.

Reads from environment with safe defaults and exposes helpers that other
modules can import without duplicating env parsing logic.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
try:
    # Load .env early so os.getenv sees configured values
    from dotenv import load_dotenv  # type: ignore
    load_dotenv()  # no-op if .env not present
except Exception:
    pass

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_GRID_POINTS = 1024


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning("ignoring malformed %s=%r, using %s", name, raw, default)
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("ignoring malformed %s=%r, using %s", name, raw, default)
        return default


@dataclass(frozen=True)
class DiamondConfig:
    tol: float
    workers: int
    log_level: str
    grid_points: int

    @staticmethod
    def from_env() -> "DiamondConfig":
        tol = _env_float("DIAMOND_TOL", DEFAULT_TOL)
        if not (0.0 < tol < 1e-2):
            logger.warning("DIAMOND_TOL=%s outside (0, 1e-2), using %s", tol, DEFAULT_TOL)
            tol = DEFAULT_TOL
        return DiamondConfig(
            tol=tol,
            workers=max(1, _env_int("DIAMOND_WORKERS", 1)),
            log_level=os.getenv("DIAMOND_LOG_LEVEL", "WARNING").upper(),
            grid_points=max(16, _env_int("DIAMOND_GRID_POINTS", DEFAULT_GRID_POINTS)),
        )


def get_config() -> DiamondConfig:
    """Return a cached configuration object."""
    global _CFG
    try:
        return _CFG  # type: ignore[name-defined]
    except NameError:
        _cfg = DiamondConfig.from_env()
        globals()["_CFG"] = _cfg
        return _cfg


def reset_config() -> None:
    """Drop the cached config so the next `get_config` re-reads the environment."""
    globals().pop("_CFG", None)


def default_tolerances():
    """Tolerances built from the configured DIAMOND_TOL."""
    from channel.schemas import Tolerances

    tol = get_config().tol
    return Tolerances(tol_rho=tol, tol_val=tol)


__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_GRID_POINTS",
    "DiamondConfig",
    "get_config",
    "reset_config",
    "default_tolerances",
]
