"""Exception hierarchy shared by the library, the simulator and the CLI.

Every error raised on purpose derives from `DiamondError`, and also from the
closest builtin so callers that only know `ValueError` or `RuntimeError`
still catch it.
"""

from __future__ import annotations


class DiamondError(Exception):
    """Base class for all errors raised by this package."""


# -----------------
# Domain (bad numbers in)
# -----------------
class DomainError(DiamondError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateChannelError(DomainError):
    """A relay has zero power, so the correlation split point is undefined."""


class RegimeError(DomainError):
    """Operation only defined for the nontrivial symmetric regime."""


class AdmissibilityError(DomainError):
    """Correlation larger than the link rates can support."""


# -----------------
# Numerical structure (caller broke a promise)
# -----------------
class StructureError(DiamondError, ArithmeticError):
    """A term declared monotone is not monotone on the bracketing grid."""


class NoCrossingError(StructureError):
    """The two functions do not change order on the interval."""


# -----------------
# Simulation
# -----------------
class SimulationError(DiamondError, RuntimeError):
    """Base class for Monte-Carlo failures."""


class PowerConstraintError(SimulationError):
    """A codeword could not be drawn under its power constraint."""


class EmptyPairSetError(SimulationError):
    """No codeword pair passed the typicality test."""


class BudgetError(SimulationError):
    """The pair enumeration would exceed the memory budget."""


# -----------------
# Plumbing
# -----------------
class ArgumentError(DiamondError, ValueError):
    """Call arguments are inconsistent (empty term list, zero trials, ...)."""


class OutputError(DiamondError, OSError):
    """Output destination could not be written."""


__all__ = [
    "DiamondError",
    "DomainError",
    "DegenerateChannelError",
    "RegimeError",
    "AdmissibilityError",
    "StructureError",
    "NoCrossingError",
    "SimulationError",
    "PowerConstraintError",
    "EmptyPairSetError",
    "BudgetError",
    "ArgumentError",
    "OutputError",
]
