from __future__ import annotations

import math
from enum import Enum
from typing import Annotated, List, Tuple

import numpy as np
from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    model_validator,
)

from channel.errors import BudgetError

# Pair enumeration is capped at 2^26 candidate pairs.
PAIR_BUDGET_LOG2 = 26


def _check_rate(v: float) -> float:
    if math.isnan(v) or v == math.inf:
        raise ValueError("rate must be finite or -inf")
    return v


# Correlation coefficient in [0, 1].
Rho = Annotated[float, Field(ge=0.0, le=1.0, allow_inf_nan=False)]
# Bits per channel use; -inf marks a degenerate objective term.
Rate = Annotated[float, AfterValidator(_check_rate)]
NonNegativeReal = Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
PositiveReal = Annotated[float, Field(gt=0.0, allow_inf_nan=False)]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# -----------------
# Channel parameters
# -----------------
class ChannelParams(_Frozen):
    r1: NonNegativeReal
    r2: NonNegativeReal
    p1: NonNegativeReal
    p2: NonNegativeReal


class SymmetricParams(_Frozen):
    r0: NonNegativeReal
    p: NonNegativeReal

    def to_channel(self) -> ChannelParams:
        return ChannelParams(r1=self.r0, r2=self.r0, p1=self.p, p2=self.p)


class Tolerances(_Frozen):
    tol_rho: float = Field(1e-9, gt=0.0, lt=1e-2)
    tol_val: float = Field(1e-9, gt=0.0, lt=1e-2)

    @property
    def active(self) -> float:
        """Threshold under which a constraint counts as binding."""
        return 10.0 * self.tol_val


class Interval(_Frozen):
    lo: float
    hi: float

    @model_validator(mode="after")
    def _ordered(self) -> "Interval":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo


# -----------------
# Bounds
# -----------------
class Constraint(str, Enum):
    B1 = "B1"  # r1 + rate of relay 2 given relay 1
    B2 = "B2"  # r2 + rate of relay 1 given relay 2
    B3 = "B3"  # sum-power MAC term
    B4 = "B4"  # r1 + r2 - correlation penalty
    B4_PRIME = "B4'"  # r1 + r2


class Branch(str, Enum):
    T1_SEGMENT = "T1-segment"
    T2_SEGMENT = "T2-segment"
    FULL_RANGE = "full-range"
    LOWER_RANGE = "lower-range"
    COOPERATION = "cooperation"


class BoundResult(_Frozen):
    value: Rate
    argmax_rho: Rho
    binding: Tuple[Constraint, ...] = Field(min_length=1)
    branch: Branch


class MeetingReport(_Frozen):
    rho_star: Rho | None
    rho_circ: Rho
    t1: Rate | None
    t2: Rate
    lower: Rate
    upper: Rate
    sufficient: bool
    meets: bool


# -----------------
# Symmetric analysis
# -----------------
class Regime(str, Enum):
    SOURCE_LIMITED = "SourceLimited"
    MAC_LIMITED = "MacLimited"
    NONTRIVIAL = "Nontrivial"


class ConditionReport(_Frozen):
    r0: float
    p: float
    regime: Regime
    rho_star: Rho | None = None
    rho_circ: Rho
    rho_bar1: Rho | None = None
    rho_bar2: Rho | None = None
    f1_f3_crossing: Rho | None = None
    f1_at_rho_star: Rate | None = None
    f3_at_rho_bar2: Rate | None = None
    cond1: bool | None = None
    cond2: bool | None = None
    cond3: bool | None = None
    capacity: Rate | None = None
    bracket: Tuple[float, float]
    bounds_agree: bool


# -----------------
# Simulator
# -----------------
class Decoder(str, Enum):
    MINIMUM_DISTANCE = "MinimumDistance"
    JOINT_TYPICALITY = "JointTypicality"


def codebook_size(n: int, rate: float) -> int:
    """Number of codewords round(2^(n*rate)), at least one."""
    exponent = n * rate
    if exponent > 62:
        raise BudgetError(f"codebook of 2^{exponent:.1f} words is beyond any budget")
    return max(1, int(round(2.0 ** exponent)))


class SimConfig(_Frozen):
    n: PositiveInt
    r1: NonNegativeReal
    r2: NonNegativeReal
    p1: PositiveReal
    p2: PositiveReal
    rho: Rho
    delta: PositiveReal
    trials: NonNegativeInt
    seed: int = Field(0, ge=0, lt=2**64)
    decoder: Decoder = Decoder.MINIMUM_DISTANCE

    @model_validator(mode="after")
    def _budget_and_admissibility(self) -> "SimConfig":
        from channel.bounds import rho_circ

        m1 = codebook_size(self.n, self.r1)
        m2 = codebook_size(self.n, self.r2)
        if m1 * m2 > 2**PAIR_BUDGET_LOG2:
            raise BudgetError(
                f"{m1} x {m2} codeword pairs exceed the 2^{PAIR_BUDGET_LOG2} enumeration budget; "
                "lower --n or the per-relay rates"
            )
        limit = rho_circ(self.r1, self.r2)
        if self.rho > limit + 1e-12:
            raise ValueError(
                f"rho={self.rho} exceeds the admissible correlation {limit:.6f} for r1={self.r1}, r2={self.r2}"
            )
        return self

    @property
    def m1(self) -> int:
        return codebook_size(self.n, self.r1)

    @property
    def m2(self) -> int:
        return codebook_size(self.n, self.r2)


class Codebooks(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    book1: np.ndarray
    book2: np.ndarray
    p1: float
    p2: float

    @property
    def n(self) -> int:
        return int(self.book1.shape[1])


class PairIndex(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    i: np.ndarray
    j: np.ndarray
    correlation: np.ndarray
    n: PositiveInt

    @property
    def count(self) -> int:
        return int(self.i.shape[0])

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.i.tolist(), self.j.tolist()))

    @property
    def effective_rate(self) -> float:
        return math.log2(self.count) / self.n if self.count else -math.inf

    @property
    def mean_pair_correlation(self) -> float:
        return float(np.mean(self.correlation)) if self.count else math.nan


class SimResult(_Frozen):
    n: int
    decoder: Decoder
    trials: int
    errors: int
    error_rate: float = Field(ge=0.0, le=1.0)
    wilson_95_ci: Tuple[float, float]
    pair_count: int
    effective_rate: Rate
    mean_pair_correlation: float


# -----------------
# CLI sweeps
# -----------------
class SweepSpec(_Frozen):
    p: NonNegativeReal
    r0_min: NonNegativeReal
    r0_max: NonNegativeReal
    steps: int = Field(ge=2)
    tol: Tolerances = Field(default_factory=Tolerances)

    @model_validator(mode="after")
    def _range(self) -> "SweepSpec":
        if not self.r0_min < self.r0_max:
            raise ValueError(f"r0_min={self.r0_min} must be below r0_max={self.r0_max}")
        return self


class SweepRow(_Frozen):
    r0: float
    p: float
    lower: Rate
    upper: Rate
    cutset: Rate
    capacity_known: bool
    capacity: Rate | None = None
    rho_lower: Rho
    rho_upper: Rho
