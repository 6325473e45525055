import math

import pytest
from pydantic import ValidationError

from channel.errors import BudgetError
from channel.schemas import (
    BoundResult,
    Branch,
    ChannelParams,
    Interval,
    SimConfig,
    SweepSpec,
    SymmetricParams,
    Tolerances,
    codebook_size,
)


def test_symmetric_params_expand_to_channel():
    params = SymmetricParams(r0=1.2, p=3.0).to_channel()
    assert params == ChannelParams(r1=1.2, r2=1.2, p1=3.0, p2=3.0)


@pytest.mark.parametrize("field", ["r1", "r2", "p1", "p2"])
def test_channel_params_reject_negative_and_nan(field):
    base = dict(r1=1.0, r2=1.0, p1=1.0, p2=1.0)
    with pytest.raises(ValidationError):
        ChannelParams(**{**base, field: -0.5})
    with pytest.raises(ValidationError):
        ChannelParams(**{**base, field: math.nan})


def test_tolerances_bounds_and_active_threshold():
    tol = Tolerances()
    assert tol.tol_rho == tol.tol_val == 1e-9
    assert tol.active == pytest.approx(1e-8)
    with pytest.raises(ValidationError):
        Tolerances(tol_val=0.0)
    with pytest.raises(ValidationError):
        Tolerances(tol_rho=0.5)


def test_interval_must_be_ordered():
    assert Interval(lo=0.2, hi=0.7).width == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        Interval(lo=0.7, hi=0.2)


def test_bound_result_rate_accepts_minus_inf_only():
    BoundResult(value=-math.inf, argmax_rho=1.0, binding=("B4",), branch=Branch.T1_SEGMENT)
    with pytest.raises(ValidationError):
        BoundResult(value=math.inf, argmax_rho=0.5, binding=("B3",), branch=Branch.T1_SEGMENT)
    with pytest.raises(ValidationError):
        BoundResult(value=1.0, argmax_rho=0.5, binding=(), branch=Branch.T1_SEGMENT)


def test_codebook_size():
    assert codebook_size(24, 5 / 12) == 1024
    assert codebook_size(12, 0.0) == 1
    with pytest.raises(BudgetError):
        codebook_size(100, 1.0)


def test_sim_config_budget_and_admissibility():
    cfg = SimConfig(n=24, r1=5 / 12, r2=5 / 12, p1=3, p2=3, rho=0.3, delta=0.1, trials=10)
    assert cfg.m1 == cfg.m2 == 1024
    with pytest.raises(BudgetError):
        SimConfig(n=40, r1=0.5, r2=0.5, p1=3, p2=3, rho=0.3, delta=0.1, trials=10)
    # rho° for r = 1/4 is about 0.541
    with pytest.raises(ValidationError):
        SimConfig(n=12, r1=0.25, r2=0.25, p1=3, p2=3, rho=0.8, delta=0.1, trials=10)


def test_sweep_spec_range():
    with pytest.raises(ValidationError):
        SweepSpec(p=3, r0_min=1.0, r0_max=1.0, steps=5)
    with pytest.raises(ValidationError):
        SweepSpec(p=3, r0_min=0.5, r0_max=1.0, steps=1)
