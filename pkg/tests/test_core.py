import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channel.core import check_rho, correlation_penalty, gauss_rate, penalized_sum
from channel.errors import DomainError

rhos = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def test_gauss_rate_values():
    assert gauss_rate(0.0) == 0.0
    assert gauss_rate(3.0) == pytest.approx(1.0)
    assert gauss_rate(15.0) == pytest.approx(2.0)


def test_gauss_rate_is_shape_preserving():
    out = gauss_rate(np.array([0.0, 3.0, 15.0]))
    assert isinstance(out, np.ndarray)
    np.testing.assert_allclose(out, [0.0, 1.0, 2.0])
    assert isinstance(gauss_rate(1.0), float)


@pytest.mark.parametrize("bad", [-1e-3, math.nan, math.inf])
def test_gauss_rate_rejects_bad_snr(bad):
    with pytest.raises(DomainError):
        gauss_rate(bad)
    with pytest.raises(ValueError):
        gauss_rate(bad)


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_check_rho_rejects_out_of_range(bad):
    with pytest.raises(DomainError):
        check_rho(bad)


def test_correlation_penalty():
    assert correlation_penalty(0.0) == 0.0
    # 1 - 3/4 = 1/4, so the penalty is one bit
    assert correlation_penalty(math.sqrt(3) / 2) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        correlation_penalty(1.0)


def test_penalized_sum_diverges_at_full_correlation():
    assert penalized_sum(2.0, 1.0) == -math.inf
    assert penalized_sum(2.0, math.sqrt(3) / 2) == pytest.approx(1.0)
    out = penalized_sum(2.0, np.array([0.0, 1.0]))
    assert out[0] == 2.0 and out[1] == -math.inf


@given(rhos, rhos)
def test_penalty_is_nondecreasing(a, b):
    lo, hi = sorted((a, b))
    assert penalized_sum(1.0, lo) >= penalized_sum(1.0, hi)


def test_gauss_rate_is_increasing_and_concave():
    rng = np.random.default_rng(20240614)
    a = rng.uniform(0.0, 100.0, 10_000)
    b = a + rng.uniform(1e-3, 100.0, 10_000)
    assert np.all(gauss_rate(b) > gauss_rate(a))
    midpoint = gauss_rate(0.5 * (a + b))
    assert np.all(midpoint >= 0.5 * (gauss_rate(a) + gauss_rate(b)) - 1e-12)
