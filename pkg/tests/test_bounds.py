import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channel.bounds import (
    cooperative_rate,
    cut_set_bound,
    degenerate_powers,
    grid_bound,
    lower_bound,
    meeting_check,
    noise_variance_n,
    objective_t1,
    objective_t2,
    rho_circ,
    rho_star,
    term_b1,
    term_b2,
    term_b3,
    term_b4,
    term_b4_prime,
    upper_bound,
)
from channel.core import gauss_rate
from channel.errors import DegenerateChannelError, DomainError
from channel.schemas import Branch, ChannelParams, Constraint, Interval, Tolerances

EXAMPLE = ChannelParams(r1=1.2, r2=1.2, p1=3.0, p2=3.0)

rates = st.floats(min_value=0.0, max_value=4.0)
powers = st.floats(min_value=0.0, max_value=100.0)


def _all_bounds(params, tol):
    return lower_bound(params, tol), upper_bound(params, tol), cut_set_bound(params, tol)


# -----------------
# Special correlations
# -----------------
def test_rho_star_and_rho_circ_worked_example():
    assert rho_star(3.0, 3.0) == pytest.approx(0.8471, abs=1e-4)
    assert rho_circ(1.2, 1.2) == pytest.approx(0.9003, abs=1e-4)
    assert rho_circ(0.0, 5.0) == 0.0


def test_rho_star_is_stable_for_large_powers():
    q = 1e8
    # 1/rho - rho = 1/q has rho = 1 - 1/(2q) + O(q^-2)
    assert rho_star(q, q) == pytest.approx(1.0 - 0.5 / q, rel=1e-12)


def test_rho_star_degenerate():
    with pytest.raises(DegenerateChannelError):
        rho_star(0.0, 3.0)
    with pytest.raises(DomainError):
        rho_star(-1.0, 3.0)


@pytest.mark.parametrize("p", [1e-200, 1e-300])
def test_tiny_powers_keep_the_split_range(p, tol):
    # p * p underflows here, the square roots do not
    assert not degenerate_powers(p, p)
    assert degenerate_powers(0.0, p)
    assert 0.0 < rho_star(p, p) < 1e-100
    result = upper_bound(ChannelParams(r1=0.5, r2=0.5, p1=p, p2=p), tol)
    assert result.branch in (Branch.T1_SEGMENT, Branch.T2_SEGMENT)
    assert result.value == pytest.approx(0.0, abs=1e-9)


def test_noise_variance_vanishes_at_rho_star():
    rng = np.random.default_rng(20240611)
    for p1, p2 in rng.uniform(1e-3, 100.0, size=(1000, 2)):
        assert abs(noise_variance_n(p1, p2, rho_star(p1, p2))) <= 1e-9


def test_noise_variance_domain():
    assert noise_variance_n(3.0, 3.0, 0.5) == pytest.approx(3.0 * 1.5 - 1.0)
    with pytest.raises(DomainError):
        noise_variance_n(3.0, 3.0, 0.0)
    with pytest.raises(DomainError):
        noise_variance_n(3.0, 3.0, 0.95)
    with pytest.raises(DegenerateChannelError):
        noise_variance_n(0.0, 3.0, 0.5)


def test_objectives_are_vectorised():
    grid = np.linspace(0.0, 1.0, 11)
    t1 = objective_t1(EXAMPLE, grid)
    t2 = objective_t2(EXAMPLE, grid)
    assert t1.shape == t2.shape == grid.shape
    assert t1[-1] == -math.inf
    assert np.all(t1 <= t2)
    np.testing.assert_allclose(term_b4_prime(EXAMPLE, grid), 2.4)


# -----------------
# Worked example
# -----------------
def test_worked_example_bounds(tol):
    lower, upper, cut = _all_bounds(EXAMPLE, tol)
    assert lower.value == pytest.approx(1.7671, abs=1e-3)
    assert upper.value == pytest.approx(lower.value, abs=1e-8)
    assert lower.argmax_rho == pytest.approx(0.7643, abs=1e-3)
    assert lower.branch is Branch.LOWER_RANGE
    assert upper.branch is Branch.T1_SEGMENT
    assert {Constraint.B3, Constraint.B4} <= set(lower.binding)
    # cut-set sits at the B1/B3 crossing, strictly above the capacity
    assert cut.value == pytest.approx(1.7704, abs=1e-3)
    assert cut.value > upper.value + 1e-3
    assert {Constraint.B1, Constraint.B2, Constraint.B3} <= set(cut.binding)


def test_worked_example_meets(tol):
    report = meeting_check(EXAMPLE, tol)
    assert report.rho_circ >= report.rho_star
    assert report.t1 == pytest.approx(1.7671, abs=1e-3)
    assert report.t2 == pytest.approx(1.6426, abs=1e-3)
    assert report.sufficient and report.meets


def test_zero_links(tol):
    for b in _all_bounds(ChannelParams(r1=0, r2=0, p1=3, p2=3), tol):
        assert b.value == pytest.approx(0.0, abs=1e-12)


def test_source_limited_example(tol):
    lower, upper, _ = _all_bounds(ChannelParams(r1=0.3, r2=0.3, p1=3, p2=3), tol)
    assert lower.value == pytest.approx(0.6, abs=1e-9)
    assert lower.argmax_rho == 0.0
    assert upper.value == pytest.approx(0.6, abs=1e-9)


def test_mac_limited_example_uses_cooperation(tol):
    params = ChannelParams(r1=5, r2=5, p1=3, p2=3)
    lower, upper, cut = _all_bounds(params, tol)
    expected = 0.5 * math.log2(13.0)
    assert expected == pytest.approx(1.8502, abs=1e-4)
    assert lower.branch is Branch.COOPERATION
    assert lower.argmax_rho == 1.0
    for b in (lower, upper, cut):
        assert b.value == pytest.approx(expected, abs=1e-9)
    assert cooperative_rate(params) == pytest.approx(expected)


def test_silent_relay(tol):
    params = ChannelParams(r1=1.0, r2=1.0, p1=3.0, p2=0.0)
    upper = upper_bound(params, tol)
    assert upper.branch is Branch.FULL_RANGE
    report = meeting_check(params, tol)
    assert report.rho_star is None and report.t1 is None
    assert not report.sufficient
    assert lower_bound(params, tol).value <= upper.value + 1e-9


@pytest.mark.parametrize("p", [0.5, 3.0, 30.0])
def test_bottleneck_regimes(p, tol):
    mac = gauss_rate(4.0 * p)
    for r0 in (mac, mac + 0.1, mac + 1.0):
        lower, upper, _ = _all_bounds(ChannelParams(r1=r0, r2=r0, p1=p, p2=p), tol)
        assert upper.value == pytest.approx(mac, abs=1e-6)
        assert lower.value == pytest.approx(mac, abs=1e-6)
    source = 0.5 * gauss_rate(2.0 * p)
    for r0 in (source, 0.5 * source, 0.1 * source):
        lower, upper, _ = _all_bounds(ChannelParams(r1=r0, r2=r0, p1=p, p2=p), tol)
        assert upper.value == pytest.approx(2.0 * r0, abs=1e-6)
        assert lower.value == pytest.approx(2.0 * r0, abs=1e-6)


# -----------------
# Ordering and oracle
# -----------------
@given(rates, rates, powers, powers)
def test_bound_ordering(r1, r2, p1, p2):
    tol = Tolerances()
    lower, upper, cut = _all_bounds(ChannelParams(r1=r1, r2=r2, p1=p1, p2=p2), tol)
    assert lower.value <= upper.value + 1e-9
    assert upper.value <= cut.value + 1e-9


@pytest.mark.slow
def test_bound_ordering_randomized(tol):
    rng = np.random.default_rng(7)
    strict = 0
    for r1, r2, p1, p2 in np.column_stack([rng.uniform(0, 4, (1000, 2)), rng.uniform(0, 100, (1000, 2))]):
        lower, upper, cut = _all_bounds(ChannelParams(r1=r1, r2=r2, p1=p1, p2=p2), tol)
        assert lower.value <= upper.value + 1e-9
        assert upper.value <= cut.value + 1e-9
        strict += upper.value < cut.value - 1e-6
    assert strict > 0


def test_grid_bound_simple():
    rho, value = grid_bound(lambda r: 1.0 - (r - 0.3) ** 2, Interval(lo=0.0, hi=1.0), points=1001)
    assert rho == pytest.approx(0.3)
    assert value == pytest.approx(1.0)


def _oracle(params, grid_max):
    lower = max(
        grid_max(lambda r: objective_t1(params, r), 0.0, rho_circ(params.r1, params.r2)),
        cooperative_rate(params),
    )
    cut = grid_max(lambda r: objective_t2(params, r), 0.0, 1.0)
    if degenerate_powers(params.p1, params.p2):
        return lower, cut, cut
    rs = rho_star(params.p1, params.p2)
    upper = max(
        grid_max(lambda r: objective_t1(params, r), 0.0, rs),
        grid_max(lambda r: objective_t2(params, r), rs, 1.0),
    )
    return lower, upper, cut


def test_oracle_worked_example(tol, grid_max):
    for got, ref in zip(_all_bounds(EXAMPLE, tol), _oracle(EXAMPLE, grid_max)):
        assert got.value == pytest.approx(ref, abs=1e-5)


@pytest.mark.slow
def test_oracle_randomized(tol, grid_max):
    rng = np.random.default_rng(11)
    for _ in range(100):
        r1, r2 = rng.uniform(0, 4, 2)
        p1, p2 = rng.uniform(0, 100, 2)
        params = ChannelParams(r1=r1, r2=r2, p1=p1, p2=p2)
        for got, ref in zip(_all_bounds(params, tol), _oracle(params, grid_max)):
            assert got.value == pytest.approx(ref, abs=1e-5)
            # the solver never reports more than the true maximum
            assert got.value <= ref + 1e-5


# -----------------
# Monotone structure
# -----------------
def test_terms_are_monotone_in_rho():
    rng = np.random.default_rng(20240612)
    grid = np.linspace(0.0, 0.999, 400)
    for r1, r2, p1, p2 in np.column_stack([rng.uniform(0, 4, (200, 2)), rng.uniform(0, 100, (200, 2))]):
        params = ChannelParams(r1=r1, r2=r2, p1=p1, p2=p2)
        for term in (term_b1, term_b2, term_b4):
            assert np.all(np.diff(term(params, grid)) <= 1e-12), term.__name__
        assert np.all(np.diff(term_b3(params, grid)) >= -1e-12)


def test_bounds_grow_with_every_parameter(tol):
    rng = np.random.default_rng(20240613)
    fields = ("r1", "r2", "p1", "p2")
    for _ in range(60):
        base = dict(zip(fields, [*rng.uniform(0, 4, 2), *rng.uniform(0.01, 100, 2)]))
        params = ChannelParams(**base)
        lower, upper = lower_bound(params, tol).value, upper_bound(params, tol).value
        for name in fields:
            bumped = ChannelParams(**{**base, name: base[name] + rng.uniform(0.01, 1.0)})
            assert lower_bound(bumped, tol).value >= lower - 1e-8, (name, base)
            assert upper_bound(bumped, tol).value >= upper - 1e-8, (name, base)
