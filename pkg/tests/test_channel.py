"""Channel-level closed forms against exact rational references."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _reference import (
    advance_probability,
    posterior_fidelity,
    record_weight,
)
from pumpwalk import (
    DephasingChannel,
    Protocol,
    WalkSpec,
    alpha_of,
    fidelity_of_delta,
    kink_probability,
    min_delta_for_target,
    path_probability,
    sequence_probability,
    signed_step_probability,
    step_up_probability,
)

EPS_GRID = [Fraction(1, 20), Fraction(1, 5), Fraction(2, 5), Fraction(49, 100)]


def test_alpha_frozen_value():
    assert alpha_of(0.2) == 2.0
    assert alpha_of(0.5 - 1e-12) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_fidelity_matches_posterior(eps):
    channel = DephasingChannel(float(eps))
    for delta in range(-12, 13):
        want = float(posterior_fidelity(eps, delta))
        assert fidelity_of_delta(channel, delta) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_step_up_matches_record_ratio(eps):
    channel = DephasingChannel(float(eps))
    for d in range(0, 16):
        want = float(advance_probability(eps, d))
        assert step_up_probability(channel, d) == pytest.approx(want, rel=1e-14)


def test_step_up_is_history_free():
    # The agree probability may only depend on the net count difference.
    eps = Fraction(1, 5)
    for d in range(0, 6):
        for extra in range(0, 4):
            plus, minus = d + extra, extra
            num = record_weight(eps, plus + 1, minus)
            den = record_weight(eps, plus, minus)
            assert num / den == advance_probability(eps, d)


def test_step_up_is_posterior_mixture():
    channel = DephasingChannel(0.2)
    for d in range(0, 16):
        f = fidelity_of_delta(channel, d)
        mixture = f * 0.8 + (1.0 - f) * 0.2
        assert step_up_probability(channel, d) == pytest.approx(mixture, rel=1e-14)


def test_kink_identity_on_grid():
    for i in range(1, 51):
        eps = i * 0.5 / 51.0
        channel = DephasingChannel(eps)
        kink = kink_probability(channel)
        assert kink == pytest.approx(eps * (1.0 - eps), rel=1e-14)
        for d in range(0, 21):
            product = step_up_probability(channel, d) * (
                1.0 - step_up_probability(channel, d + 1)
            )
            assert abs(product - kink) < 1e-15


@pytest.mark.parametrize(
    "eps_text,target_text",
    [
        ("0.2", "0.9999"),
        ("0.2", "0.9"),
        ("0.1", "0.9"),
        ("0.05", "0.999999"),
        ("0.4", "0.99"),
        ("0.33", "0.97"),
    ],
)
def test_min_delta_matches_decimal_reference(eps_text, target_text):
    """Smallest delta whose posterior reaches the decimal target."""
    eps = Fraction(eps_text)
    target = Fraction(target_text)
    d = 1
    while posterior_fidelity(eps, d) < target:
        d += 1
    channel = DephasingChannel(float(eps_text))
    assert min_delta_for_target(channel, float(target_text)) == d


def test_min_delta_frozen_examples():
    assert min_delta_for_target(DephasingChannel(0.2), 0.9999) == 7
    assert min_delta_for_target(DephasingChannel(0.1), 0.9) == 1
    assert min_delta_for_target(DephasingChannel(0.2), 0.51) == 1


def test_min_delta_rejects_out_of_range_targets():
    channel = DephasingChannel(0.2)
    with pytest.raises(ValueError):
        min_delta_for_target(channel, 1.0)
    with pytest.raises(ValueError):
        min_delta_for_target(channel, 0.0)


@pytest.mark.parametrize("eps", [0.0, 0.5, -0.1, 0.7, 1.0])
def test_channel_domain(eps):
    with pytest.raises(ValueError):
        DephasingChannel(eps)


def test_path_probability_parity_and_reach():
    channel = DephasingChannel(0.2)
    assert path_probability(channel, 3, 4) == 0.0  # parity mismatch
    assert path_probability(channel, 3, 2) == 0.0  # unreachable
    assert path_probability(channel, 1, 1) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_path_probability_from_record_weights(eps):
    # Any first-passage path of length t to +-d has (t+d)/2 steps one way
    # and (t-d)/2 the other, so its probability is a single record weight.
    channel = DephasingChannel(float(eps))
    for d in range(1, 5):
        for t in range(d, 13, 2):
            want = float(record_weight(eps, (t + d) // 2, (t - d) // 2))
            assert path_probability(channel, d, t) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_sequence_probability_matches_record_weight(eps):
    channel = DephasingChannel(float(eps))
    for plus, minus in [(0, 0), (1, 0), (2, 1), (3, 3), (5, 2)]:
        outcomes = [1] * plus + [-1] * minus
        want = float(record_weight(eps, plus, minus))
        assert sequence_probability(channel, outcomes) == pytest.approx(want, rel=1e-13)


def test_signed_steps_compose_to_sequence_probability():
    channel = DephasingChannel(0.2)
    for outcomes in [(1, 1, -1), (1, -1, -1, -1), (-1, 1, 1, 1, -1)]:
        prob = 1.0
        position = 0
        for m in outcomes:
            prob *= signed_step_probability(channel, position, m)
            position += m
        assert prob == pytest.approx(sequence_probability(channel, list(outcomes)), rel=1e-13)


def test_signed_step_normalization_and_reflection():
    channel = DephasingChannel(0.35)
    for position in range(-6, 7):
        up = signed_step_probability(channel, position, 1)
        down = signed_step_probability(channel, position, -1)
        assert up + down == pytest.approx(1.0, abs=1e-15)
        # mirror symmetry of the record
        assert up == pytest.approx(signed_step_probability(channel, -position, -1), rel=1e-14)


def test_walk_spec_validation():
    channel = DephasingChannel(0.2)
    with pytest.raises(ValueError):
        WalkSpec(channel=channel)
    with pytest.raises(ValueError):
        WalkSpec(channel=channel, delta_h=0)
    with pytest.raises(ValueError):
        WalkSpec(channel=channel, delta_h=3, target_fidelity=0.9999)  # needs 7
    spec = WalkSpec(channel=channel, target_fidelity=0.9999)
    assert spec.delta_h == 7
    assert spec.protocol is Protocol.NPS
    assert spec.halting_fidelity >= 0.9999


@settings(max_examples=150, deadline=None)
@given(
    eps=st.floats(min_value=0.005, max_value=0.495),
    delta=st.integers(min_value=1, max_value=40),
)
def test_fidelity_and_bias_ranges(eps, delta):
    channel = DephasingChannel(eps)
    f = fidelity_of_delta(channel, delta)
    assert 0.5 < f <= 1.0
    assert fidelity_of_delta(channel, delta + 1) >= f
    p = step_up_probability(channel, delta)
    assert 0.5 < p <= 1.0 - eps + 1e-12
    assert step_up_probability(channel, 0) == 0.5


@settings(max_examples=100, deadline=None)
@given(
    eps=st.floats(min_value=0.01, max_value=0.49),
    d=st.integers(min_value=1, max_value=6),
    n=st.integers(min_value=0, max_value=8),
)
def test_path_probability_bounds(eps, d, n):
    channel = DephasingChannel(eps)
    t = d + 2 * n
    p = path_probability(channel, d, t)
    assert 0.0 < p <= 1.0
    # adding a kink multiplies by eps * (1 - eps)
    assert path_probability(channel, d, t + 2) == pytest.approx(
        p * kink_probability(channel), rel=1e-10
    )
