"""Gesture grammar: recipe generators and the target waveform."""

from __future__ import annotations

import math
from random import Random

import pytest
from hypothesis import given, strategies as st

from pedaltree import (
    GestureParams,
    GrammarConfig,
    PeriodRamp,
    is_smooth,
    motivational_params,
    recruitment_params,
    social_interrupt_params,
    social_reward_params,
    target_waveform,
)


# -- parameter type invariants ------------------------------------------------

def test_params_validation():
    with pytest.raises(ValueError):
        GestureParams(1.2, 1.0, 0.0)
    with pytest.raises(ValueError):
        GestureParams(0.5, 0.0, 0.0)
    with pytest.raises(ValueError):
        GestureParams(0.5, 1.0, -0.1)
    with pytest.raises(ValueError):
        PeriodRamp(0.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        PeriodRamp(1.0, 0.5, 0.0)


def test_smoothness_threshold():
    assert is_smooth(GestureParams(0.5, 1.0, 0.0))
    assert is_smooth(GestureParams(0.5, 1.0, 0.049))
    assert not is_smooth(GestureParams(0.5, 1.0, 0.05))
    assert not is_smooth(GestureParams(0.5, 1.0, 2.0))


# -- recruitment --------------------------------------------------------------

def test_recruitment_within_ranges():
    rng = Random(1234)
    for _ in range(200):
        p = recruitment_params(rng)
        assert 0.7 <= p.amplitude_frac <= 1.0
        assert 0.5 <= p.cycle_period_s <= 1.0
        assert p.interval_s == 0.0
        assert p.period_ramp is None
        assert is_smooth(p)


def test_recruitment_deterministic_per_seed():
    a = [recruitment_params(Random(99)) for _ in range(10)]
    b = [recruitment_params(Random(99)) for _ in range(10)]
    assert a == b


def test_recruitment_streams_differ():
    assert recruitment_params(Random(1)) != recruitment_params(Random(2))


# -- motivational -------------------------------------------------------------

def test_motivational_mirrors_cadence():
    p = motivational_params(60.0, 0.8)
    assert p.cycle_period_s == 1.0  # 60/60
    assert p.amplitude_frac == 0.8
    assert p.interval_s == 0.0


def test_motivational_rest_below_threshold():
    for rpm in (0.0, 5.0, 19.9):
        p = motivational_params(rpm, 1.0)
        assert p.amplitude_frac == 0.0


def test_motivational_period_clamps():
    assert motivational_params(240.0, 1.0).cycle_period_s == 0.4  # 60/240 < 0.4
    assert motivational_params(10.0, 1.0).cycle_period_s == 4.0


def test_motivational_amplitude_floor():
    assert motivational_params(60.0, 0.0).amplitude_frac == 0.1
    assert motivational_params(60.0, 2.0).amplitude_frac == 1.0


def test_motivational_rejects_negative_cadence():
    with pytest.raises(ValueError):
        motivational_params(-1.0, 0.5)
    with pytest.raises(ValueError):
        motivational_params(float("nan"), 0.5)


@given(rpm=st.floats(min_value=15.0, max_value=150.0),
       effort=st.floats(min_value=0.0, max_value=1.0))
def test_motivational_frequency_matches_cadence(rpm, effort):
    # inside the clamp band one leaf cycle corresponds to one revolution
    p = motivational_params(rpm, effort)
    assert 1.0 / p.cycle_period_s == pytest.approx(rpm / 60.0, rel=1e-12)


# -- social recipes -----------------------------------------------------------

def test_interrupt_recipe():
    p = social_interrupt_params()
    assert (p.amplitude_frac, p.cycle_period_s, p.interval_s) == (1.0, 0.6, 2.0)
    assert not is_smooth(p)


def test_interrupt_amplitude_is_max_of_all_recipes():
    # enumerate every generator's amplitude; the rhythm break swings hardest
    rng = Random(7)
    others = [recruitment_params(rng).amplitude_frac for _ in range(100)]
    others += [motivational_params(rpm, 1.0).amplitude_frac for rpm in (30, 60, 120)]
    others += [social_reward_params(t).amplitude_frac for t in (0.0, 2.5, 5.0)]
    assert social_interrupt_params().amplitude_frac >= max(others)


def test_reward_ramp_endpoints_and_midpoint():
    assert social_reward_params(0.0).cycle_period_s == 1.2
    assert social_reward_params(5.0).cycle_period_s == pytest.approx(0.4)
    assert social_reward_params(9.0).cycle_period_s == pytest.approx(0.4)
    # linear interpolation oracle: 1.2 - (0.8/5)*2.5 = 0.8
    assert social_reward_params(2.5).cycle_period_s == pytest.approx(0.8)
    p = social_reward_params(1.0)
    assert p.amplitude_frac == 0.2
    assert p.interval_s == 0.0
    assert p.period_ramp is not None


# -- waveform -----------------------------------------------------------------

def test_waveform_examples():
    p = GestureParams(0.5, 1.0, 0.0)
    assert target_waveform(p, 0.0) == 0.0
    assert target_waveform(p, 0.5) == pytest.approx(0.5)  # sin(pi/2) = 1
    # direct evaluation oracle: 0.5*sin(pi/4)
    assert target_waveform(p, 0.25) == pytest.approx(0.5 * math.sin(math.pi / 4))
    assert target_waveform(p, 0.25) == pytest.approx(0.35355, abs=5e-6)


def test_waveform_pause_is_flat():
    p = GestureParams(1.0, 0.6, 2.0)
    assert target_waveform(p, 0.8) == 0.0
    assert target_waveform(p, 2.5) == 0.0
    assert target_waveform(p, 0.3) == pytest.approx(1.0)


params_strategy = st.builds(
    GestureParams,
    amplitude_frac=st.floats(min_value=0.0, max_value=1.0),
    cycle_period_s=st.floats(min_value=0.05, max_value=10.0),
    interval_s=st.floats(min_value=0.0, max_value=5.0),
)


@given(params=params_strategy, phase=st.floats(min_value=0.0, max_value=100.0))
def test_waveform_bounded(params, phase):
    value = target_waveform(params, phase)
    assert 0.0 <= value <= params.amplitude_frac


@given(params=params_strategy,
       phase=st.floats(min_value=0.0, max_value=10.0),
       k=st.integers(min_value=0, max_value=20))
def test_waveform_periodic(params, phase, k):
    base = target_waveform(params, phase)
    shifted = target_waveform(params, phase + k * params.cycle_len_s)
    assert shifted == pytest.approx(base, abs=1e-6)


@given(rng_seed=st.integers(min_value=0, max_value=2**32),
       rpm=st.floats(min_value=0.0, max_value=400.0),
       effort=st.floats(min_value=0.0, max_value=1.0),
       elapsed=st.floats(min_value=0.0, max_value=30.0))
def test_generators_produce_valid_params(rng_seed, rpm, effort, elapsed):
    # constructing GestureParams revalidates every invariant
    for p in (recruitment_params(Random(rng_seed)),
              motivational_params(rpm, effort),
              social_interrupt_params(),
              social_reward_params(elapsed)):
        assert 0.0 <= p.amplitude_frac <= 1.0
        assert p.cycle_period_s > 0.0
        assert p.interval_s >= 0.0


def test_recipes_follow_config_overrides():
    cfg = GrammarConfig(interrupt_interval_s=3.5, reward_amplitude=0.35,
                        recruitment_amplitude_min=0.2,
                        recruitment_amplitude_max=0.3)
    assert social_interrupt_params(cfg).interval_s == 3.5
    assert social_reward_params(0.0, cfg).amplitude_frac == 0.35
    p = recruitment_params(Random(3), cfg)
    assert 0.2 <= p.amplitude_frac <= 0.3
