"""Cadence estimation, spread, and the sync hysteresis machine."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from pedaltree import (
    CadenceEstimate,
    CadenceTracker,
    PedalEvent,
    SyncConfig,
    SyncState,
    SyncStatus,
    estimate_cadence,
    sync_spread,
    update_sync_status,
)
from pedaltree.sync import INDETERMINATE_SYNC

from oracles import HysteresisOracle, brute_cadence, brute_spread


def pulses(biker, times):
    return [PedalEvent(biker, t) for t in times]


# -- cadence estimation -------------------------------------------------------

def test_steady_60rpm():
    est = estimate_cadence(pulses(1, [0, 1, 2, 3]), now_s=3.0)
    assert est.valid and est.rpm == pytest.approx(60.0)
    assert est.sample_count == 4


def test_120rpm():
    est = estimate_cadence(pulses(1, [0.0, 0.5, 1.0]), now_s=1.0)
    assert est.valid and est.rpm == pytest.approx(120.0)


def test_single_pulse_invalid():
    est = estimate_cadence(pulses(1, [2.9]), now_s=3.0)
    assert not est.valid and est.rpm == 0.0 and est.sample_count == 1


def test_window_is_left_open():
    # pulse exactly at now-window is excluded, pulse at now included
    est = estimate_cadence(pulses(1, [0.0, 1.0, 5.0]), now_s=5.0, window_s=5.0)
    assert est.sample_count == 2  # t=0.0 fell out


def test_stale_pulses_ignored():
    est = estimate_cadence(pulses(1, [0, 1, 2]), now_s=60.0)
    assert not est.valid


def test_unordered_events_rejected():
    with pytest.raises(ValueError):
        estimate_cadence(pulses(1, [0.0, 2.0, 1.0]), now_s=3.0)
    with pytest.raises(ValueError):
        estimate_cadence(pulses(1, [1.0, 1.0]), now_s=3.0)


def test_tracker_matches_pure_function():
    tracker = CadenceTracker()
    tracker.join(5)
    times = [0.1, 0.9, 1.6, 2.2, 3.4]
    for t in times:
        tracker.add(PedalEvent(5, t))
    (streamed,) = tracker.estimates(4.0)
    assert streamed == estimate_cadence(pulses(5, times), now_s=4.0)


def test_tracker_rejects_regressions_and_unjoined():
    tracker = CadenceTracker()
    tracker.join(1)
    tracker.add(PedalEvent(1, 1.0))
    with pytest.raises(ValueError):
        tracker.add(PedalEvent(1, 1.0))
    with pytest.raises(ValueError):
        tracker.add(PedalEvent(2, 2.0))


# -- spread -------------------------------------------------------------------

def est(rpm, biker=0):
    return CadenceEstimate(biker, rpm, 5, True)


def test_spread_identical_cadences():
    assert sync_spread([est(60, 1), est(60, 2)]) == 0.0


def test_spread_brute_force_values():
    # pop-std 15, mean 75
    assert sync_spread([est(60, 1), est(90, 2)]) == pytest.approx(0.2)
    assert sync_spread([est(50, 1), est(60, 2), est(70, 3)]) == pytest.approx(0.13608, abs=5e-6)


def test_spread_needs_two():
    with pytest.raises(ValueError):
        sync_spread([est(60)])


def test_spread_zero_mean_is_indeterminate():
    assert sync_spread([est(0.0, 1), est(0.0, 2)]) is None


@given(rpms=st.lists(st.floats(min_value=1.0, max_value=300.0), min_size=2, max_size=8),
       factor=st.floats(min_value=0.1, max_value=10.0))
def test_spread_scale_invariant(rpms, factor):
    base = sync_spread([est(r, i) for i, r in enumerate(rpms)])
    scaled = sync_spread([est(r * factor, i) for i, r in enumerate(rpms)])
    assert scaled == pytest.approx(base, rel=1e-9, abs=1e-12)


@given(rpms=st.lists(st.floats(min_value=0.0, max_value=300.0), min_size=2, max_size=8))
def test_spread_matches_numpy_oracle(rpms):
    ours = sync_spread([est(r, i) for i, r in enumerate(rpms)])
    reference = brute_spread(rpms)
    if reference is None:
        assert ours is None
    else:
        assert ours == pytest.approx(reference, rel=1e-12, abs=1e-12)


# -- hysteresis ---------------------------------------------------------------

DT = 0.02


def run_trace(spreads, dt=DT):
    state = INDETERMINATE_SYNC
    history = []
    for s in spreads:
        state = update_sync_status(state, s, dt)
        history.append(state.status)
    return state, history


def test_flip_to_out_of_sync_after_dwell():
    # spread 0.30 sustained 3 s from a previously in-sync state
    state = SyncState(0.0, SyncStatus.IN_SYNC, 0.0)
    ticks = round(3.0 / DT)
    for i in range(ticks):
        state = update_sync_status(state, 0.30, DT)
    assert state.status is SyncStatus.OUT_OF_SYNC


def test_brief_spike_is_debounced():
    state = SyncState(0.0, SyncStatus.IN_SYNC, 0.0)
    for _ in range(round(1.0 / DT)):
        state = update_sync_status(state, 0.30, DT)
    assert state.status is SyncStatus.IN_SYNC  # not yet flipped
    state = update_sync_status(state, 0.0, DT)
    assert state.status is SyncStatus.IN_SYNC
    assert state.dwell_s == 0.0  # dwell discarded


def test_indeterminate_on_missing_spread():
    state = SyncState(0.1, SyncStatus.OUT_OF_SYNC, 1.5, SyncStatus.IN_SYNC)
    state = update_sync_status(state, None, DT)
    assert state.status is SyncStatus.INDETERMINATE
    assert state.dwell_s == 0.0 and state.pending is None


def test_in_sync_needs_longer_dwell():
    state = INDETERMINATE_SYNC
    for _ in range(round(4.9 / DT)):
        state = update_sync_status(state, 0.01, DT)
    assert state.status is SyncStatus.INDETERMINATE
    for _ in range(10):
        state = update_sync_status(state, 0.01, DT)
    assert state.status is SyncStatus.IN_SYNC


def test_middle_band_retains_status():
    state = SyncState(0.0, SyncStatus.IN_SYNC, 0.0)
    for _ in range(1000):
        state = update_sync_status(state, 0.10, DT)
    assert state.status is SyncStatus.IN_SYNC


def test_custom_thresholds_respected():
    cfg = SyncConfig(out_spread=0.5, out_dwell_s=0.1)
    state = SyncState(0.0, SyncStatus.IN_SYNC, 0.0)
    state = update_sync_status(state, 0.4, DT, cfg)
    assert state.status is SyncStatus.IN_SYNC
    for _ in range(10):
        state = update_sync_status(state, 0.6, DT, cfg)
    assert state.status is SyncStatus.OUT_OF_SYNC


@settings(max_examples=50)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_hysteresis_matches_oracle_on_random_traces(seed):
    rng = random.Random(seed)
    state = INDETERMINATE_SYNC
    oracle = HysteresisOracle()
    spread = 0.1
    for _ in range(400):
        kind = rng.random()
        if kind < 0.1:
            value = None
        else:
            if kind < 0.3:
                spread = rng.uniform(0.0, 0.4)  # jump
            value = spread
        state = update_sync_status(state, value, DT)
        assert state.status.value == oracle.step(value, DT)


@settings(max_examples=30)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_no_transition_without_dwell(seed):
    # any status change must come after the matching dwell of raw condition
    rng = random.Random(seed)
    state = INDETERMINATE_SYNC
    held = 0.0
    cfg = SyncConfig()
    for _ in range(600):
        spread = rng.choice([0.0, 0.03, 0.1, 0.2, 0.35])
        before = state.status
        state = update_sync_status(state, spread, DT)
        if spread > cfg.out_spread and before is not SyncStatus.OUT_OF_SYNC:
            held += DT
        elif spread < cfg.in_spread and before is not SyncStatus.IN_SYNC:
            held += DT
        else:
            held = 0.0
        if state.status != before:
            needed = cfg.out_dwell_s if state.status is SyncStatus.OUT_OF_SYNC else cfg.in_dwell_s
            assert held >= needed - 1e-9
            held = 0.0


# -- streaming vs brute force -------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_streaming_equals_brute_force(seed):
    rng = random.Random(seed)
    n_bikers = rng.randint(1, 4)
    logs: dict[int, list[float]] = {b: [] for b in range(n_bikers)}
    tracker = CadenceTracker()
    for b in logs:
        tracker.join(b)
        t = 0.0
        for _ in range(rng.randint(2, 120)):
            t += rng.uniform(0.05, 2.5)
            logs[b].append(t)

    merged = sorted((t, b) for b, ts in logs.items() for t in ts)
    idx = 0
    for k in range(500):
        now = k * 0.1
        while idx < len(merged) and merged[idx][0] <= now:
            t, b = merged[idx]
            tracker.add(PedalEvent(b, t))
            idx += 1
        streamed = {e.biker_id: e for e in tracker.estimates(now)}
        for b, ts in logs.items():
            full_log = [t for t in ts if t <= now]
            rpm, count, valid = brute_cadence(full_log, now, 5.0)
            assert streamed[b].valid == valid
            assert streamed[b].sample_count == count
            if valid:
                assert streamed[b].rpm == pytest.approx(rpm, rel=1e-12)
