"""Cadence estimation from pedal pulses and inter-biker sync detection.

Each bike reports one pulse per crank revolution. A sliding window over
those pulses yields a cadence estimate per biker; the spread of the valid
estimates (coefficient of variation) feeds a hysteresis machine that
declares the group in sync, out of sync, or indeterminate. Asymmetric
dwell times keep the status from flapping while bikers drift.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


@dataclass(frozen=True)
class PedalEvent:
    """One crank revolution of one biker."""

    biker_id: int
    timestamp_s: float


@dataclass(frozen=True)
class CadenceEstimate:
    biker_id: int
    rpm: float
    sample_count: int
    valid: bool


class SyncStatus(Enum):
    IN_SYNC = "InSync"
    OUT_OF_SYNC = "OutOfSync"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SyncState:
    """Current spread plus the debounced status and its pending transition.

    ``dwell_s`` counts how long the raw threshold condition named by
    ``pending`` has held continuously; the status only flips once the dwell
    reaches the configured threshold for that direction.
    """

    spread_frac: float
    status: SyncStatus
    dwell_s: float
    pending: SyncStatus | None = None


INDETERMINATE_SYNC = SyncState(0.0, SyncStatus.INDETERMINATE, 0.0)


@dataclass(frozen=True)
class SyncConfig:
    window_s: float = 5.0
    min_pulses: int = 2
    out_spread: float = 0.15
    in_spread: float = 0.05
    out_dwell_s: float = 3.0
    in_dwell_s: float = 5.0


DEFAULT_SYNC = SyncConfig()

# Absorbs float accumulation drift so dwell thresholds land on the tick a
# human stepping the machine by hand would expect.
_EPS_S = 1e-9


def _window_rpm(timestamps: Sequence[float], now_s: float, window_s: float,
                min_pulses: int) -> tuple[float, int, bool]:
    """(rpm, sample count, valid) from time-ordered pulses in (now-window, now]."""
    lo = now_s - window_s
    window = [t for t in timestamps if lo < t <= now_s]
    n = len(window)
    if n < max(min_pulses, 2):
        return 0.0, n, False
    mean_interval = (window[-1] - window[0]) / (n - 1)
    if mean_interval <= 0.0:
        return 0.0, n, False
    return 60.0 / mean_interval, n, True


def estimate_cadence(events: Sequence[PedalEvent], now_s: float,
                     window_s: float = 5.0, min_pulses: int = 2) -> CadenceEstimate:
    """Cadence of one biker from their full, time-ordered pulse log.

    Raises ValueError if the log is not strictly increasing in time.
    """
    prev = float("-inf")
    for event in events:
        if event.timestamp_s <= prev:
            raise ValueError(
                f"pedal events out of order for biker {event.biker_id}: "
                f"{event.timestamp_s} after {prev}")
        prev = event.timestamp_s
    biker_id = events[0].biker_id if events else -1
    rpm, count, valid = _window_rpm([e.timestamp_s for e in events], now_s,
                                    window_s, min_pulses)
    return CadenceEstimate(biker_id, rpm, count, valid)


class CadenceTracker:
    """Streaming per-biker pulse history, pruned to the estimation window.

    The engine tick owns one tracker; ingestion enforces the per-biker
    strict time ordering so estimates never see a disordered log.
    """

    def __init__(self, window_s: float = 5.0, min_pulses: int = 2) -> None:
        self.window_s = window_s
        self.min_pulses = min_pulses
        self._pulses: dict[int, deque[float]] = {}

    def join(self, biker_id: int) -> None:
        self._pulses.setdefault(biker_id, deque())

    def leave(self, biker_id: int) -> None:
        self._pulses.pop(biker_id, None)

    def joined(self) -> list[int]:
        return sorted(self._pulses)

    def add(self, event: PedalEvent) -> None:
        if event.biker_id not in self._pulses:
            raise ValueError(f"pedal event for biker {event.biker_id} before join")
        pulses = self._pulses[event.biker_id]
        if pulses and event.timestamp_s <= pulses[-1]:
            raise ValueError(
                f"pedal events out of order for biker {event.biker_id}: "
                f"{event.timestamp_s} after {pulses[-1]}")
        pulses.append(event.timestamp_s)

    def estimates(self, now_s: float) -> list[CadenceEstimate]:
        """Current estimates for every joined biker, ordered by id."""
        out = []
        lo = now_s - self.window_s
        for biker_id in sorted(self._pulses):
            pulses = self._pulses[biker_id]
            while pulses and pulses[0] <= lo:
                pulses.popleft()
            rpm, count, valid = _window_rpm(pulses, now_s, self.window_s,
                                            self.min_pulses)
            out.append(CadenceEstimate(biker_id, rpm, count, valid))
        return out


def sync_spread(cadences: Iterable[CadenceEstimate]) -> float | None:
    """Coefficient of variation of the given cadences.

    Returns None when the mean cadence is zero (everyone idle, spread
    undefined). Raises ValueError on fewer than two estimates; the caller
    must mark the state indeterminate instead of calling.
    """
    rpms = [c.rpm for c in cadences]
    if len(rpms) < 2:
        raise ValueError("sync spread needs at least two valid cadences")
    mean = sum(rpms) / len(rpms)
    if mean == 0.0:
        return None
    variance = sum((r - mean) ** 2 for r in rpms) / len(rpms)
    return (variance ** 0.5) / mean


def update_sync_status(prev: SyncState, spread_frac: float | None, dt_s: float,
                       cfg: SyncConfig = DEFAULT_SYNC) -> SyncState:
    """Advance the hysteresis machine by one tick.

    ``spread_frac`` None means no measurable spread this tick (fewer than
    two valid cadences or all idle): the status drops to indeterminate
    immediately and any pending dwell is discarded.
    """
    if dt_s <= 0.0:
        raise ValueError("dt_s must be positive")
    if spread_frac is None:
        return INDETERMINATE_SYNC

    if spread_frac > cfg.out_spread:
        desired = SyncStatus.OUT_OF_SYNC
    elif spread_frac < cfg.in_spread:
        desired = SyncStatus.IN_SYNC
    else:
        desired = None

    if desired is None or desired == prev.status:
        return SyncState(spread_frac, prev.status, 0.0)

    dwell = prev.dwell_s + dt_s if prev.pending == desired else dt_s
    threshold = cfg.out_dwell_s if desired is SyncStatus.OUT_OF_SYNC else cfg.in_dwell_s
    if dwell >= threshold - _EPS_S:
        return SyncState(spread_frac, desired, 0.0)
    return SyncState(spread_frac, prev.status, dwell, pending=desired)
