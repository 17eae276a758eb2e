"""Mode state machine: which gesture each leaf plays, and when.

Biker presence drives the base mode (idle / solo / multi, debounced so a
coasting biker doesn't flicker the installation), and sync status edges
in multi mode fire short-lived social overlays on top. Gesture assignment
then maps the mode onto per-leaf recipes: independent erratic draws while
idle, one shared cadence-mirroring recipe while ridden, and the social
recipes while an overlay runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Sequence

from .grammar import (
    DEFAULT_GRAMMAR,
    GestureKind,
    GestureParams,
    GrammarConfig,
    motivational_params,
    recruitment_params,
    social_interrupt_params,
    social_reward_params,
)
from .sync import CadenceEstimate, SyncState, SyncStatus


class ModeKind(Enum):
    IDLE = "Idle"
    SOLO = "Solo"
    MULTI = "Multi"


class OverlayKind(Enum):
    INTERRUPT = "Interrupt"
    REWARD = "Reward"


@dataclass(frozen=True)
class Overlay:
    """Social gesture layered over multi mode: a countdown or a stopwatch."""

    kind: OverlayKind
    remaining_s: float = 0.0  # interrupt counts down to expiry
    elapsed_s: float = 0.0    # reward counts up to expiry


@dataclass(frozen=True)
class EngineMode:
    """Base mode plus overlay, with the debounce bookkeeping carried along.

    ``pending``/``transition_dwell_s`` track the candidate base mode and how
    long presence has pointed at it; ``last_sync_status`` is retained so the
    next step can detect sync status edges.
    """

    base: ModeKind = ModeKind.IDLE
    overlay: Overlay | None = None
    pending: ModeKind | None = None
    transition_dwell_s: float = 0.0
    last_sync_status: SyncStatus = SyncStatus.INDETERMINATE


@dataclass(frozen=True)
class SchedulerConfig:
    activity_rpm: float = 20.0       # a biker counts as active at or above this
    debounce_s: float = 2.0          # presence must hold this long to switch mode
    interrupt_s: float = 4.0
    reward_s: float = 5.0
    effort_full_rpm: float = 90.0    # cadence at which motivational swing saturates


DEFAULT_SCHEDULER = SchedulerConfig()

# Absorbs float accumulation drift in dwell/expiry comparisons so threshold
# crossings land on the tick a human would count.
_EPS_S = 1e-9


@dataclass(frozen=True)
class LeafGesture:
    kind: GestureKind
    params: GestureParams
    phase_s: float


@dataclass(frozen=True)
class LeafAssignment:
    leaves: tuple[LeafGesture, ...]


def _target_mode(active_bikers: int) -> ModeKind:
    if active_bikers == 0:
        return ModeKind.IDLE
    if active_bikers == 1:
        return ModeKind.SOLO
    return ModeKind.MULTI


def _age_overlay(overlay: Overlay | None, dt_s: float, cfg: SchedulerConfig) -> Overlay | None:
    if overlay is None:
        return None
    if overlay.kind is OverlayKind.INTERRUPT:
        remaining = overlay.remaining_s - dt_s
        if remaining <= _EPS_S:
            return None
        return Overlay(OverlayKind.INTERRUPT, remaining_s=remaining)
    elapsed = overlay.elapsed_s + dt_s
    if elapsed >= cfg.reward_s - _EPS_S:
        return None
    return Overlay(OverlayKind.REWARD, elapsed_s=elapsed)


def step_mode(prev: EngineMode, active_bikers: int, sync: SyncState, dt_s: float,
              cfg: SchedulerConfig = DEFAULT_SCHEDULER) -> EngineMode:
    """Advance the mode machine by one tick.

    The base mode follows the active-biker count through a 2 s debounce.
    While leaving idle, solo and multi both mean "someone is riding", so a
    pending switch between them keeps the accumulated dwell; otherwise a
    changed target restarts it. Overlays exist only in multi mode with at
    least two bikers still active: a fresh edge to out-of-sync starts (or
    preempts reward with) an interrupt; a fresh edge to in-sync starts a
    reward unless an interrupt is running.
    """
    target = _target_mode(active_bikers)
    base = prev.base
    pending: ModeKind | None = prev.pending
    dwell = prev.transition_dwell_s

    if target == base:
        pending, dwell = None, 0.0
    else:
        keeps_dwell = pending == target or (
            base is ModeKind.IDLE and pending is not None
            and pending is not ModeKind.IDLE and target is not ModeKind.IDLE)
        dwell = dwell + dt_s if keeps_dwell else dt_s
        pending = target
        if dwell >= cfg.debounce_s - _EPS_S:
            base, pending, dwell = target, None, 0.0

    if base is not ModeKind.MULTI or active_bikers < 2:
        overlay = None
    else:
        overlay = _age_overlay(prev.overlay, dt_s, cfg)
        if sync.status != prev.last_sync_status:
            if sync.status is SyncStatus.OUT_OF_SYNC:
                overlay = Overlay(OverlayKind.INTERRUPT, remaining_s=cfg.interrupt_s)
            elif sync.status is SyncStatus.IN_SYNC and (
                    overlay is None or overlay.kind is not OverlayKind.INTERRUPT):
                overlay = Overlay(OverlayKind.REWARD, elapsed_s=0.0)

    return EngineMode(base, overlay, pending, dwell, sync.status)


def _gesture_kind(mode: EngineMode) -> GestureKind:
    if mode.base is ModeKind.IDLE:
        return GestureKind.RECRUITMENT
    if mode.base is ModeKind.MULTI and mode.overlay is not None:
        if mode.overlay.kind is OverlayKind.INTERRUPT:
            return GestureKind.SOCIAL_INTERRUPT
        return GestureKind.SOCIAL_REWARD
    return GestureKind.MOTIVATIONAL


def assign_gestures(
    prev: LeafAssignment | None,
    mode: EngineMode,
    cadences: Sequence[CadenceEstimate],
    effort_fracs: Sequence[float],
    dt_s: float,
    rngs: Sequence[Random],
    grammar: GrammarConfig = DEFAULT_GRAMMAR,
) -> LeafAssignment:
    """Pick each leaf's recipe for this tick, keeping phase continuous.

    ``cadences``/``effort_fracs`` describe the currently active bikers (one
    entry in solo mode, all of them in multi). Phase restarts only when a
    leaf's gesture kind changes; within a kind the phase advances and wraps
    at cycle boundaries, which is also where idle leaves redraw their
    erratic recipe.
    """
    kind = _gesture_kind(mode)

    shared: GestureParams | None = None
    if kind is GestureKind.MOTIVATIONAL:
        if cadences:
            rpm = sum(c.rpm for c in cadences) / len(cadences)
            effort = sum(effort_fracs) / len(effort_fracs)
        else:
            rpm, effort = 0.0, 0.0  # no valid cadence: rest recipe
        shared = motivational_params(rpm, effort, grammar)
    elif kind is GestureKind.SOCIAL_INTERRUPT:
        shared = social_interrupt_params(grammar)
    elif kind is GestureKind.SOCIAL_REWARD:
        assert mode.overlay is not None
        shared = social_reward_params(mode.overlay.elapsed_s, grammar)

    leaves = []
    for i, rng in enumerate(rngs):
        prev_leaf = prev.leaves[i] if prev is not None else None
        if prev_leaf is None or prev_leaf.kind is not kind:
            params = recruitment_params(rng, grammar) if shared is None else shared
            leaves.append(LeafGesture(kind, params, 0.0))
            continue
        phase = prev_leaf.phase_s + dt_s
        if shared is None:
            params = prev_leaf.params
            while phase >= params.cycle_len_s:
                phase -= params.cycle_len_s
                params = recruitment_params(rng, grammar)
        else:
            params = shared
            while phase >= params.cycle_len_s:
                phase -= params.cycle_len_s
        leaves.append(LeafGesture(kind, params, phase))
    return LeafAssignment(tuple(leaves))
