"""Engine assembly: the fixed-timestep tick pipeline and scenario runner.

Each tick runs the same pipeline in the same order — cadence/sync from
pedal pulses, mode step, gesture assignment, waveform targets, actuator
commands, power settlement, then plant integration — with no wall-clock
input anywhere, so a (config, scenario) pair replays bit-identically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .config import EngineConfig
from .grammar import target_waveform
from .plant import (
    LeafParams,
    LeafState,
    Stepper,
    calibrate,
    command_from_target,
    effective_airspeed,
    step_leaf,
)
from .power import PowerLedger, demand, settle, supply_from_bikers
from .scenario import JOIN, LEAVE, PEDAL, Scenario, ScenarioEvent
from .scheduler import EngineMode, LeafAssignment, assign_gestures, step_mode
from .sync import (
    CadenceEstimate,
    CadenceTracker,
    INDETERMINATE_SYNC,
    PedalEvent,
    SyncState,
    sync_spread,
    update_sync_status,
)
from .telemetry import TelemetryHasher, TelemetryRecord

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> int:
    state = (state + _SPLITMIX_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, stream: int) -> int:
    """Independent child seed for one named stream of the run seed."""
    return _splitmix64((seed ^ (stream * _SPLITMIX_GAMMA)) & _MASK64)


class Engine:
    """Owns all mutable simulation state; advance with :meth:`tick`.

    Single-writer: one thread steps the engine and ingests events between
    ticks. The scenario runner does this inline; the live server does it
    from its tick thread with events handed over in arrival order.
    """

    def __init__(self, config: EngineConfig) -> None:
        self.config = config
        self.dt_s = config.dt_s
        self.tick_index = 0

        self.tracker = CadenceTracker(config.sync.window_s, config.sync.min_pulses)
        self.sync_state: SyncState = INDETERMINATE_SYNC
        self.mode = EngineMode()
        self.assignment: LeafAssignment | None = None

        self.rngs = [random.Random(derive_seed(config.seed, leaf))
                     for leaf in range(config.leaf_count)]
        jitter_rng = random.Random(derive_seed(config.seed, 0xF1A7))
        plant = config.plant
        gain = calibrate(
            LeafParams(plant.inertia, plant.stiffness, plant.damping,
                       1.0, plant.theta_max_rad), plant.v_max_mps)
        self.leaf_params = [
            LeafParams(plant.inertia, plant.stiffness, plant.damping, gain,
                       plant.theta_max_rad,
                       jitter_rng.uniform(-plant.jitter_span_frac,
                                          plant.jitter_span_frac))
            for _ in range(config.leaf_count)
        ]
        self.leaf_states = [LeafState() for _ in range(config.leaf_count)]
        self.steppers = [Stepper() for _ in range(config.leaf_count)]
        self.reservoir_wh = config.power.reservoir_initial_wh
        self.ledger = PowerLedger(0.0, 0.0, 1.0, self.reservoir_wh)

    # -- event ingestion (between ticks) --------------------------------

    def ingest(self, event: ScenarioEvent) -> None:
        if event.action == JOIN:
            self.tracker.join(event.biker_id)
        elif event.action == LEAVE:
            self.tracker.leave(event.biker_id)
        elif event.action == PEDAL:
            self.tracker.add(PedalEvent(event.biker_id, event.time_s))
        else:
            raise ValueError(f"unknown scenario action {event.action!r}")

    # -- one tick --------------------------------------------------------

    @property
    def now_s(self) -> float:
        """Simulated time the next tick will sample its inputs at."""
        return self.tick_index * self.dt_s

    def tick(self) -> TelemetryRecord:
        cfg = self.config
        now = self.now_s

        estimates = self.tracker.estimates(now)
        valid = [e for e in estimates if e.valid]
        active = [e for e in valid if e.rpm >= cfg.scheduler.activity_rpm]

        spread = sync_spread(valid) if len(valid) >= 2 else None
        self.sync_state = update_sync_status(self.sync_state, spread,
                                             self.dt_s, cfg.sync)
        self.mode = step_mode(self.mode, len(active), self.sync_state,
                              self.dt_s, cfg.scheduler)

        efforts = [min(e.rpm / cfg.scheduler.effort_full_rpm, 1.0) for e in active]
        self.assignment = assign_gestures(self.assignment, self.mode, active,
                                          efforts, self.dt_s, self.rngs,
                                          cfg.grammar)

        commands = []
        slewing = []
        for i, leaf in enumerate(self.assignment.leaves):
            target = target_waveform(leaf.params, leaf.phase_s)
            redirect = (leaf.params.interval_s > cfg.plant.pause_redirect_s
                        and leaf.phase_s > leaf.params.cycle_period_s)
            command = command_from_target(target, redirect)
            commands.append(command)
            slewing.append(self.steppers[i].step(command.stepper_angle_rad,
                                                 self.dt_s,
                                                 cfg.plant.stepper_slew_rad_s))

        demand_w = demand(commands, slewing, cfg.power)
        supply_w = supply_from_bikers(valid, cfg.power)
        scale, self.reservoir_wh = settle(supply_w, demand_w,
                                          self.reservoir_wh, self.dt_s,
                                          cfg.power)
        self.ledger = PowerLedger(supply_w, demand_w, scale, self.reservoir_wh)

        for i, command in enumerate(commands):
            v_eff = effective_airspeed(command.duty * scale,
                                       self.steppers[i].angle_rad,
                                       cfg.plant.v_max_mps)
            self.leaf_states[i] = step_leaf(self.leaf_states[i],
                                            self.leaf_params[i], v_eff,
                                            self.dt_s)

        record = TelemetryRecord(
            tick=self.tick_index,
            time_s=now,
            mode=self.mode.base.value,
            overlay=self.mode.overlay.kind.value if self.mode.overlay else None,
            deflections=tuple(s.deflection_frac for s in self.leaf_states),
            kinds=tuple(l.kind.value for l in self.assignment.leaves),
            duties=tuple(c.duty for c in commands),
            supply_w=supply_w,
            demand_w=demand_w,
            brownout_scale=scale,
            reservoir_wh=self.reservoir_wh,
            sync_status=self.sync_state.status.value,
            sync_spread=self.sync_state.spread_frac,
            active_bikers=len(active),
        )
        self.tick_index += 1
        return record

    # -- live-mode helpers -------------------------------------------------

    def snapshot_bikers(self, now_s: float) -> list[CadenceEstimate]:
        return self.tracker.estimates(now_s)


@dataclass
class RunSummary:
    """Aggregates of one scenario run, plus the telemetry content hash."""

    scenario: str
    duration_s: float
    ticks: int
    mode_dwell_s: dict[str, float] = field(default_factory=dict)
    overlay_counts: dict[str, int] = field(default_factory=dict)
    gesture_counts: dict[str, int] = field(default_factory=dict)
    supplied_wh: float = 0.0
    consumed_wh: float = 0.0
    final_reservoir_wh: float = 0.0
    telemetry_hash: str = ""

    def to_text(self) -> str:
        def fmt(d: dict) -> str:
            return " ".join(f"{k}={v:.2f}" if isinstance(v, float) else f"{k}={v}"
                            for k, v in sorted(d.items())) or "-"

        return "\n".join([
            f"scenario: {self.scenario}",
            f"duration_s: {self.duration_s}",
            f"ticks: {self.ticks}",
            f"mode_dwell_s: {fmt(self.mode_dwell_s)}",
            f"overlay_counts: {fmt(self.overlay_counts)}",
            f"gesture_counts: {fmt(self.gesture_counts)}",
            f"supplied_wh: {self.supplied_wh:.6f}",
            f"consumed_wh: {self.consumed_wh:.6f}",
            f"final_reservoir_wh: {self.final_reservoir_wh:.6f}",
            f"telemetry_hash: {self.telemetry_hash}",
        ])


def run_scenario(config: EngineConfig, scenario: Scenario,
                 name: str = "<scenario>") -> tuple[list[TelemetryRecord], RunSummary]:
    """Run the full pipeline over the scenario; returns telemetry + summary."""
    engine = Engine(config)
    n_ticks = round(scenario.duration_s * config.tick_hz)
    dt = config.dt_s

    records: list[TelemetryRecord] = []
    hasher = TelemetryHasher()
    summary = RunSummary(name, scenario.duration_s, n_ticks)

    events = scenario.events
    next_event = 0
    prev_overlay: str | None = None
    prev_kinds: tuple[str, ...] | None = None

    for k in range(n_ticks):
        now = k * dt
        while next_event < len(events) and events[next_event].time_s <= now:
            engine.ingest(events[next_event])
            next_event += 1
        record = engine.tick()
        records.append(record)
        hasher.update(record)

        summary.mode_dwell_s[record.mode] = (
            summary.mode_dwell_s.get(record.mode, 0.0) + dt)
        if record.overlay is not None and record.overlay != prev_overlay:
            summary.overlay_counts[record.overlay] = (
                summary.overlay_counts.get(record.overlay, 0) + 1)
        prev_overlay = record.overlay
        for i, kind in enumerate(record.kinds):
            if prev_kinds is None or prev_kinds[i] != kind:
                summary.gesture_counts[kind] = summary.gesture_counts.get(kind, 0) + 1
        prev_kinds = record.kinds
        summary.supplied_wh += record.supply_w * dt / 3600.0
        summary.consumed_wh += record.demand_w * record.brownout_scale * dt / 3600.0

    summary.final_reservoir_wh = engine.reservoir_wh
    summary.telemetry_hash = hasher.hexdigest()
    return records, summary


def replay_check(config: EngineConfig, scenario: Scenario) -> bool:
    """True iff two runs of the same scenario hash identically."""
    _, first = run_scenario(config, scenario)
    _, second = run_scenario(config, scenario)
    return first.telemetry_hash == second.telemetry_hash
