"""Deterministic control engine and simulator for a pedal-powered kinetic
leaf installation: pedal pulses in, motion gestures and leaf deflections out.
"""

from .config import ConfigError, EngineConfig, PlantConfig, load_config, parse_config
from .engine import Engine, RunSummary, derive_seed, replay_check, run_scenario
from .grammar import (
    GestureKind,
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
from .plant import (
    ActuatorCommand,
    LeafParams,
    LeafState,
    PlantFault,
    Stepper,
    calibrate,
    command_from_target,
    effective_airspeed,
    step_leaf,
)
from .power import PowerConfig, PowerLedger, demand, settle, supply_from_bikers
from .scenario import Scenario, ScenarioError, ScenarioEvent, load_scenario, parse_scenario
from .scheduler import (
    EngineMode,
    LeafAssignment,
    LeafGesture,
    ModeKind,
    Overlay,
    OverlayKind,
    SchedulerConfig,
    assign_gestures,
    step_mode,
)
from .sync import (
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
from .telemetry import TelemetryRecord, telemetry_hash, write_csv, write_jsonl

__version__ = "0.1.0"
