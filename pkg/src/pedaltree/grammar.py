"""Motion-gesture grammar: recipes per gesture family and the target waveform.

Every gesture is described by three kinetic variables: how far the leaf
swings (a fraction of its calibrated maximum deflection), how long one
rise-and-return cycle takes, and how long the leaf rests between cycles.
A movement reads as "smooth" when the rest between cycles is effectively
zero.

Four families are generated from these variables:

* recruitment   -- erratic attention-grabbing swings while nobody pedals
* motivational  -- cycle rhythm locked to a biker's pedalling cadence
* social interrupt -- abrupt full swings with long pauses (rhythm break)
* social reward -- a small flutter that keeps quickening

All numeric recipe values live in :class:`GrammarConfig` so operators can
retune them from the engine configuration file without touching code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from random import Random

# Below this inter-cycle rest the motion is perceived as one continuous
# movement; one tick at the nominal 50 Hz rate is 0.02 s, so 0.05 s gives
# margin above tick granularity.
SMOOTH_INTERVAL_EPS_S = 0.05


class GestureKind(Enum):
    RECRUITMENT = "Recruitment"
    MOTIVATIONAL = "Motivational"
    SOCIAL_INTERRUPT = "SocialInterrupt"
    SOCIAL_REWARD = "SocialReward"


@dataclass(frozen=True)
class PeriodRamp:
    """Linear change of the cycle period over a fixed duration."""

    start_period_s: float
    end_period_s: float
    ramp_duration_s: float

    def __post_init__(self) -> None:
        if self.start_period_s <= 0 or self.end_period_s <= 0:
            raise ValueError("ramp endpoint periods must be positive")
        if self.ramp_duration_s <= 0:
            raise ValueError("ramp duration must be positive")

    def period_at(self, elapsed_s: float) -> float:
        frac = min(max(elapsed_s, 0.0), self.ramp_duration_s) / self.ramp_duration_s
        return self.start_period_s + (self.end_period_s - self.start_period_s) * frac


@dataclass(frozen=True)
class GestureParams:
    """One actuation recipe: swing extent, cycle duration, rest between cycles."""

    amplitude_frac: float
    cycle_period_s: float
    interval_s: float
    period_ramp: PeriodRamp | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.amplitude_frac <= 1.0:
            raise ValueError(f"amplitude_frac {self.amplitude_frac} outside [0, 1]")
        if not self.cycle_period_s > 0.0:
            raise ValueError(f"cycle_period_s {self.cycle_period_s} must be > 0")
        if self.interval_s < 0.0:
            raise ValueError(f"interval_s {self.interval_s} must be >= 0")

    @property
    def cycle_len_s(self) -> float:
        """Duration of one full cycle including the rest after it."""
        return self.cycle_period_s + self.interval_s


def is_smooth(params: GestureParams) -> bool:
    return params.interval_s < SMOOTH_INTERVAL_EPS_S


@dataclass(frozen=True)
class GrammarConfig:
    """Numeric recipe values for each gesture family.

    The qualitative shape of each family is fixed; these numbers are the
    tunable part (amplitude/period ranges, fixed recipes, clamp bands).
    """

    recruitment_amplitude_min: float = 0.7
    recruitment_amplitude_max: float = 1.0
    recruitment_period_min_s: float = 0.5
    recruitment_period_max_s: float = 1.0

    motivational_period_min_s: float = 0.4
    motivational_period_max_s: float = 4.0
    motivational_amplitude_floor: float = 0.1
    motivational_rest_rpm: float = 20.0

    interrupt_amplitude: float = 1.0
    interrupt_period_s: float = 0.6
    interrupt_interval_s: float = 2.0

    reward_amplitude: float = 0.2
    reward_period_start_s: float = 1.2
    reward_period_end_s: float = 0.4
    reward_ramp_s: float = 5.0


DEFAULT_GRAMMAR = GrammarConfig()


def recruitment_params(rng: Random, cfg: GrammarConfig = DEFAULT_GRAMMAR) -> GestureParams:
    """Draw one erratic swing: big amplitude, fast cycle, no rest.

    Each call consumes two draws from ``rng``; callers hold one stream per
    leaf so the leaves rise differently and runs replay bit-identically.
    """
    amplitude = rng.uniform(cfg.recruitment_amplitude_min, cfg.recruitment_amplitude_max)
    period = rng.uniform(cfg.recruitment_period_min_s, cfg.recruitment_period_max_s)
    return GestureParams(amplitude, period, 0.0)


def motivational_params(
    cadence_rpm: float,
    effort_frac: float,
    cfg: GrammarConfig = DEFAULT_GRAMMAR,
) -> GestureParams:
    """One leaf cycle per pedal revolution, swing extent scaled by effort.

    Below the rest threshold the leaf holds still (zero amplitude); the
    period still mirrors the cadence so the rhythm is correct the moment
    pedalling resumes.
    """
    if not math.isfinite(cadence_rpm) or cadence_rpm < 0.0:
        raise ValueError(f"cadence_rpm {cadence_rpm} must be finite and >= 0")
    if cadence_rpm == 0.0:
        period = cfg.motivational_period_max_s
    else:
        period = min(max(60.0 / cadence_rpm, cfg.motivational_period_min_s),
                     cfg.motivational_period_max_s)
    if cadence_rpm < cfg.motivational_rest_rpm:
        return GestureParams(0.0, period, 0.0)
    amplitude = min(max(effort_frac, cfg.motivational_amplitude_floor), 1.0)
    return GestureParams(amplitude, period, 0.0)


def social_interrupt_params(cfg: GrammarConfig = DEFAULT_GRAMMAR) -> GestureParams:
    """Rhythm-breaking slam: full swing, fast cycle, long rest."""
    return GestureParams(cfg.interrupt_amplitude, cfg.interrupt_period_s,
                         cfg.interrupt_interval_s)


def social_reward_params(elapsed_s: float, cfg: GrammarConfig = DEFAULT_GRAMMAR) -> GestureParams:
    """Quickening flutter: small amplitude, period ramping down, no rest."""
    ramp = PeriodRamp(cfg.reward_period_start_s, cfg.reward_period_end_s, cfg.reward_ramp_s)
    return GestureParams(cfg.reward_amplitude, ramp.period_at(elapsed_s), 0.0, period_ramp=ramp)


def target_waveform(params: GestureParams, phase_s: float) -> float:
    """Target deflection fraction at ``phase_s`` seconds into the gesture.

    Half-sine arch from rest up to the amplitude and back within one cycle
    period, then flat zero through the rest interval; continuous everywhere
    and periodic with period ``cycle_len_s``.
    """
    tau = math.fmod(phase_s, params.cycle_len_s)
    if tau < 0.0:
        tau += params.cycle_len_s
    if tau <= params.cycle_period_s:
        value = params.amplitude_frac * math.sin(math.pi * tau / params.cycle_period_s)
        # sin(pi) underflows to a tiny negative; keep the contract [0, amplitude]
        return value if value > 0.0 else 0.0
    return 0.0
