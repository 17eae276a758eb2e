"""Leaf motion simulation and the gesture-target to actuator mapping.

Each leaf is modelled as a single damped rotational spring driven by the
aerodynamic torque of its fan column, with torque proportional to airspeed
squared. The aero gain is calibrated so full duty deflects the nominal
leaf exactly to its maximum; a per-leaf stiffness jitter (drawn once per
run) makes the three leaves respond slightly differently to identical
commands, the way flexible physical skeletons do. Steppers can rotate the
fans away from a leaf to dump airflow during long gesture pauses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Soft physical stops, as fractions of the calibrated maximum deflection.
DEFLECTION_MIN_FRAC = -0.05
DEFLECTION_MAX_FRAC = 1.1


class PlantFault(RuntimeError):
    """Simulated leaf state became non-finite; the run must abort."""


@dataclass(frozen=True)
class LeafParams:
    """Physical constants of one leaf. Simulation choices, not measurements."""

    inertia: float = 0.005       # kg*m^2
    stiffness: float = 0.5       # N*m/rad
    damping: float = 0.06        # N*m*s/rad
    aero_gain: float = 0.03125   # N*m/(m/s)^2, set by calibrate()
    theta_max_rad: float = 1.0
    jitter_frac: float = 0.0     # multiplicative stiffness offset, within +-10%

    def __post_init__(self) -> None:
        for name in ("inertia", "stiffness", "damping", "aero_gain", "theta_max_rad"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if abs(self.jitter_frac) > 0.1:
            raise ValueError(f"jitter_frac {self.jitter_frac} outside +-10%")

    @property
    def effective_stiffness(self) -> float:
        return self.stiffness * (1.0 + self.jitter_frac)


@dataclass(frozen=True)
class LeafState:
    theta_rad: float = 0.0
    omega_rad_s: float = 0.0
    deflection_frac: float = 0.0


@dataclass(frozen=True)
class ActuatorCommand:
    """Per-leaf command: four equal fan duties plus the redirection angle."""

    fan_duty: tuple[float, float, float, float]
    stepper_angle_rad: float = 0.0  # 0 aims at the leaf, pi/2 dumps the airflow

    def __post_init__(self) -> None:
        if any(not 0.0 <= d <= 1.0 for d in self.fan_duty):
            raise ValueError(f"fan duties {self.fan_duty} outside [0, 1]")
        if len(set(self.fan_duty)) != 1:
            raise ValueError("the four fans of a leaf carry equal duty")
        if not -math.pi / 2 <= self.stepper_angle_rad <= math.pi / 2:
            raise ValueError(f"stepper angle {self.stepper_angle_rad} outside +-pi/2")

    @property
    def duty(self) -> float:
        return self.fan_duty[0]


def calibrate(params: LeafParams, v_max_mps: float = 4.0) -> float:
    """Aero gain making full duty deflect the nominal leaf to theta_max."""
    return params.stiffness * params.theta_max_rad / v_max_mps**2


def effective_airspeed(duty: float, stepper_angle_rad: float,
                       v_max_mps: float = 4.0) -> float:
    """Airspeed actually reaching the leaf after stepper redirection."""
    return v_max_mps * duty * max(0.0, math.cos(stepper_angle_rad))


def step_leaf(state: LeafState, params: LeafParams, v_eff_mps: float,
              dt_s: float) -> LeafState:
    """One semi-implicit Euler step of the damped rotational spring.

    Torque balance: inertia * theta'' = gain * v^2 - k_eff * theta - c * theta'.
    The leaf meets soft stops slightly outside [0, theta_max]; hitting one
    clamps the angle and zeroes the velocity.
    """
    k = params.effective_stiffness
    torque = (params.aero_gain * v_eff_mps * v_eff_mps
              - k * state.theta_rad - params.damping * state.omega_rad_s)
    omega = state.omega_rad_s + dt_s * torque / params.inertia
    theta = state.theta_rad + dt_s * omega
    lo = DEFLECTION_MIN_FRAC * params.theta_max_rad
    hi = DEFLECTION_MAX_FRAC * params.theta_max_rad
    if theta < lo:
        theta, omega = lo, 0.0
    elif theta > hi:
        theta, omega = hi, 0.0
    if not (math.isfinite(theta) and math.isfinite(omega)):
        raise PlantFault(
            f"leaf state diverged: theta={theta}, omega={omega}, "
            f"v_eff={v_eff_mps}, dt={dt_s}")
    return LeafState(theta, omega, theta / params.theta_max_rad)


def command_from_target(target_frac: float, redirect: bool = False) -> ActuatorCommand:
    """Feedforward inverse of the calibrated steady state.

    Steady deflection grows with duty squared, so duty is the square root
    of the wanted fraction. ``redirect`` points the stepper away from the
    leaf (requested by the engine during gesture pauses longer than the
    redirect threshold, letting the leaf relax faster).
    """
    duty = math.sqrt(min(max(target_frac, 0.0), 1.0))
    angle = math.pi / 2 if redirect else 0.0
    return ActuatorCommand((duty, duty, duty, duty), angle)


class Stepper:
    """Integrates the physical stepper angle toward the commanded one."""

    def __init__(self, angle_rad: float = 0.0) -> None:
        self.angle_rad = angle_rad

    def step(self, target_rad: float, dt_s: float, slew_rad_s: float) -> bool:
        """Move toward the target; True while the motor is actually slewing."""
        delta = target_rad - self.angle_rad
        if delta == 0.0:
            return False
        limit = slew_rad_s * dt_s
        if abs(delta) <= limit:
            self.angle_rad = target_rad
        else:
            self.angle_rad += limit if delta > 0.0 else -limit
        return True
