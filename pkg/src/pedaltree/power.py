"""Human power supply, electrical demand, reservoir, and brownout scaling.

The installation runs entirely on pedalling. Each of the three leaves is
agitated by four 1.68 W fans plus a 0.5 W redirection stepper (while it
slews) and 0.3 W of controller overhead, which keeps the per-leaf draw
under its 9 W budget and the whole installation (22.56 W worst case) under
what a single casual biker produces (40-60 W). A small energy reservoir
banks surplus so the idle recruitment behaviour can run between riders;
when supply and reservoir together cannot cover demand, all duties scale
down proportionally instead of dropping leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .plant import ActuatorCommand
from .sync import CadenceEstimate


@dataclass(frozen=True)
class PowerConfig:
    fan_power_w: float = 1.68
    fans_per_leaf: int = 4
    leaf_budget_w: float = 9.0
    stepper_power_w: float = 0.5
    controller_overhead_w: float = 0.3
    # Linear cadence-to-watts model pinned so 60 rpm produces 50 W, the
    # middle of the 40-60 W band a casual biker sustains.
    biker_coeff_w_per_rpm: float = 50.0 / 60.0
    biker_cap_w: float = 60.0
    reservoir_capacity_wh: float = 5.0
    reservoir_initial_frac: float = 0.5

    def __post_init__(self) -> None:
        if self.worst_case_leaf_w > self.leaf_budget_w:
            raise ValueError(
                f"worst-case leaf draw {self.worst_case_leaf_w} W exceeds the "
                f"{self.leaf_budget_w} W leaf budget")
        if not 0.0 <= self.reservoir_initial_frac <= 1.0:
            raise ValueError("reservoir_initial_frac outside [0, 1]")

    @property
    def worst_case_leaf_w(self) -> float:
        """All fans at full duty, stepper slewing, controller on."""
        return (self.fans_per_leaf * self.fan_power_w + self.stepper_power_w
                + self.controller_overhead_w)

    def worst_case_total_w(self, leaf_count: int = 3) -> float:
        return leaf_count * self.worst_case_leaf_w

    @property
    def reservoir_initial_wh(self) -> float:
        return self.reservoir_capacity_wh * self.reservoir_initial_frac


DEFAULT_POWER = PowerConfig()


@dataclass(frozen=True)
class PowerLedger:
    """One tick of supply/demand accounting."""

    supply_w: float
    demand_w: float
    brownout_scale: float  # 1 = fully powered; 0 = nothing to spend (idle-dark)
    reservoir_wh: float


def supply_from_bikers(cadences: Iterable[CadenceEstimate],
                       cfg: PowerConfig = DEFAULT_POWER) -> float:
    """Total watts the current riders produce, each capped individually."""
    total = 0.0
    for estimate in cadences:
        if not estimate.valid:
            continue
        total += min(max(cfg.biker_coeff_w_per_rpm * estimate.rpm, 0.0), cfg.biker_cap_w)
    return total


def demand(commands: Sequence[ActuatorCommand], steppers_slewing: Sequence[bool],
           cfg: PowerConfig = DEFAULT_POWER) -> float:
    """Watts the commanded actuation would draw, before any brownout."""
    total = 0.0
    for command, slewing in zip(commands, steppers_slewing):
        for duty in command.fan_duty:
            total += duty * cfg.fan_power_w
        if slewing:
            total += cfg.stepper_power_w
        total += cfg.controller_overhead_w
    return total


def settle(supply_w: float, demand_w: float, reservoir_wh: float, dt_s: float,
           cfg: PowerConfig = DEFAULT_POWER) -> tuple[float, float]:
    """Balance one tick of energy; returns (brownout scale, new reservoir).

    Surplus charges the reservoir up to capacity. A deficit drains it; if
    the reservoir cannot cover the whole tick, duties scale to what the
    live supply affords and the reservoir pins at zero. Scale 0 means the
    installation has nothing to spend at all.
    """
    if dt_s <= 0.0:
        raise ValueError("dt_s must be positive")
    surplus_w = supply_w - demand_w
    if surplus_w >= 0.0:
        reservoir = min(cfg.reservoir_capacity_wh, reservoir_wh + surplus_w * dt_s / 3600.0)
        return 1.0, reservoir
    deficit_wh = -surplus_w * dt_s / 3600.0
    if reservoir_wh >= deficit_wh:
        return 1.0, reservoir_wh - deficit_wh
    scale = supply_w / demand_w if demand_w > 0.0 else 1.0
    return scale, 0.0
