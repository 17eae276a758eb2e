#!/usr/bin/env python3
"""Sweep biker cadence against the power budget and print the margins.

Shows why one casual rider carries the whole installation: worst-case
demand (all fans flat out, steppers slewing) against the supply curve,
plus how long the reservoir alone can run idle recruitment.
"""

from __future__ import annotations

import dataclasses

from pedaltree import EngineConfig, load_scenario, parse_scenario, run_scenario
from pedaltree.power import PowerConfig


def main() -> None:
    power = PowerConfig()
    worst = power.worst_case_total_w(3)
    print(f"worst-case demand: 3 leaves x {power.worst_case_leaf_w:.2f} W = {worst:.2f} W")
    print(f"per-leaf budget:   {power.leaf_budget_w:.2f} W")
    print()
    print(f"{'rpm':>5} {'supply W':>9} {'margin W':>9}  brownout?")
    for rpm in (0, 10, 20, 27, 30, 40, 48, 60, 80, 100, 120):
        supply = min(max(power.biker_coeff_w_per_rpm * rpm, 0.0), power.biker_cap_w)
        margin = supply - worst
        note = "no" if margin >= 0 else "reservoir-assisted"
        print(f"{rpm:5d} {supply:9.2f} {margin:+9.2f}  {note}")

    # how long does a full reservoir run idle recruitment?
    config = EngineConfig(power=dataclasses.replace(power, reservoir_initial_frac=1.0))
    scenario = parse_scenario("duration = 120\n")
    records, summary = run_scenario(config, scenario, name="idle-drain")
    drained = config.power.reservoir_capacity_wh - summary.final_reservoir_wh
    rate = drained / (scenario.duration_s / 3600.0)
    print()
    print(f"idle recruitment draw: {rate:.2f} W average "
          f"(full {config.power.reservoir_capacity_wh:.1f} Wh reservoir lasts "
          f"~{config.power.reservoir_capacity_wh / rate * 60:.0f} min)")


if __name__ == "__main__":
    main()
