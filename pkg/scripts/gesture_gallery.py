#!/usr/bin/env python3
"""Render each gesture family as an ASCII strip of simulated leaf motion.

Runs a single calibrated leaf against each recipe for a few seconds and
prints the deflection trace, so the families' signatures (erratic rise,
cadence mirror, angry slam, quickening flutter) can be eyeballed without
any UI.
"""

from __future__ import annotations

from random import Random

from pedaltree import (
    LeafParams,
    LeafState,
    calibrate,
    command_from_target,
    effective_airspeed,
    motivational_params,
    recruitment_params,
    social_interrupt_params,
    social_reward_params,
    step_leaf,
    target_waveform,
)

DT = 0.02
BARS = " .:-=+*#%@"


def simulate(param_fn, seconds=8.0, label=""):
    params_src = param_fn()
    leaf = LeafParams(aero_gain=calibrate(LeafParams(), 4.0))
    state = LeafState()
    t = phase = 0.0
    current = next(params_src)
    trace = []
    while t < seconds:
        phase += DT
        if phase >= current.cycle_len_s:
            phase -= current.cycle_len_s
            current = next(params_src)
        target = target_waveform(current, phase)
        duty = command_from_target(target).duty
        state = step_leaf(state, leaf, effective_airspeed(duty, 0.0, 4.0), DT)
        trace.append(state.deflection_frac)
        t += DT
    # downsample to terminal width
    step = max(1, len(trace) // 100)
    chars = [BARS[min(int(max(d, 0.0) * (len(BARS) - 1)), len(BARS) - 1)]
             for d in trace[::step]]
    print(f"{label:14s} |{''.join(chars)}|")


def constant(params):
    def gen():
        while True:
            yield params
    return gen


def recruitment_stream():
    rng = Random(7)
    while True:
        yield recruitment_params(rng)


def reward_stream():
    t = 0.0
    while True:
        p = social_reward_params(t)
        yield p
        t += p.cycle_len_s


def main() -> None:
    print("leaf deflection over 8 s (space = rest, @ = full swing)\n")
    simulate(lambda: recruitment_stream(), label="recruitment")
    simulate(constant(motivational_params(60.0, 0.8)), label="motivational")
    simulate(constant(social_interrupt_params()), label="interrupt")
    simulate(lambda: reward_stream(), label="reward")


if __name__ == "__main__":
    main()
