"""Scenario runner, telemetry integrity, replay, and the CLI."""

from __future__ import annotations

import dataclasses
import io
import json
import math
import subprocess
import sys
import time

import pytest

from pedaltree import (
    EngineConfig,
    load_scenario,
    parse_scenario,
    replay_check,
    run_scenario,
    telemetry_hash,
    write_csv,
    write_jsonl,
)
from pedaltree.telemetry import CSV_COLUMNS

from conftest import scenario_path

ALL_SCENARIOS = ["idle.scn", "solo_60rpm.scn", "solo_48rpm.scn",
                 "duel_sync.scn", "relay.scn"]

KINDS = {"Recruitment", "Motivational", "SocialInterrupt", "SocialReward"}
MODES = {"Idle", "Solo", "Multi"}
STATUSES = {"InSync", "OutOfSync", "Indeterminate"}


def run(name, **config_overrides):
    config = dataclasses.replace(EngineConfig(), **config_overrides)
    scenario = load_scenario(scenario_path(name))
    return run_scenario(config, scenario, name=name)


# -- running ------------------------------------------------------------------

def test_empty_scenario_idles_and_recruits():
    records, summary = run("idle.scn")
    assert all(r.mode == "Idle" for r in records)
    assert all(set(r.kinds) == {"Recruitment"} for r in records)
    # the reservoir actually moves the leaves
    assert max(r.deflections[0] for r in records) > 0.1
    assert summary.mode_dwell_s == {"Idle": pytest.approx(20.0)}


def test_one_record_per_tick_and_monotone():
    records, summary = run("duel_sync.scn")
    assert len(records) == 30 * 50
    assert [r.tick for r in records] == list(range(1500))
    assert summary.ticks == 1500


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_every_field_populated(name):
    records, _ = run(name)
    for r in records:
        assert r.mode in MODES
        assert r.overlay in (None, "Interrupt", "Reward")
        assert all(math.isfinite(d) for d in r.deflections)
        assert all(k in KINDS for k in r.kinds)
        assert all(0.0 <= d <= 1.0 for d in r.duties)
        assert math.isfinite(r.supply_w) and r.supply_w >= 0.0
        assert math.isfinite(r.demand_w) and r.demand_w >= 0.0
        assert 0.0 <= r.brownout_scale <= 1.0
        assert 0.0 <= r.reservoir_wh <= 5.0
        assert r.sync_status in STATUSES
        assert math.isfinite(r.sync_spread) and r.sync_spread >= 0.0
        assert r.active_bikers >= 0


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_no_nan_anywhere(name):
    records, _ = run(name)
    for r in records:
        for d in (*r.deflections, *r.duties, r.supply_w, r.demand_w,
                  r.brownout_scale, r.reservoir_wh, r.sync_spread):
            assert math.isfinite(d)


def test_defaults_never_brown_out_with_one_biker():
    records, _ = run("solo_48rpm.scn")
    assert all(r.brownout_scale == 1.0 for r in records)


def test_brownout_engages_without_reservoir():
    power = dataclasses.replace(EngineConfig().power, reservoir_initial_frac=0.0)
    records, _ = run("idle.scn", power=power)
    assert all(r.brownout_scale == 0.0 for r in records)
    assert all(r.deflections[0] == 0.0 or abs(r.deflections[0]) < 1e-9
               for r in records)


def test_energy_totals_balance():
    _, summary = run("duel_sync.scn")
    start = EngineConfig().power.reservoir_initial_wh
    drift = (summary.supplied_wh - summary.consumed_wh) - (
        summary.final_reservoir_wh - start)
    assert abs(drift) <= 60.0 * 0.02 / 3600.0 + 1e-9


# -- mode-graph coverage over the scenario suite --------------------------------

def test_scenario_suite_covers_every_transition():
    base_edges = set()
    overlay_events = set()
    for name in ALL_SCENARIOS:
        records, _ = run(name)
        prev = records[0]
        for r in records[1:]:
            if r.mode != prev.mode:
                base_edges.add((prev.mode, r.mode))
            if r.overlay != prev.overlay:
                if r.overlay is None:
                    kind = "expire"
                elif prev.overlay is None:
                    kind = f"start-{r.overlay}"
                else:
                    kind = f"preempt-{r.overlay}"
                overlay_events.add(kind)
            prev = r
    assert {("Idle", "Solo"), ("Solo", "Idle"), ("Solo", "Multi"),
            ("Multi", "Solo"), ("Idle", "Multi"), ("Multi", "Idle")} <= base_edges
    assert {"start-Interrupt", "start-Reward", "expire",
            "preempt-Interrupt"} <= overlay_events


# -- determinism ------------------------------------------------------------------

@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_replay_check_all_scenarios(name):
    scenario = load_scenario(scenario_path(name))
    assert replay_check(EngineConfig(), scenario)


def test_seed_changes_idle_runs():
    _, a = run("idle.scn")
    _, b = run("idle.scn", seed=1234)
    assert a.telemetry_hash != b.telemetry_hash


def test_pulse_perturbation_changes_hash():
    base = parse_scenario("duration = 10\njoin 1 0\nprofile 1 0:10:60\n")
    _, a = run_scenario(EngineConfig(), base)
    nudged = parse_scenario(
        "duration = 10\njoin 1 0\nprofile 1 0:5:60\npedal 1 5.02\nprofile 1 6:10:60\n")
    _, b = run_scenario(EngineConfig(), nudged)
    assert a.telemetry_hash != b.telemetry_hash


def test_faster_than_real_time():
    scenario = parse_scenario("duration = 600\njoin 1 0\nprofile 1 0:600:65\n")
    start = time.perf_counter()
    run_scenario(EngineConfig(), scenario)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0  # 10 simulated minutes


# -- output formats -----------------------------------------------------------------

def test_csv_output_shape():
    records, _ = run("idle.scn")
    buffer = io.StringIO()
    write_csv(records, buffer)
    lines = buffer.getvalue().strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == len(records) + 1
    assert all(len(line.split(",")) == len(CSV_COLUMNS) for line in lines[1:])


def test_jsonl_output_roundtrips():
    records, _ = run("idle.scn")
    buffer = io.StringIO()
    write_jsonl(records, buffer)
    lines = buffer.getvalue().strip().split("\n")
    assert len(lines) == len(records)
    first = json.loads(lines[0])
    assert first["tick"] == 0
    assert set(first) == {
        "tick", "time_s", "mode", "overlay", "deflections", "kinds", "duties",
        "supply_w", "demand_w", "brownout_scale", "reservoir_wh",
        "sync_status", "sync_spread", "active_bikers"}


def test_hash_covers_every_field():
    records, _ = run("duel_sync.scn")
    tampered = records[:-1] + [dataclasses.replace(records[-1], supply_w=1e9)]
    assert telemetry_hash(records) != telemetry_hash(tampered)


# -- CLI ----------------------------------------------------------------------------

def cli(*args):
    return subprocess.run([sys.executable, "-m", "pedaltree", *args],
                          capture_output=True, text=True, timeout=120)


def test_cli_run_prints_summary(tmp_path):
    out = tmp_path / "telemetry.csv"
    result = cli("run", scenario_path("duel_sync.scn"), "--out", str(out))
    assert result.returncode == 0
    assert "telemetry_hash:" in result.stdout
    assert out.read_text().startswith("tick,")


def test_cli_run_jsonl(tmp_path):
    out = tmp_path / "telemetry.jsonl"
    result = cli("run", scenario_path("idle.scn"), "--out", str(out), "--seed", "3")
    assert result.returncode == 0
    assert json.loads(out.read_text().splitlines()[0])["mode"] == "Idle"


def test_cli_replay_check():
    result = cli("replay-check", scenario_path("solo_48rpm.scn"))
    assert result.returncode == 0
    assert "ok" in result.stdout


def test_cli_rejects_bad_scenario(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("duration = 5\nwarp 1 0\n")
    result = cli("run", str(bad))
    assert result.returncode == 2
    assert "bad.scn:2" in result.stderr


def test_cli_rejects_bad_out_extension(tmp_path):
    result = cli("run", scenario_path("idle.scn"), "--out",
                 str(tmp_path / "telemetry.xml"))
    assert result.returncode == 2


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "engine.cfg"
    cfg.write_text("seed = 9\npower.reservoir_initial_frac = 0.0\n")
    result = cli("run", scenario_path("idle.scn"), "--config", str(cfg))
    assert result.returncode == 0
    assert "consumed_wh: 0.000000" in result.stdout  # idle-dark: nothing to spend
