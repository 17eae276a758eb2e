"""Scenario files: scripted biker traces the engine replays deterministically.

Plain text, ``#`` comments. One ``duration = <seconds>`` line plus event
lines, one per line::

    duration = 25

    join 1 0            # biker 1 appears at t=0
    join 2 0
    pedal 1 0.5         # one crank revolution at t=0.5
    profile 1 0:10:60 10:20:72    # piecewise-constant cadence segments
    profile 2 0:10:90 10:20:72
    leave 2 24

``profile <biker> <start>:<end>:<rpm>...`` expands each segment into pedal
pulses spaced exactly 60/rpm seconds apart, starting at the segment start
(rpm 0 produces no pulses). Events may appear in any order in the file;
the expanded, merged list must give every biker a join before their first
pulse and strictly increasing pulse times.
"""

from __future__ import annotations

from dataclasses import dataclass


class ScenarioError(ValueError):
    """Malformed scenario file; the message carries line/field diagnostics."""


JOIN = "join"
LEAVE = "leave"
PEDAL = "pedal"


@dataclass(frozen=True)
class ScenarioEvent:
    time_s: float
    action: str  # join | leave | pedal
    biker_id: int


@dataclass(frozen=True)
class Scenario:
    duration_s: float
    events: tuple[ScenarioEvent, ...]  # time-sorted, profiles expanded


def expand_profile(biker_id: int, start_s: float, end_s: float, rpm: float,
                   where: str = "<profile>") -> list[ScenarioEvent]:
    """Pedal pulses at exact 60/rpm spacing from the segment start."""
    if end_s <= start_s:
        raise ScenarioError(f"{where}: segment end {end_s} not after start {start_s}")
    if rpm < 0:
        raise ScenarioError(f"{where}: negative rpm {rpm}")
    if rpm == 0:
        return []
    spacing = 60.0 / rpm
    pulses = []
    k = 0
    while True:
        t = start_s + k * spacing
        if t >= end_s:
            break
        pulses.append(ScenarioEvent(t, PEDAL, biker_id))
        k += 1
    return pulses


def _parse_int(raw: str, what: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ScenarioError(f"{where}: {what} {raw!r} is not an integer") from None


def _parse_float(raw: str, what: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ScenarioError(f"{where}: {what} {raw!r} is not a number") from None
    if value < 0:
        raise ScenarioError(f"{where}: {what} must be >= 0, got {value}")
    return value


def parse_scenario(text: str, name: str = "<scenario>") -> Scenario:
    duration_s: float | None = None
    events: list[ScenarioEvent] = []

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{name}:{lineno}"

        if "=" in line:
            key, raw_value = (part.strip() for part in line.split("=", 1))
            if key != "duration":
                raise ScenarioError(f"{where}: unknown setting {key!r}")
            duration_s = _parse_float(raw_value, "duration", where)
            continue

        parts = line.split()
        verb = parts[0]
        if verb in (JOIN, LEAVE, PEDAL):
            if len(parts) != 3:
                raise ScenarioError(f"{where}: expected '{verb} <biker> <time>'")
            biker = _parse_int(parts[1], "biker id", where)
            t = _parse_float(parts[2], "time", where)
            events.append(ScenarioEvent(t, verb, biker))
        elif verb == "profile":
            if len(parts) < 3:
                raise ScenarioError(
                    f"{where}: expected 'profile <biker> <start>:<end>:<rpm>...'")
            biker = _parse_int(parts[1], "biker id", where)
            for segment in parts[2:]:
                fields = segment.split(":")
                if len(fields) != 3:
                    raise ScenarioError(
                        f"{where}: segment {segment!r} is not <start>:<end>:<rpm>")
                start = _parse_float(fields[0], "segment start", where)
                end = _parse_float(fields[1], "segment end", where)
                rpm = _parse_float(fields[2], "segment rpm", where)
                events.extend(expand_profile(biker, start, end, rpm, where))
        else:
            raise ScenarioError(f"{where}: unknown event {verb!r}")

    if duration_s is None:
        raise ScenarioError(f"{name}: missing 'duration = <seconds>' line")

    # Stable sort keeps same-time events in file order.
    events.sort(key=lambda e: e.time_s)
    _validate(events, name)
    return Scenario(duration_s, tuple(events))


def _validate(events: list[ScenarioEvent], name: str) -> None:
    joined: set[int] = set()
    last_pulse: dict[int, float] = {}
    for event in events:
        if event.action == JOIN:
            if event.biker_id in joined:
                raise ScenarioError(
                    f"{name}: biker {event.biker_id} joins twice (t={event.time_s})")
            joined.add(event.biker_id)
        elif event.action == LEAVE:
            if event.biker_id not in joined:
                raise ScenarioError(
                    f"{name}: biker {event.biker_id} leaves without joining "
                    f"(t={event.time_s})")
            joined.discard(event.biker_id)
        else:
            if event.biker_id not in joined:
                raise ScenarioError(
                    f"{name}: pedal for biker {event.biker_id} at t={event.time_s} "
                    f"before join")
            prev = last_pulse.get(event.biker_id)
            if prev is not None and event.time_s <= prev:
                raise ScenarioError(
                    f"{name}: pulses for biker {event.biker_id} not strictly "
                    f"increasing at t={event.time_s}")
            last_pulse[event.biker_id] = event.time_s


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read(), name=path)
