"""Per-tick telemetry: records, CSV/JSONL writers, and the content hash.

One record per tick, every field populated. The 64-bit content hash is
computed over a canonical binary packing of each record (exact float
bits), so two runs hash equal exactly when their telemetry is
bit-identical.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from typing import IO, Iterable

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "tick", "time_s", "mode", "overlay",
    "defl_0", "defl_1", "defl_2",
    "kind_0", "kind_1", "kind_2",
    "duty_0", "duty_1", "duty_2",
    "supply_w", "demand_w", "brownout_scale", "reservoir_wh",
    "sync_status", "sync_spread", "active_bikers",
]


@dataclass(frozen=True)
class TelemetryRecord:
    tick: int
    time_s: float
    mode: str
    overlay: str | None
    deflections: tuple[float, float, float]
    kinds: tuple[str, str, str]
    duties: tuple[float, float, float]  # commanded, before brownout
    supply_w: float
    demand_w: float
    brownout_scale: float
    reservoir_wh: float
    sync_status: str
    sync_spread: float
    active_bikers: int

    def pack(self) -> bytes:
        """Canonical binary form; the basis of the telemetry hash."""
        head = struct.pack("<qd", self.tick, self.time_s)
        labels = "\x00".join(
            [self.mode, self.overlay or "", *self.kinds, self.sync_status]
        ).encode()
        floats = struct.pack(
            "<12d",
            *self.deflections, *self.duties,
            self.supply_w, self.demand_w, self.brownout_scale,
            self.reservoir_wh, self.sync_spread, 0.0,
        )
        return head + labels + b"\x00" + floats + struct.pack("<q", self.active_bikers)

    def to_csv_row(self) -> list[str]:
        return [
            str(self.tick), repr(self.time_s), self.mode, self.overlay or "",
            *(repr(d) for d in self.deflections),
            *self.kinds,
            *(repr(d) for d in self.duties),
            repr(self.supply_w), repr(self.demand_w),
            repr(self.brownout_scale), repr(self.reservoir_wh),
            self.sync_status, repr(self.sync_spread), str(self.active_bikers),
        ]

    def to_json_obj(self) -> dict:
        return {
            "tick": self.tick,
            "time_s": self.time_s,
            "mode": self.mode,
            "overlay": self.overlay,
            "deflections": list(self.deflections),
            "kinds": list(self.kinds),
            "duties": list(self.duties),
            "supply_w": self.supply_w,
            "demand_w": self.demand_w,
            "brownout_scale": self.brownout_scale,
            "reservoir_wh": self.reservoir_wh,
            "sync_status": self.sync_status,
            "sync_spread": self.sync_spread,
            "active_bikers": self.active_bikers,
        }


class TelemetryHasher:
    """Streaming 64-bit hash over packed records."""

    def __init__(self) -> None:
        self._hash = hashlib.blake2b(digest_size=8)

    def update(self, record: TelemetryRecord) -> None:
        self._hash.update(record.pack())

    def hexdigest(self) -> str:
        return self._hash.hexdigest()


def telemetry_hash(records: Iterable[TelemetryRecord]) -> str:
    hasher = TelemetryHasher()
    for record in records:
        hasher.update(record)
    return hasher.hexdigest()


def write_csv(records: Iterable[TelemetryRecord], fh: IO[str]) -> None:
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for record in records:
        fh.write(",".join(record.to_csv_row()) + "\n")


def write_jsonl(records: Iterable[TelemetryRecord], fh: IO[str]) -> None:
    for record in records:
        fh.write(json.dumps(record.to_json_obj(), separators=(",", ":")) + "\n")
