"""Engine configuration: defaults, validation, and the key/value file format.

A config file is plain text, one ``key = value`` per line, ``#`` comments.
Top-level keys are ``tick_hz`` and ``seed``; every tunable of the grammar,
sync, scheduler, power, and plant blocks is reachable through its dotted
section name, e.g.::

    tick_hz = 50
    seed = 42
    grammar.interrupt_interval_s = 2.5
    sync.out_spread = 0.2
    power.reservoir_initial_frac = 0.0
    plant.stiffness = 0.6

Unknown keys and malformed values fail loudly with the line number.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from .grammar import GrammarConfig
from .power import PowerConfig
from .scheduler import SchedulerConfig
from .sync import SyncConfig


class ConfigError(ValueError):
    """Invalid configuration file or field value."""


@dataclass(frozen=True)
class PlantConfig:
    """Leaf constants plus the airflow and stepper policy knobs."""

    inertia: float = 0.005
    stiffness: float = 0.5
    damping: float = 0.06
    theta_max_rad: float = 1.0
    v_max_mps: float = 4.0
    jitter_span_frac: float = 0.1      # per-leaf stiffness jitter, uniform +- this
    stepper_slew_rad_s: float = math.pi
    pause_redirect_s: float = 1.0      # dump airflow during pauses longer than this


@dataclass(frozen=True)
class EngineConfig:
    tick_hz: int = 50
    leaf_count: int = 3  # fixed: the installation has three leaves
    seed: int = 42
    grammar: GrammarConfig = field(default_factory=GrammarConfig)
    sync: SyncConfig = field(default_factory=SyncConfig)
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    power: PowerConfig = field(default_factory=PowerConfig)
    plant: PlantConfig = field(default_factory=PlantConfig)

    def __post_init__(self) -> None:
        if self.tick_hz < 20:
            raise ConfigError(f"tick_hz {self.tick_hz} below the minimum of 20")
        if self.leaf_count != 3:
            raise ConfigError("leaf_count is fixed at 3")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")

    @property
    def dt_s(self) -> float:
        return 1.0 / self.tick_hz


_SECTIONS = {
    "grammar": GrammarConfig,
    "sync": SyncConfig,
    "scheduler": SchedulerConfig,
    "power": PowerConfig,
    "plant": PlantConfig,
}
_TOP_LEVEL = {"tick_hz": int, "leaf_count": int, "seed": int}


def _parse_value(raw: str, target_type: type, where: str):
    raw = raw.strip()
    try:
        if target_type is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return target_type(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot read {raw!r} as {target_type.__name__}") from None


def parse_config(text: str, name: str = "<config>") -> EngineConfig:
    top: dict[str, int] = {}
    sections: dict[str, dict[str, object]] = {s: {} for s in _SECTIONS}

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{name}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw_line.strip()!r}")
        key, raw_value = (part.strip() for part in line.split("=", 1))
        if "." in key:
            section_name, field_name = key.split(".", 1)
            if section_name not in _SECTIONS:
                raise ConfigError(f"{where}: unknown section {section_name!r}")
            section_type = _SECTIONS[section_name]
            fields = {f.name: f.type for f in dataclasses.fields(section_type)}
            if field_name not in fields:
                raise ConfigError(f"{where}: unknown key {key!r}")
            ftype = {"float": float, "int": int, "bool": bool}.get(fields[field_name], float)
            sections[section_name][field_name] = _parse_value(raw_value, ftype, where)
        elif key in _TOP_LEVEL:
            top[key] = _parse_value(raw_value, _TOP_LEVEL[key], where)
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")

    try:
        return EngineConfig(
            **top,
            grammar=GrammarConfig(**sections["grammar"]),
            sync=SyncConfig(**sections["sync"]),
            scheduler=SchedulerConfig(**sections["scheduler"]),
            power=PowerConfig(**sections["power"]),
            plant=PlantConfig(**sections["plant"]),
        )
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def load_config(path: str) -> EngineConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), name=path)


def dump_config(config: EngineConfig) -> str:
    """Render a config back to the file format, defaults included."""
    lines = [f"tick_hz = {config.tick_hz}", f"seed = {config.seed}"]
    for section_name in _SECTIONS:
        block = getattr(config, section_name)
        lines.append("")
        for f in dataclasses.fields(block):
            lines.append(f"{section_name}.{f.name} = {getattr(block, f.name)}")
    return "\n".join(lines) + "\n"
