"""Flat ``key = value`` run configuration with command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError


def _float_list(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in str(text).split(",") if s.strip()]
    return tuple(float(s) for s in items)


def _int(text) -> int:
    value = float(text) if isinstance(text, str) and ("e" in text.lower() or "." in text) else text
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"not an integer: {text!r}")
        return int(value)
    return int(value)


@dataclass(frozen=True)
class RunConfig:
    h0_gev: float = 0.769e-42
    omega_d0: float = 0.27
    omega_b0: float = 0.03
    omega_vac0: float = 0.70
    delta: float = 0.06
    mass_gev: float = 0.938
    dark_mass_gev: float = 0.938
    a_start: float = 0.5
    a_end: float = 2.0
    n_samples: int = 61
    n_traj: int = 10_000
    n_steps: int = 1000
    dt: float = 0.01
    seed: int = 1
    vc_profile: str = "constant"
    sweep_axis: str = "delta"
    sweep_grid: tuple[float, ...] = ()
    out_path: str = ""
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    def resolved(self) -> dict[str, Any]:
        """Fully-resolved configuration as plain JSON-friendly values."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out

    def to_text(self) -> str:
        """Render as a config file that :func:`load_config` reads back identically."""
        lines = []
        for key, value in self.resolved().items():
            if isinstance(value, list):
                value = ",".join(repr(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


_PARSERS = {
    f.name: (
        _float_list if f.name == "sweep_grid"
        else _int if f.type == "int"
        else float if f.type == "float"
        else str
    )
    for f in fields(RunConfig)
}
KEYS = tuple(_PARSERS)


def parse_value(key: str, raw, where: str = "") -> Any:
    if key not in _PARSERS:
        raise ConfigError(f"{where}unknown key {key!r}")
    try:
        return _PARSERS[key](raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}bad value for {key!r}: {raw!r} ({exc})") from None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{source}:{lineno}: "
        if "=" not in body:
            raise ConfigError(f"{where}expected 'key = value', got {line.strip()!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        values[key] = parse_value(key, raw, where)
    return values


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (highest priority)."""
    values: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {str(path)!r}: {exc.strerror}") from None
        values.update(parse_config_text(text, str(path)))
    for key, raw in (overrides or {}).items():
        values[key] = parse_value(key, raw, "flag: ") if isinstance(raw, str) else raw
    return RunConfig(**values)
