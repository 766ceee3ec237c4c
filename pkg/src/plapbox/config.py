"""Flat key = value scenario configuration for the CLI."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .grids import DEFAULT_GRID_N


class ConfigError(ValueError):
    """Configuration failed to parse or validate."""


# config-file / CLI key -> dataclass attribute
KEY_TO_ATTR = {
    "p": "p",
    "N": "N",
    "q_exp": "q_exp",
    "lambda": "lam",
    "rho": "rho",
    "r_star": "r_star",
    "R_circ": "R_circ",
    "weight": "weight",
    "grid_n": "grid_n",
    "tol": "tol",
    "damping": "damping",
    "max_iter": "max_iter",
    "delta": "delta",
    "M": "big_m",
    "directions": "directions",
    "samples_per_axis": "samples_per_axis",
    "strategy": "strategy",
    "out": "out",
}

_INT_KEYS = {"N", "grid_n", "max_iter", "directions", "samples_per_axis"}
_STR_KEYS = {"weight", "strategy", "out"}


@dataclass
class ScenarioConfig:
    p: float = 2.0
    N: int = 3
    q_exp: float | None = None
    lam: float | None = None
    rho: float | None = None
    r_star: float | None = None
    R_circ: float | None = None
    weight: str = "constant:1.0"
    grid_n: int = DEFAULT_GRID_N
    tol: float = 1e-10
    damping: float = 1.0
    max_iter: int = 10_000
    delta: float | None = None
    big_m: float | None = None
    directions: int | None = None
    samples_per_axis: int = 256
    strategy: str = "circumscribed-ball"
    out: str | None = None

    def validate(self) -> None:
        if not self.p > 1:
            raise ConfigError(f"p must exceed 1, got {self.p}")
        if self.N < 2:
            raise ConfigError(f"N must be an integer > 1, got {self.N}")
        if self.q_exp is not None and not 1.0 < self.q_exp < self.p:
            raise ConfigError(f"q_exp must lie in (1, p), got {self.q_exp}")
        if self.lam is not None and self.lam <= 0:
            raise ConfigError("lambda must be positive")
        for key in ("rho", "r_star", "R_circ", "delta", "big_m"):
            val = getattr(self, key)
            if val is not None and val <= 0:
                raise ConfigError(f"{key} must be positive, got {val}")
        if self.r_star is not None and self.R_circ is not None and self.r_star > self.R_circ:
            raise ConfigError("r_star cannot exceed R_circ")
        if self.rho is None and self.r_star is None:
            raise ConfigError("either rho or r_star is required")
        if self.grid_n < 3:
            raise ConfigError("grid_n must be at least 3")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise ConfigError("damping must lie in (0, 1]")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.samples_per_axis < 2:
            raise ConfigError("samples_per_axis must be at least 2")
        if self.strategy not in ("circumscribed-ball", "convex-domain"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.directions is not None and self.directions < 1:
            raise ConfigError("directions must be positive")
        _split_weight_spec(self.weight)

    def to_dict(self) -> dict:
        attr_to_key = {attr: key for key, attr in KEY_TO_ATTR.items()}
        out = {}
        for f in fields(self):
            out[attr_to_key[f.name]] = getattr(self, f.name)
        return out


def _split_weight_spec(spec: str) -> tuple[str, str]:
    spec = spec.strip()
    if ":" in spec:
        kind, _, rest = spec.partition(":")
        kind = kind.strip().lower()
        if kind not in ("constant", "csv", "named"):
            raise ConfigError(f"unknown weight kind {kind!r} in {spec!r}")
        return kind, rest.strip()
    try:
        float(spec)
    except ValueError:
        raise ConfigError(
            f"weight spec {spec!r} is not 'constant:<v>', 'csv:<path>', 'named:<name>' or a number"
        ) from None
    return "constant", spec


def _coerce(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"value {raw!r} for key {key!r} is not a number") from None


def load_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    values: dict[str, object] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KEY_TO_ATTR:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = raw if key in _STR_KEYS else _coerce(key, raw)
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ScenarioConfig:
    """Merge defaults <- config file <- CLI overrides into a validated config."""
    cfg = ScenarioConfig()
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in KEY_TO_ATTR:
                raise ConfigError(f"unknown configuration key {key!r}")
            setattr(cfg, KEY_TO_ATTR[key], value)
    cfg.validate()
    return cfg
