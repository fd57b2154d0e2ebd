"""Flat key = value configuration with exact rational alpha weights.

Rationals are written "num/den" so they survive the round-trip; alpha and
n_list are comma-separated.  Unknown keys raise ConfigError naming the key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .graph import RayParams


@dataclass
class RunConfig:
    N: int = 3
    alpha: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    seed: int = 20260826
    replicas: int = 10_000
    length: int = 1_000
    n_list: tuple[int, ...] = (100, 1_000, 10_000)
    T: float = 1.0
    s: float = 0.0
    x_ray: int = 1
    x_radius: float = 0.0
    output_dir: str = "artifacts"
    workers: int = 1

    def ray_params(self) -> RayParams:
        try:
            return RayParams(self.N, self.alpha)
        except ValueError as exc:
            raise ConfigError(f"alpha: {exc}") from exc

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "alpha": ",".join(str(a) for a in self.alpha),
            "seed": self.seed,
            "replicas": self.replicas,
            "length": self.length,
            "n_list": ",".join(str(n) for n in self.n_list),
            "T": self.T,
            "s": self.s,
            "x_ray": self.x_ray,
            "x_radius": self.x_radius,
            "output_dir": self.output_dir,
            "workers": self.workers,
        }


def _parse_fraction(text: str, key: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: bad rational {text!r}") from exc


_INT_KEYS = {"N", "seed", "replicas", "length", "x_ray", "workers"}
_FLOAT_KEYS = {"T", "s", "x_radius"}


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _INT_KEYS:
            try:
                setattr(cfg, key, int(value))
            except ValueError as exc:
                raise ConfigError(f"{key}: expected integer, got {value!r}") from exc
        elif key in _FLOAT_KEYS:
            try:
                setattr(cfg, key, float(value))
            except ValueError as exc:
                raise ConfigError(f"{key}: expected number, got {value!r}") from exc
        elif key == "alpha":
            cfg.alpha = tuple(_parse_fraction(part, "alpha") for part in value.split(","))
        elif key == "n_list":
            try:
                cfg.n_list = tuple(int(part) for part in value.split(","))
            except ValueError as exc:
                raise ConfigError(f"n_list: expected integers, got {value!r}") from exc
        elif key == "output_dir":
            cfg.output_dir = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    cfg.ray_params()  # validates N and alpha together
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return parse_config(p.read_text())
