"""Toolkit configuration loaded from ``telep_psim.toml``.

Lookup order: an explicit path, then ``$TELEP_PSIM_CONFIG``, then the first
``telep_psim.toml`` in the default config directories, then built-in defaults.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ImportError:
    import tomli as tomllib  # type: ignore

from .errors import InvalidInputError

CONFIG_FILENAME = "telep_psim.toml"
CONFIG_ENV_VAR = "TELEP_PSIM_CONFIG"

QUICK_DIVISOR = 20


def _expand_path(path: str | Path) -> Path:
    return Path(path).expanduser().resolve()


def _default_config_dirs() -> list[Path]:
    repo_root = Path(__file__).resolve().parents[2]
    return [
        Path.home() / ".config" / "telep_psim",
        repo_root / "config",
    ]


def _find_config(filename: str) -> Path | None:
    for base in _default_config_dirs():
        candidate = base / filename
        if candidate.exists():
            return candidate
    return None


def _load_toml(path: Path | None) -> dict[str, Any]:
    if not path or not path.exists():
        return {}
    with open(path, "rb") as f:
        return tomllib.load(f)


@dataclass
class RunDefaults:
    """Defaults for a single CLI run."""

    seed: int = 0
    budget: int = 64
    oracle: str = "honest"
    log_level: str = "WARNING"


@dataclass
class SimulationConfig:
    statevector_max_n: int = 6
    tolerance: float = 1e-9


@dataclass
class LightconeConfig:
    """Window divisors for the counting bounds and for the reduction."""

    counting_window_divisor: int = 4
    reduction_window_divisor: int = 8
    signaling_factor: int = 8


@dataclass
class FalsifyConfig:
    trials: int = 1000
    max_n: int = 8


@dataclass
class VerifyConfig:
    """Trial counts for the property suite, and how many processes may share them."""

    born_rule_instances: int = 100
    born_rule_pcliff_instances: int = 1000
    identity_trials: int = 1000
    reduction_random_instances: int = 1000
    reduction_random_L: int = 4
    lightcone_circuits: int = 100
    lightcone_n: int = 4096
    lightcone_max_ell: int = 8
    nonstabilizer_seeds: int = 1000
    uniformity_draws: int = 6000
    learning_trials: int = 1000
    word_problem_strings: int = 200
    word_problem_max_length: int = 32
    falsify_constant_trials: int = 1000
    falsify_honest_trials: int = 10000
    chi_square_alpha: float = 0.01
    workers: int = 0

    def quick(self) -> VerifyConfig:
        """Every count divided by ``QUICK_DIVISOR`` (at least 1); sizes stay put."""
        fixed = {
            "reduction_random_L",
            "lightcone_n",
            "lightcone_max_ell",
            "word_problem_max_length",
            "workers",
        }
        changes = {
            spec.name: max(1, getattr(self, spec.name) // QUICK_DIVISOR)
            for spec in fields(self)
            if spec.type in ("int", int) and spec.name not in fixed
        }
        changes["lightcone_n"] = min(self.lightcone_n, 512)
        changes["uniformity_draws"] = max(600, self.uniformity_draws // 10)
        return replace(self, **changes)


@dataclass
class ToolkitConfig:
    """Complete toolkit configuration."""

    run: RunDefaults = field(default_factory=RunDefaults)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    lightcone: LightconeConfig = field(default_factory=LightconeConfig)
    falsify: FalsifyConfig = field(default_factory=FalsifyConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    source: Optional[Path] = None

    @classmethod
    def from_dict(cls, data: dict[str, Any], source: Optional[Path] = None) -> ToolkitConfig:
        return cls(
            run=_section(RunDefaults, data.get("run", {})),
            simulation=_section(SimulationConfig, data.get("simulation", {})),
            lightcone=_section(LightconeConfig, data.get("lightcone", {})),
            falsify=_section(FalsifyConfig, data.get("falsify", {})),
            verify=_section(VerifyConfig, data.get("verify", {})),
            source=source,
        )

    @classmethod
    def from_toml(cls, config_path: Path) -> ToolkitConfig:
        path = _expand_path(config_path)
        if not path.exists():
            raise InvalidInputError(f"Config file not found: {path}")
        try:
            data = _load_toml(path)
        except tomllib.TOMLDecodeError as exc:
            raise InvalidInputError(f"Invalid TOML in {path}: {exc}") from exc
        return cls.from_dict(data, source=path)

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> ToolkitConfig:
        if config_path is None:
            env_path = os.environ.get(CONFIG_ENV_VAR)
            if env_path:
                config_path = Path(env_path)
            else:
                config_path = _find_config(CONFIG_FILENAME)
        if config_path is None:
            return cls()
        return cls.from_toml(config_path)


def _section(section_cls: type, data: Any) -> Any:
    if not isinstance(data, dict):
        raise InvalidInputError(f"[{section_cls.__name__}] must be a table")
    known = {spec.name: spec for spec in fields(section_cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise InvalidInputError(f"Unknown {section_cls.__name__} keys: {', '.join(unknown)}")
    defaults = section_cls()
    values: dict[str, Any] = {}
    for name, value in data.items():
        expected = type(getattr(defaults, name))
        if expected is float and isinstance(value, int):
            value = float(value)
        if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
            raise InvalidInputError(
                f"{section_cls.__name__}.{name} must be {expected.__name__}, got {value!r}"
            )
        values[name] = value
    return section_cls(**values)


_config: Optional[ToolkitConfig] = None


def get_config() -> ToolkitConfig:
    global _config
    if _config is None:
        _config = ToolkitConfig.load()
    return _config


def reload_config(config_path: Optional[Path] = None) -> ToolkitConfig:
    global _config
    _config = ToolkitConfig.load(config_path)
    return _config
