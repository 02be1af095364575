"""
Config Loader - Layered run configuration for finite-qm

Loads and merges configuration from:
1. Defaults (config/defaults.yaml) - always loaded
2. Profile overrides (config/profiles/{name}.yaml) - optional
3. Command-line flags - applied by `build_run_config`, they win over both

The profile defaults to $FINITE_QM_PROFILE and the config directory to
$FINITE_QM_CONFIG_DIR when those are set.

Usage:
    from config_loader import load_config, build_run_config

    config = load_config(profile="high_precision")
    run = build_run_config(config, command="reduce", spectrum_path="spec.txt")
"""

import logging
import math
import os
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from .errors import FiniteQMError

logger = logging.getLogger(__name__)

# Cache for merged configurations, keyed by (config dir, profile)
_CONFIG_CACHE: Dict[Tuple[str, str], Dict[str, Any]] = {}

DEFAULT_CONFIG_DIR = Path(__file__).parent / "config"
MIN_PRECISION_BITS = 53


class Command(str, Enum):
    REDUCE = "reduce"
    EVOLVE = "evolve"
    PERIOD = "period"
    BORN = "born"
    FIDELITY = "fidelity"
    TORUS = "torus"
    RANDSPEC = "randspec"
    STATS = "stats"


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    SVG = "svg"


def config_dir() -> Path:
    override = os.getenv("FINITE_QM_CONFIG_DIR")
    return Path(override) if override else DEFAULT_CONFIG_DIR


def load_config(profile: Optional[str] = None) -> Dict[str, Any]:
    """
    Load defaults and deep merge an optional profile on top.

    Args:
        profile: Profile name (loads profiles/{profile}.yaml); falls back to
            $FINITE_QM_PROFILE

    Returns:
        Merged configuration dict

    Raises:
        FileNotFoundError: If defaults.yaml or the profile file is missing
        yaml.YAMLError: If YAML parsing fails
    """
    profile = profile or os.getenv("FINITE_QM_PROFILE") or None
    directory = config_dir()
    cache_key = (str(directory), profile or "defaults")

    if cache_key in _CONFIG_CACHE:
        logger.debug(f"Returning cached config for {cache_key}")
        return _CONFIG_CACHE[cache_key]

    merged = _load_yaml_file(directory / "defaults.yaml")
    if profile:
        profile_path = directory / "profiles" / f"{profile}.yaml"
        if not profile_path.exists():
            raise FileNotFoundError(f"Profile config not found: {profile_path}")
        merged = _deep_merge(merged, _load_yaml_file(profile_path))
        logger.debug(f"Merged profile: {profile}")

    _CONFIG_CACHE[cache_key] = merged
    logger.debug(f"Cached config for {cache_key}")
    return merged


def _load_yaml_file(file_path: Path) -> Dict[str, Any]:
    if not file_path.exists():
        raise FileNotFoundError(f"Config file not found: {file_path}")

    with open(file_path, "r", encoding="utf-8") as f:
        content = yaml.safe_load(f)

    if content is None:
        logger.warning(f"Empty YAML file: {file_path}")
        return {}
    return content


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Merge override into a copy of base, recursing into nested dicts."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def clear_cache():
    """Clear the configuration cache (tests, or after editing YAML at runtime)."""
    _CONFIG_CACHE.clear()
    logger.debug("Config cache cleared")


# =============================================================================
# RUN CONFIG
# =============================================================================

@dataclass(frozen=True)
class RunConfig:
    """Everything one command invocation needs, after defaults, profile and flags."""

    command: Command
    spectrum_path: Optional[Path] = None
    state_path: Optional[Path] = None
    analysis_path: Optional[Path] = None
    out_path: Optional[Path] = None
    tol: float = 1e-12
    max_den: int = 10 ** 9
    precision: int = 128
    steps: Optional[int] = None
    start: Optional[int] = None
    count: int = 36
    cap: int = 10 ** 6
    workers: int = 1
    format: OutputFormat = OutputFormat.CSV
    seed: int = 0
    dimension: int = 3
    bound: int = 50
    eps_bound: int = 12
    dims: Tuple[int, ...] = field(default=(2, 3, 4, 5, 6, 7, 8))
    trials: int = 100

    def __post_init__(self):
        if not (isinstance(self.tol, (int, float)) and math.isfinite(self.tol) and self.tol > 0):
            raise InvalidConfig(f"tol must be finite and > 0, got {self.tol!r}")
        if self.precision < MIN_PRECISION_BITS:
            raise InvalidConfig(f"precision must be >= {MIN_PRECISION_BITS} bits, got {self.precision}")
        if self.cap < 1:
            raise InvalidConfig(f"cap must be >= 1, got {self.cap}")
        if self.max_den < 1:
            raise InvalidConfig(f"max_den must be >= 1, got {self.max_den}")
        if self.count < 1:
            raise InvalidConfig(f"count must be >= 1, got {self.count}")
        if self.workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {self.workers}")
        if self.dimension < 1 or self.bound < 1 or self.eps_bound < 1 or self.trials < 1:
            raise InvalidConfig("dimension, bound, eps_bound and trials must be >= 1")
        if not self.dims or any(d < 1 for d in self.dims):
            raise InvalidConfig(f"dims must be a nonempty list of positive dimensions, got {self.dims}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["command"] = self.command.value
        data["format"] = self.format.value
        for key in ("spectrum_path", "state_path", "analysis_path", "out_path"):
            if data[key] is not None:
                data[key] = str(data[key])
        return data


def build_run_config(config: Dict[str, Any], command: str, **flags: Any) -> RunConfig:
    """
    Combine a merged config dict with command-line flags (flags set to None are ignored).

    Raises:
        InvalidConfig: On an unknown command or format, or a violated invariant
    """
    numeric = config.get("numeric", {})
    enumeration = config.get("enumeration", {})
    randspec = config.get("randspec", {})
    stats = config.get("stats", {})

    values: Dict[str, Any] = {
        "tol": numeric.get("tol", 1e-12),
        "max_den": numeric.get("max_den", 10 ** 9),
        "precision": numeric.get("precision", 128),
        "cap": enumeration.get("cap", 10 ** 6),
        "workers": enumeration.get("workers", 1),
        "format": config.get("output", {}).get("format", "csv"),
        "seed": config.get("random", {}).get("seed", 0),
        "count": config.get("fidelity", {}).get("count", 36),
        "dimension": randspec.get("dimension", 3),
        "eps_bound": randspec.get("eps_bound", 12),
        "dims": tuple(stats.get("dims", (2, 3, 4, 5, 6, 7, 8))),
        "trials": stats.get("trials", 100),
    }
    # the randspec and stats studies share one --bound flag
    values["bound"] = randspec.get("bound", 50) if command == Command.RANDSPEC.value else stats.get("bound", 50)

    for key, value in flags.items():
        if value is not None:
            values[key] = value

    for key in ("spectrum_path", "state_path", "analysis_path", "out_path"):
        if values.get(key) is not None:
            values[key] = Path(values[key])
    if values.get("dims") is not None:
        values["dims"] = tuple(int(d) for d in values["dims"])

    try:
        values["command"] = Command(command)
        values["format"] = OutputFormat(values["format"])
        values["tol"] = float(values["tol"])
        for key in ("max_den", "precision", "cap", "workers", "seed", "count",
                    "dimension", "bound", "eps_bound", "trials"):
            values[key] = int(values[key])
    except ValueError as e:
        raise InvalidConfig(str(e)) from e

    return RunConfig(**values)


# =============================================================================
# EXCEPTIONS
# =============================================================================

class InvalidConfig(FiniteQMError, ValueError):
    """Raised when merged configuration or flags violate a RunConfig invariant."""
    pass
