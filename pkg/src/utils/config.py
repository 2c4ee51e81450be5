"""
Configuration settings for the oscillatory quadrature tools.

Precedence: built-in default < environment (.env included) < config file < CLI flag.
"""
import os
from typing import Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from common import Levin1dConfig, Levin2dConfig, OracleConfig, RunSettings
from src.core.errors import ConfigurationError

# Load environment variables from .env file
load_dotenv()

# Logging configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Worker pool cap for integrate_mesh
DEFAULT_THREADS = os.cpu_count() or 1

# config-file key -> environment variable
ENV_KEYS = {
    "k": "OSC_K",
    "ell": "OSC_ELL",
    "eps_svd": "OSC_EPS_SVD",
    "residual_tol": "OSC_RESIDUAL_TOL",
    "tol1d": "OSC_TOL1D",
    "n_points_1d": "OSC_N_POINTS_1D",
    "max_depth_1d": "OSC_MAX_DEPTH_1D",
    "max_depth_2d": "OSC_MAX_DEPTH_2D",
    "oracle_gl_points": "OSC_ORACLE_GL_POINTS",
    "oracle_tol": "OSC_ORACLE_TOL",
    "oracle_max_depth": "OSC_ORACLE_MAX_DEPTH",
    "oracle_2d_max_omega": "OSC_ORACLE_2D_MAX_OMEGA",
    "threads": "OSC_THREADS",
}

_LEVIN1D_FIELDS = {"n_points_1d": "n_points", "tol1d": "tol", "max_depth_1d": "max_depth", "eps_svd": "eps_svd"}
_LEVIN2D_FIELDS = {"k": "k", "ell": "ell", "eps_svd": "eps_svd", "residual_tol": "residual_tol", "max_depth_2d": "max_depth"}
_ORACLE_FIELDS = {
    "oracle_gl_points": "gl_points",
    "oracle_tol": "tol",
    "oracle_max_depth": "max_depth",
    "oracle_2d_max_omega": "max_omega_2d",
}


def env_overrides() -> Dict[str, str]:
    """Settings present in the environment, keyed by config-file name."""
    return {key: os.environ[var] for key, var in ENV_KEYS.items() if os.environ.get(var, "") != ""}


def read_config_file(path: str) -> Dict[str, str]:
    """
    Parse a key = value config file.

    Args:
        path: Path to the config file

    Returns:
        Raw string values keyed by setting name

    Raises:
        FileNotFoundError: If path does not exist
        ConfigurationError: On unknown keys or keys without a value
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"config file not found: {path}")
    values = dotenv_values(path)
    unknown = sorted(set(values) - set(ENV_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown config keys in {path}: {', '.join(unknown)}")
    missing = sorted(k for k, v in values.items() if v is None or v == "")
    if missing:
        raise ConfigurationError(f"config keys without a value in {path}: {', '.join(missing)}")
    return dict(values)


def _pick(flat: Mapping[str, str], fields: Mapping[str, str]) -> Dict[str, str]:
    return {model_key: flat[key] for key, model_key in fields.items() if key in flat}


def build_settings(flat: Mapping[str, object]) -> RunSettings:
    """Validate flat settings into a RunSettings; raises pydantic.ValidationError on bad values."""
    cfg1d = Levin1dConfig(**_pick(flat, _LEVIN1D_FIELDS))
    levin = Levin2dConfig(cfg1d=cfg1d, **_pick(flat, _LEVIN2D_FIELDS))
    oracle = OracleConfig(**_pick(flat, _ORACLE_FIELDS))
    return RunSettings(levin=levin, oracle=oracle, threads=flat.get("threads", DEFAULT_THREADS))


def load_settings(config_path: Optional[str] = None, overrides: Optional[Mapping[str, object]] = None) -> RunSettings:
    """
    Merge environment, config file and CLI overrides.

    Args:
        config_path: Optional key = value file
        overrides: CLI values keyed by config-file name; None entries are ignored

    Returns:
        Validated RunSettings
    """
    flat: Dict[str, object] = dict(env_overrides())
    if config_path:
        flat.update(read_config_file(config_path))
    flat.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_settings(flat)
