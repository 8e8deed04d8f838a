"""Python access to the super-time-stepping solver core."""

from __future__ import annotations

import json

from ._core import (
    CONE_SLOPE,
    PINCH_RATE_CONSTANT,
    ConfigError,
    Error,
    InvalidArgument,
    collapse_reference,
    default_config_text,
    heat_convergence,
    normalize_config_text,
    residual_blowup_time,
    stability_cfl_limit,
    stability_polynomial,
)
from . import _core

__all__ = [
    "CONE_SLOPE",
    "PINCH_RATE_CONSTANT",
    "ConfigError",
    "Error",
    "InvalidArgument",
    "collapse_reference",
    "config_text",
    "default_config_text",
    "heat_convergence",
    "normalize_config_text",
    "residual_blowup_time",
    "run",
    "stability_cfl_limit",
    "stability_polynomial",
    "verify_monotone",
]


def config_text(problem: str = "semilinear_heat", **keys) -> str:
    """Config text for `problem` with `keys` applied on top of the defaults."""
    lines = ["format_version = 1", f"problem = {problem}"]
    lines += [f"{k} = {v}" for k, v in keys.items()]
    return normalize_config_text("\n".join(lines) + "\n")


def run(config: str | None = None, *, output_dir: str = "", **keys) -> tuple[dict, dict]:
    """Run a config (text, or built from keys). Returns (report, series columns)."""
    if config is None:
        config = config_text(**keys)
    elif keys:
        raise TypeError("pass either config text or keys, not both")
    report, series = _core.run_text(config, output_dir)
    return json.loads(report), series


def verify_monotone(family: str, s: int, samples: list[str] | None = None) -> dict:
    """Exact monotonicity certificate; samples are rationals such as "1/8"."""
    return json.loads(_core.certificate_text(family, s, samples or []))
