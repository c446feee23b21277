"""Sensor placement by level-set coverage and intermittent diffusion."""

from ._core import (
    ConfigError,
    Error,
    InfeasibleError,
    IoError,
    Scenario,
    coverage,
    evaluate,
    heaviside_reg,
    initial_placement,
    preset_text,
    presets,
    solve,
)

__all__ = [
    "ConfigError",
    "Error",
    "InfeasibleError",
    "IoError",
    "Scenario",
    "coverage",
    "evaluate",
    "heaviside_reg",
    "initial_placement",
    "preset_text",
    "presets",
    "solve",
]
