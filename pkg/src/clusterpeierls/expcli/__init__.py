"""Batch experiment runner: JSON configs in, CSV + manifest + SVG out."""
from .config import ExperimentConfig, parse_config, validate
from .runner import run_experiment
from .svg import render_curves

__all__ = ["ExperimentConfig", "parse_config", "validate", "run_experiment", "render_curves"]
