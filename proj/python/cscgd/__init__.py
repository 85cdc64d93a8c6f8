"""Constrained stochastic compositional gradient descent and queuing examples."""

import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    NumericalError,
    hessian_min_eigenvalue,
    mann_kendall,
    mm1_optimal_mu,
    preset_names,
    rate_fit,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "NumericalError",
    "config_hash",
    "evaluate",
    "example1_fstar",
    "hessian_min_eigenvalue",
    "mann_kendall",
    "mm1_optimal_mu",
    "preset_info",
    "preset_names",
    "rate_fit",
    "run",
    "run_experiment",
    "solve",
]


def run(config, write_files=False):
    """Run an experiment from a dict with the config-file keys."""
    return run_experiment(json.dumps(config), write_files)


def _text(overrides):
    if overrides is None:
        return ""
    return overrides if isinstance(overrides, str) else json.dumps(overrides)


def preset_info(name, overrides=None):
    """Dimensions, bounds, default C_ell and documented constants of a preset."""
    return _core.preset_info(name, _text(overrides))


def solve(preset, overrides=None, **kwargs):
    """One solver run; keyword arguments a, b, c, regime, horizon, gamma, c_ell, seed, x0."""
    return _core.solve(preset, _text(overrides), **kwargs)


def evaluate(preset, x, overrides=None, batch=100000, seed=1):
    """Monte Carlo F(x), Q(x) with standard error of F."""
    return _core.evaluate(preset, _text(overrides), x, batch, seed)


def example1_fstar(overrides=None):
    """(F*, x*) of the wired M/G/1 example."""
    return _core.example1_fstar(_text(overrides))


def config_hash(config):
    return _core.config_hash(_text(config))
