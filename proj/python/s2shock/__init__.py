"""Python bindings for the s2shock core library."""

import json as _json

from . import _s2shock
from ._s2shock import (
    S2ShockError,
    bound_constant,
    bound_exponent,
    betas,
    eta,
    origin_table,
    profile_residual,
    to_phys,
    to_riemann,
    w1d,
    w1d_deriv,
    w2d,
    w2d_deriv,
)

__all__ = [
    "S2ShockError",
    "bound_constant",
    "bound_exponent",
    "betas",
    "config_hash",
    "default_config",
    "eta",
    "origin_table",
    "profile_residual",
    "resolve_config",
    "run",
    "run_experiment",
    "sweep",
    "to_phys",
    "to_riemann",
    "w1d",
    "w1d_deriv",
    "w2d",
    "w2d_deriv",
]


def _dump(config):
    return _json.dumps(config or {})


def default_config():
    """The fully resolved default experiment config."""
    return _json.loads(_s2shock.default_config_json())


def resolve_config(config):
    """Overlay a partial config on the defaults. Unknown keys raise ValueError."""
    return _json.loads(_s2shock.resolve_config_json(_dump(config)))


def config_hash(config):
    return _s2shock.config_hash(_dump(config))


def run(config=None):
    """Run in memory and return {"summary": ..., "samples": [...]}."""
    return _json.loads(_s2shock.run_json(_dump(config)))


def run_experiment(config, out_dir):
    """Run and write the usual output files into out_dir; returns the summary."""
    return _json.loads(_s2shock.run_experiment_json(_dump(config), str(out_dir)))


def sweep(config, out_dir):
    """Run the cross product of config["sweep"]; one row dict per run."""
    return _json.loads(_s2shock.sweep_json(_dump(config), str(out_dir)))
