"""Symmetry, reduction and hodograph tools for the modified shallow-water system."""

import json

from ._core import (
    ConfigError,
    DomainError,
    Error,
    FluidParams,
    __version__,
    catalog_ids,
    entry_residual,
    galilean_convergence_order,
    integrate_case_i,
    invert,
    max_invariance_defect,
    normalize_g1,
    orbit_equivalent_g1,
    run_campaign,
)


def run(config):
    """Run a campaign given as a dict or JSON string; returns the parsed report."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(run_campaign(text))


__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "FluidParams",
    "__version__",
    "catalog_ids",
    "entry_residual",
    "galilean_convergence_order",
    "integrate_case_i",
    "invert",
    "max_invariance_defect",
    "normalize_g1",
    "orbit_equivalent_g1",
    "run",
    "run_campaign",
]
