"""Exact degree sequences, stability checks and Green potentials for maps of P^2."""

import json

from ._dynstab import (
    CapExceeded,
    CrossCheckFailure,
    DomainError,
    fixed_point,
    green_samples,
    green_value,
    run_cli,
    sample_sphere,
    sweep,
)
from . import _dynstab

__all__ = [
    "CapExceeded",
    "CrossCheckFailure",
    "DomainError",
    "cross_validate",
    "degrees",
    "fixed_point",
    "green_samples",
    "green_value",
    "map_degrees",
    "run_cli",
    "sample_sphere",
    "sweep",
]


def degrees(t, N, degree_cap=64, conductor_cap=64):
    """Exact degree report for the family at rational t ("p/q")."""
    return json.loads(_dynstab.degree_report_json(str(t), N, degree_cap, conductor_cap))


def map_degrees(map, N, conductor=4, degree_cap=64):
    """Exact degree report for an explicit map such as "x^2, y^2, z^2"."""
    return json.loads(_dynstab.map_degree_report_json(map, N, conductor, degree_cap))


def cross_validate(t, N):
    """Stability predicate checked against exact degrees up to N."""
    return json.loads(_dynstab.cross_validate_json(str(t), N))
