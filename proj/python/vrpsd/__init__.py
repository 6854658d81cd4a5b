"""Exact solver for the vehicle routing problem with scenario demands."""

from ._vrpsd import (
    Instance,
    InstanceError,
    generate,
    parse_instance,
    read_instance,
    route_recourse,
    solve,
    verify,
)

__all__ = [
    "Instance",
    "InstanceError",
    "generate",
    "parse_instance",
    "read_instance",
    "route_recourse",
    "solve",
    "verify",
]
