"""Exact-arithmetic certification of nilpotent orbit pairs and weak fans."""

from ._weakfan import (
    __version__,
    cones_intersect,
    fan_build,
    fan_check,
    orbit_check,
    run,
    weight_filtration,
)

__all__ = [
    "__version__",
    "cones_intersect",
    "fan_build",
    "fan_check",
    "orbit_check",
    "run",
    "weight_filtration",
]
