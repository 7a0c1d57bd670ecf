"""Finite, exact tools for densities, syndetic structure, partition regularity
of equations and the equivalence of coefficient strings."""

from .errors import (
    EmptyWindowError,
    HypercombError,
    ResourceLimitExceeded,
    SpecSyntaxError,
    UnsupportedSetError,
    VerificationError,
)
from .intsets import BlockFamily, EventuallyPeriodic, Explicit, WindowSample, parse_set_spec, render, window

__version__ = "0.1.0"

__all__ = [
    "BlockFamily", "EventuallyPeriodic", "Explicit", "WindowSample",
    "parse_set_spec", "render", "window",
    "HypercombError", "SpecSyntaxError", "EmptyWindowError", "UnsupportedSetError",
    "ResourceLimitExceeded", "VerificationError",
]
