"""Exact computations with Milnor-Witt K-theory presentations over finite local rings."""

from .errors import MwktError, TooLarge, UsageError
from .linalg import AbelianGroupStructure, fp_group, smith_normal_form
from .rings import parse_ring_spec

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupStructure",
    "MwktError",
    "TooLarge",
    "UsageError",
    "fp_group",
    "parse_ring_spec",
    "smith_normal_form",
]
