"""G-typical Witt vectors of the integers with coefficients in an abelian group."""

from .config import BOUNDS, Bounds
from .errors import GwittError
from .group import FiniteGroup, Subgroup, build_group, named_group
from .truncation import TruncationSet
from .witt import AbPresentation, WittElement, build_fp, build_free, witt_group

__all__ = [
    "BOUNDS",
    "Bounds",
    "GwittError",
    "FiniteGroup",
    "Subgroup",
    "build_group",
    "named_group",
    "TruncationSet",
    "AbPresentation",
    "WittElement",
    "build_fp",
    "build_free",
    "witt_group",
]

__version__ = "0.1.0"
