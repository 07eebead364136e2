"""Compatible reconfiguration of non-crossing red-blue perfect matchings."""
from .geom import Color, GeometryError, Line, Point
from .hamsandwich import find_ham_sandwich_cut, ham_sandwich_matching
from .matching import (
    BichromaticPointSet,
    BRMatching,
    chi,
    compatible,
    crossing_list,
    is_chromatic_cut,
    validate_matching,
)
from .reconfig import avoid_cut, connect, connect_pair, next_matching, verify_sequence

__all__ = [
    "BRMatching", "BichromaticPointSet", "Color", "GeometryError", "Line", "Point",
    "avoid_cut", "chi", "compatible", "connect", "connect_pair", "crossing_list",
    "find_ham_sandwich_cut", "ham_sandwich_matching", "is_chromatic_cut",
    "next_matching", "validate_matching", "verify_sequence",
]
