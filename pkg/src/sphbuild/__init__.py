"""Exact spherical Coxeter complexes and buildings, convexity and complete reducibility."""

from .building import (
    ApartmentChart,
    WMetricBuilding,
    apartment_containing,
    are_opposite,
    enumerate_apartments,
    fixed_subcomplex,
    flag_building,
    join,
    preset,
    rank1_building,
    thin_building,
    verify_wd_axioms,
)
from .complex import Subcomplex, coxeter_complex
from .convexity import convex_hull, hull2, is_convex
from .coxeter import CoxeterMatrix, build_system, named_system
from .credu import Mode, common_levi_sphere, complete_reducibility, decompose, opposites_in
from .errors import InvariantViolation

__all__ = [
    "ApartmentChart", "CoxeterMatrix", "InvariantViolation", "Mode", "Subcomplex", "WMetricBuilding",
    "apartment_containing", "are_opposite", "build_system", "common_levi_sphere", "complete_reducibility",
    "convex_hull", "coxeter_complex", "decompose", "enumerate_apartments", "fixed_subcomplex", "flag_building",
    "hull2", "is_convex", "join", "named_system", "opposites_in", "preset", "rank1_building", "thin_building",
    "verify_wd_axioms",
]
