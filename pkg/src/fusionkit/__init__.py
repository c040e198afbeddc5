"""Saturated fusion systems of finite permutation groups."""

from .catalog import from_selector
from .errors import CapacityError, FusionKitError, InputError, InternalError
from .fusion import (FusionSystem, check_saturation, focal, fusion_from_group, generated_system,
                     hyperfocal, inner_system, is_saturated, op_core_F, system_from_assignments, z_F)
from .fusionops import is_isomorphic, product_system, quotient_system, restrict_system
from .linking import build_linking, mu_kappa_report
from .perm import Perm
from .permgrp import PermGroup, sylow_subgroup
from .plattice import build_lattice
from .reduction import factorize, is_constrained, is_reduced, reduce
from .search import search_reduced

__version__ = "0.1.0"

__all__ = [
    "Perm", "PermGroup", "sylow_subgroup", "build_lattice", "FusionSystem",
    "fusion_from_group", "generated_system", "inner_system", "system_from_assignments",
    "check_saturation", "is_saturated", "focal", "hyperfocal", "op_core_F", "z_F",
    "is_isomorphic", "product_system", "quotient_system", "restrict_system",
    "is_reduced", "is_constrained", "reduce", "factorize", "search_reduced",
    "build_linking", "mu_kappa_report", "from_selector",
    "FusionKitError", "InputError", "CapacityError", "InternalError",
]
