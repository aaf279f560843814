"""Exact positivity computations on split projective bundles."""

from .bundle_model import (
    NOT_PSEF,
    BaseGeometry,
    BundleClass,
    BundleModel,
    Stratum,
    anticanonical,
    is_big,
    is_nef,
    is_psef,
    min_multiplicity,
    nef_codim,
    non_nef_table,
    positivity_cone,
    top_degree,
    zariski,
)
from .polycone import Cone
from .ratlp import LinearProgram, solve_lp, verify_certificate

__version__ = "0.1.0"
