"""Exact and brute-force tools for the Z_d quantum double model on polygon decompositions."""
from .analysis import braid, charge_detect, entropy, exchange_phase, ground_dim, group_order, is_simple, logical_algebra_check
from .chains import Chain, Cochain, boundary, homology, intersection, is_boundary
from .complex import (
    CellComplex,
    ComplexParseError,
    ComplexValidationError,
    Region,
    build_genus2,
    build_sphere_cube,
    build_torus,
    dualize,
    load_complex,
    save_complex,
    validate,
)
from .pauli import PauliString, ProjectorSum, commutation_phase, projector

__version__ = "0.1.0"
