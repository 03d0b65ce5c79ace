"""Laguerre-transform / hypersingular boundary integral solver for the 2D
Neumann problem of the wave equation."""

from .fundamental import CoeffTable, compute_coefficients, omega_radial, phi, psi_radial
from .geometry import Curve, builtin_curve
from .laguerre import LaguerreParams, evaluate_expansion, forward_transform
from .quadrature import Mesh
from .solver import (
    KernelSystem,
    boundary_data_from_source,
    boundary_data_uniform,
    evaluate_interior,
    evaluate_spacetime,
    interior_values,
    solve_sequence,
)

__all__ = [
    "CoeffTable",
    "Curve",
    "KernelSystem",
    "LaguerreParams",
    "Mesh",
    "boundary_data_from_source",
    "boundary_data_uniform",
    "builtin_curve",
    "compute_coefficients",
    "evaluate_expansion",
    "evaluate_interior",
    "evaluate_spacetime",
    "forward_transform",
    "interior_values",
    "omega_radial",
    "phi",
    "psi_radial",
    "solve_sequence",
]
