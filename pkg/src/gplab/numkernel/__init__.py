"""Numerical primitives shared by every module."""
from ._backend import BACKEND, kernels
from .grid import RadialGrid, RadialProfile, param_derivatives
from .linalg import (TridiagonalOperator, count_eigs_below, eigenvalue_bisect,
                     lowest_eigenvalues, solve_tridiagonal)
from .quadrature import param_trapezoid, quad_radial, radial_integral
from .special import (kummer_M, kummer_poly_coeffs, log_beta, log_gamma,
                      power_integral, sphere_measure)

__all__ = [
    "BACKEND", "kernels", "RadialGrid", "RadialProfile", "param_derivatives",
    "TridiagonalOperator", "count_eigs_below", "eigenvalue_bisect",
    "lowest_eigenvalues", "solve_tridiagonal", "param_trapezoid",
    "quad_radial", "radial_integral", "kummer_M", "kummer_poly_coeffs",
    "log_beta", "log_gamma", "power_integral", "sphere_measure",
]
