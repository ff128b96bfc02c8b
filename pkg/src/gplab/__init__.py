"""Radial ground states, Green functions and spectra of the harmonic-trap
nonlinear Schrodinger equation with critical or supercritical power."""

__version__ = "0.1.0"

from .errors import (ConfigError, DomainError, GPLabError, NoBracket,
                     NoSolution, NumericalFailure)

__all__ = ["__version__", "ConfigError", "DomainError", "GPLabError",
           "NoBracket", "NoSolution", "NumericalFailure"]
