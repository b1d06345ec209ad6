"""Numerical toolkit for the damped wave equation with dynamic Wentzell
boundary condition on the unit disk: certified pencil eigenvalues,
resolvent-norm sweeps, time-domain energy decay, and an observability
probe, all per angular Fourier mode."""

from .errors import (
    BoundaryTooCloseError,
    DomainError,
    InvalidArgumentError,
    NumericalFailureError,
    SpuriousRootError,
)

__all__ = [
    "BoundaryTooCloseError",
    "DomainError",
    "InvalidArgumentError",
    "NumericalFailureError",
    "SpuriousRootError",
]

__version__ = "0.1.0"
