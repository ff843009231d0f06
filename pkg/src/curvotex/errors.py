"""Exception and warning types shared across the package."""

from __future__ import annotations


class CurvotexError(Exception):
    """Base class for all package errors."""


class DomainError(CurvotexError, ValueError):
    """Input lies outside the domain where a quantity is defined."""


class EquatorError(DomainError):
    """The ring sits on the equator of the sphere (lambda * r0**2 == 1)."""


class UnsupportedGeometryError(DomainError):
    """Operation only makes sense for some signs of the curvature."""


class CollisionError(CurvotexError):
    """Two vortices coincide (or approach closer than the allowed threshold).

    When raised from an integration run, ``trajectory`` holds the steps
    completed before the abort.
    """

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NoRootError(CurvotexError):
    """A mode never degenerates in the admissible parameter range."""


class NumericalWarning(UserWarning):
    """Finite-difference or extrapolation result is less reliable than requested."""


class NonEquilibriumWarning(NumericalWarning):
    """Configuration handed to a relative-equilibrium routine is not one."""
