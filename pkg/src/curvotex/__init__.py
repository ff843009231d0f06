"""Point-vortex rings on surfaces of constant curvature 4*lambda.

Geometry of the chart, the N-vortex Hamiltonian system, linear stability of
regular rings and the higher-order analysis of their degenerate cases.
"""

__version__ = "0.1.0"

from .errors import (
    CollisionError,
    CurvotexError,
    DomainError,
    EquatorError,
    NoRootError,
    NonEquilibriumWarning,
    NumericalWarning,
    UnsupportedGeometryError,
)
from .geometry import AmbientPoint, GreensChoice, SurfaceParam
from .ring import RingSpec, make_ring, omega0
from .vortex import Trajectory, VortexConfig, hamiltonian, integrate, momentum, velocities
from .spectral import FourierVector, ModeSpectrum, mode_eigenvalues, mode_spectrum
from .stability import BifurcationPoint, StabilityVerdict, b_n, bifurcation_value, classify, is_stable
from .bifurcation import DegeneracyReport, DihedralElement, NormalFormSpec, even_probe, odd_probe

__all__ = [
    "AmbientPoint", "BifurcationPoint", "CollisionError", "CurvotexError", "DegeneracyReport",
    "DihedralElement", "DomainError", "EquatorError", "FourierVector", "GreensChoice",
    "ModeSpectrum", "NoRootError", "NonEquilibriumWarning", "NormalFormSpec", "NumericalWarning",
    "RingSpec", "StabilityVerdict", "SurfaceParam", "Trajectory", "UnsupportedGeometryError",
    "VortexConfig", "b_n", "bifurcation_value", "classify", "even_probe", "hamiltonian",
    "integrate", "is_stable", "make_ring", "mode_eigenvalues", "mode_spectrum", "momentum",
    "odd_probe", "omega0", "velocities",
]
