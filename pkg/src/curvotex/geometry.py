"""Surfaces of constant curvature 4*lambda in the uniform stereographic chart.

The chart coordinate is a complex number ``z``; the conformal factor is
``sigma(z) = 1 + lambda*|z|**2`` and the metric is ``|dz|**2 / sigma**2``.
lambda > 0 gives spheres, lambda = 0 the plane, lambda < 0 hyperbolic discs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _fd
from .errors import CollisionError, DomainError, UnsupportedGeometryError

ANTIPODAL_COLLISION_TOL = 1e-12


@dataclass(frozen=True)
class SurfaceParam:
    """Curvature parameter; the Gaussian curvature of the surface is 4*lam."""

    lam: float

    @property
    def curvature(self) -> float:
        return 4.0 * self.lam

    @property
    def chart_radius_limit(self) -> float:
        """Supremum of |z| over the chart (inf unless hyperbolic)."""
        if self.lam < 0.0:
            return 1.0 / math.sqrt(-self.lam)
        return math.inf

    def contains(self, z: complex) -> bool:
        return 1.0 + self.lam * abs(z) ** 2 > 0.0


class AmbientPoint(NamedTuple):
    x: float
    y: float
    u: float


class GreensChoice(enum.Enum):
    """Which Green's function family defines the vortex interaction.

    POLE_AT_INFINITY: log|z-w|^2
    ANTIPODAL: log(|z-w|^2 / |1 + lam z conj(w)|^2)
    BACKGROUND: log(|z-w|^2 / (sigma(z) sigma(w))), uniform counter-vorticity
    """

    POLE_AT_INFINITY = "pole"
    ANTIPODAL = "antipodal"
    BACKGROUND = "background"

    @classmethod
    def parse(cls, value: "str | GreensChoice") -> "GreensChoice":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown Green's function choice {value!r}")


def _param(p: SurfaceParam | float) -> SurfaceParam:
    return p if isinstance(p, SurfaceParam) else SurfaceParam(float(p))


def sigma(z: complex, p: SurfaceParam | float) -> float:
    p = _param(p)
    s = 1.0 + p.lam * abs(z) ** 2
    if s <= 0.0:
        raise DomainError(f"z={z} lies outside the chart for lambda={p.lam}")
    return s


def geodesic_radius(r: float, p: SurfaceParam | float) -> float:
    """Geodesic radius on the surface of the chart circle |z| = r."""
    lam = _param(p).lam
    if r < 0.0:
        raise DomainError("radius must be non-negative")
    if lam > 0.0:
        s = math.sqrt(lam)
        return math.atan(r * s) / s
    if lam < 0.0:
        s = math.sqrt(-lam)
        if r * s >= 1.0:
            raise DomainError(f"r={r} outside the hyperbolic disc of radius {1.0 / s}")
        return math.atanh(r * s) / s
    return float(r)


def chart_radius(a: float, p: SurfaceParam | float) -> float:
    """Inverse of :func:`geodesic_radius` (southern hemisphere branch on spheres)."""
    lam = _param(p).lam
    if a < 0.0:
        raise DomainError("geodesic radius must be non-negative")
    if lam > 0.0:
        s = math.sqrt(lam)
        if a * s >= math.pi / 2.0:
            raise DomainError("geodesic radius beyond the equator-hemisphere branch")
        return math.tan(a * s) / s
    if lam < 0.0:
        s = math.sqrt(-lam)
        return math.tanh(a * s) / s
    return float(a)


def antipode(z: complex, p: SurfaceParam | float) -> complex:
    lam = _param(p).lam
    if lam <= 0.0:
        raise UnsupportedGeometryError("antipodes only exist on spheres (lambda > 0)")
    if z == 0:
        raise DomainError("the antipode of the origin is the chart's point at infinity")
    return complex(-1.0 / (lam * np.conj(z)))


def embed(z: complex, p: SurfaceParam | float) -> AmbientPoint:
    s = sigma(z, p)
    return AmbientPoint(z.real / s, z.imag / s, abs(z) ** 2 / s)


def casimir(q: AmbientPoint, p: SurfaceParam | float) -> float:
    lam = _param(p).lam
    x, y, u = q
    return x * x + y * y + lam * u * u - u


def killing_fields(z: complex, p: SurfaceParam | float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three infinitesimal isometries evaluated at z, as real 2-vectors."""
    lam = _param(p).lam
    x, y = z.real, z.imag
    xi1 = 0.5 * np.array([2.0 * lam * x * y, 1.0 - lam * (x * x - y * y)])
    xi2 = -0.5 * np.array([1.0 + lam * (x * x - y * y), 2.0 * lam * x * y])
    xi3 = np.array([-y, x])
    return xi1, xi2, xi3


def momentum_map(z: complex, p: SurfaceParam | float) -> tuple[complex, float]:
    s = sigma(z, p)
    return complex(z) / s, abs(z) ** 2 / s


def greens(choice: GreensChoice | str, z: complex, w: complex, p: SurfaceParam | float) -> float:
    choice = GreensChoice.parse(choice)
    p = _param(p)
    sz, sw = sigma(z, p), sigma(w, p)
    d2 = abs(z - w) ** 2
    if d2 == 0.0:
        raise CollisionError("Green's function evaluated at coincident points")
    if choice is GreensChoice.POLE_AT_INFINITY:
        return math.log(d2)
    if choice is GreensChoice.BACKGROUND:
        return math.log(d2 / (sz * sw))
    denom = abs(1.0 + p.lam * z * np.conj(w)) ** 2
    # |z - antipode(w)| = |1 + lam z conj(w)| / (lam |w|), written without the division
    if p.lam > 0.0 and math.sqrt(denom) < ANTIPODAL_COLLISION_TOL * p.lam * abs(w):
        raise CollisionError("z coincides with the antipode of w")
    return math.log(d2 / denom)


def laplace_beltrami(
    f: Callable[[complex], float],
    z: complex,
    p: SurfaceParam | float,
    h: float | None = None,
) -> float:
    """sigma**2 * (f_xx + f_yy) by the 5-point Laplacian, extrapolated twice."""
    p = _param(p)
    if h is None:
        h = 1e-3 * max(1.0, abs(z))
    for dz in (h, -h, 1j * h, -1j * h):
        if not p.contains(z + dz):
            raise DomainError("finite-difference stencil leaves the chart")
    f0 = f(z)
    ests = []
    for lvl in range(3):
        s = h / 2.0**lvl
        lap = (f(z + s) + f(z - s) + f(z + 1j * s) + f(z - 1j * s) - 4.0 * f0) / (s * s)
        ests.append(lap)
    lap, _ = _fd.richardson(ests, 2)
    return sigma(z, p) ** 2 * lap
