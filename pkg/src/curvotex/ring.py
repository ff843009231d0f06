"""Regular n-gon rings of identical vortices and their rotation rates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import GreensChoice
from .vortex import VortexConfig


@dataclass(frozen=True)
class RingSpec:
    n: int
    kappa: float = 1.0
    r0: float = 1.0
    lam: float = 0.0
    phase: float = 0.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("a ring needs an integer n >= 2")
        if self.kappa == 0.0:
            raise DomainError("ring vorticity must be nonzero")
        if not self.r0 > 0.0:
            raise DomainError("ring radius must be positive")
        if not self.x > -1.0:
            raise DomainError("lambda * r0**2 must exceed -1 (chart validity)")

    @property
    def x(self) -> float:
        """The effective parameter lambda * r0**2."""
        return self.lam * self.r0 * self.r0

    @property
    def sigma(self) -> float:
        return 1.0 + self.x

    @property
    def sigma_tilde(self) -> float:
        return 1.0 - self.x

    @classmethod
    def from_x(cls, n: int, x: float, r0: float = 1.0, kappa: float = 1.0, phase: float = 0.0) -> "RingSpec":
        return cls(n=n, kappa=kappa, r0=r0, lam=x / (r0 * r0), phase=phase)

    def angles(self) -> np.ndarray:
        j = np.arange(1, self.n + 1)
        return 2.0 * math.pi * j / self.n + self.phase


def make_ring(s: RingSpec, greens: GreensChoice | str = GreensChoice.BACKGROUND) -> VortexConfig:
    z = s.r0 * np.exp(1j * s.angles())
    return VortexConfig(s.lam, z, np.full(s.n, float(s.kappa)), GreensChoice.parse(greens))


def ring_energy(s: RingSpec) -> float:
    """Background-Hamiltonian value of the ring, additive constant dropped."""
    r2 = s.r0 * s.r0
    return -s.n * (s.n - 1) * s.kappa**2 / (8.0 * math.pi) * math.log(r2 / s.sigma**2)


def ring_momentum(s: RingSpec) -> tuple[complex, float]:
    return 0j, s.n * s.kappa * s.r0**2 / s.sigma


def omega0(s: RingSpec, greens: GreensChoice | str = GreensChoice.BACKGROUND) -> float:
    """Angular velocity of the rigidly rotating ring."""
    greens = GreensChoice.parse(greens)
    n, k, r2, x = s.n, s.kappa, s.r0**2, s.x
    if greens is GreensChoice.BACKGROUND:
        return -(n - 1) * k / (8.0 * math.pi) * (1.0 - x * x) / r2
    if greens is GreensChoice.POLE_AT_INFINITY:
        return -(n - 1) * k / (8.0 * math.pi) * s.sigma**2 / r2
    return _omega_antipodal(n, k, s.r0, x)


def _omega_antipodal(n: int, kappa: float, r0: float, x: float) -> float:
    # from d/d(r^2) of the ring energy, using prod_j (1 + x g^j) = 1 - (-x)^n
    q = -x
    sig = 1.0 + x
    denom = 1.0 - q**n
    if denom == 0.0:
        raise DomainError("ring collides with its counter-vortices (equator, n even)")
    bracket = (n - 1) - 2.0 * n * x * q ** (n - 1) / denom + 2.0 * x / sig
    return -kappa * sig * sig / (8.0 * math.pi * r0 * r0) * bracket


def omega_antipodal_as_printed(s: RingSpec) -> float:
    """The closed form quoted in the literature for the counter-vortex model.

    Kept for comparison only; it agrees with :func:`omega0` at lambda = 0
    but not elsewhere.
    """
    n, k, x = s.n, s.kappa, s.x
    q = -x
    sig = 1.0 + x
    return -k / (8.0 * math.pi * s.r0**2) * sig / (1.0 - q**n) * (
        (n - 1) * sig * (1.0 + q ** (n - 1)) + 2.0 * x * (1.0 - q ** (n - 1))
    )


def ring_deviation(z: np.ndarray) -> float:
    """Distance of a labelled configuration from the nearest regular ring.

    The comparison ring has the mean radius and the best-fit phase;
    vortex j is matched with angle 2*pi*j/n.
    """
    z = np.asarray(z, dtype=np.complex128)
    n = z.size
    j = np.arange(1, n + 1)
    e = np.exp(2j * math.pi * j / n)
    psi = np.angle(np.sum(z * np.conj(e)))
    ref = np.mean(np.abs(z)) * np.exp(1j * psi) * e
    return float(np.max(np.abs(z - ref)))
