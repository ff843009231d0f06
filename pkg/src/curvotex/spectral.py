"""Hessian of the augmented Hamiltonian at a regular ring, and its spectrum.

Tangent vectors at the ring are 2n-vectors of displacements in the raw polar
coordinates ``(r_1..r_n, theta_1..theta_n)``. Fourier vectors of theta kind
therefore carry a factor ``1/r0`` in their angular slots, so that each of
their components is a unit-length displacement along the ring.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _fd
from .errors import DomainError, EquatorError
from .geometry import GreensChoice
from .ring import RingSpec, make_ring, omega0
from .vortex import VortexConfig, augmented_hamiltonian

EQUATOR_TOL = 1e-12
HESSIAN_STEP = 1e-2


class Kind(enum.Enum):
    R = "r"
    THETA = "theta"


class Part(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"


@dataclass(frozen=True)
class FourierVector:
    n: int
    ell: int
    kind: Kind
    part: Part
    r0: float
    components: np.ndarray  # raw (dr_j, dtheta_j); theta slots carry 1/r0

    def unit(self) -> np.ndarray:
        """Components as (dr_j, r0 * dtheta_j), the isometric frame at the ring."""
        v = np.array(self.components, dtype=float)
        v[self.n:] *= self.r0
        return v


def _phases(n: int, ell: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    return 2.0 * math.pi * ell * j / n


def fourier_vector(
    n: int, ell: int, kind: Kind | str, part: Part | str, r0: float = 1.0
) -> FourierVector:
    """Real (alpha) or imaginary (beta) part of sum_j exp(-2 pi i ell j / n) e_j."""
    kind, part = Kind(kind), Part(part)
    if not 0 <= ell <= n // 2:
        raise DomainError(f"mode index {ell} outside 0..{n // 2}")
    ph = _phases(n, ell)
    if part is Part.ALPHA:
        vals = np.cos(ph)
    elif ell == 0 or 2 * ell == n:
        vals = np.zeros(n)
    else:
        vals = -np.sin(ph)
    comp = np.zeros(2 * n)
    if kind is Kind.R:
        comp[:n] = vals
    else:
        comp[n:] = vals / r0
    return FourierVector(n, ell, kind, part, r0, comp)


def mode_polar(s: RingSpec, ell: int, kind: Kind | str, part: Part | str) -> np.ndarray:
    return fourier_vector(s.n, ell, kind, part, s.r0).components


def zeta_prime(s: RingSpec) -> tuple[np.ndarray, np.ndarray]:
    """Basis of the momentum-preserving part of the l=1 mode (polar coords)."""
    sg, st = s.sigma, s.sigma_tilde
    u = sg * mode_polar(s, 1, "r", "alpha") - st * mode_polar(s, 1, "theta", "beta")
    v = sg * mode_polar(s, 1, "r", "beta") + st * mode_polar(s, 1, "theta", "alpha")
    return u, v


def _ring_polar_map(s: RingSpec) -> Callable[[np.ndarray], np.ndarray]:
    th0 = s.angles()
    n = s.n

    def to_z(p: np.ndarray) -> np.ndarray:
        return (s.r0 + p[:n]) * np.exp(1j * (th0 + p[n:]))

    return to_z


def augmented_polar(
    s: RingSpec,
    greens: GreensChoice | str = GreensChoice.BACKGROUND,
    omega: float | None = None,
) -> Callable[[np.ndarray], float]:
    """Augmented Hamiltonian as a function of the polar displacement from the ring."""
    greens = GreensChoice.parse(greens)
    w = omega0(s, greens) if omega is None else omega
    base = make_ring(s, greens)
    to_z = _ring_polar_map(s)

    def f(p: np.ndarray) -> float:
        return augmented_hamiltonian(base.with_positions(to_z(p)), w)

    return f


def _circulant(first_row: np.ndarray) -> np.ndarray:
    n = first_row.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return first_row[idx]


def diagonal_r_entry(s: RingSpec, greens: GreensChoice | str = GreensChoice.BACKGROUND) -> float:
    """The repeated diagonal entry d^2 H^ / d r_j^2 at the ring."""
    greens = GreensChoice.parse(greens)
    n, k2, r2, sg, st, x = s.n, s.kappa**2, s.r0**2, s.sigma, s.sigma_tilde, s.x
    if greens is GreensChoice.BACKGROUND:
        return (n - 1) * k2 / (24.0 * math.pi * r2 * sg**2) * ((5 - n) * sg**2 + 6.0 * st**2)
    if greens is GreensChoice.POLE_AT_INFINITY:
        return -(n - 1) * k2 / (24.0 * math.pi * r2 * sg) * ((n - 11) + (n + 13) * x)
    raise NotImplementedError("no closed form for the counter-vortex Hamiltonian")


def hessian_closed_form(s: RingSpec, greens: GreensChoice | str = GreensChoice.BACKGROUND) -> np.ndarray:
    """2n x 2n Hessian in polar coordinates at the ring, omega = omega0."""
    n, k2, r2 = s.n, s.kappa**2, s.r0**2
    d = np.arange(1, n)
    inv = 1.0 / (4.0 * math.pi * (1.0 - np.cos(2.0 * math.pi * d / n)))
    row_r = np.concatenate([[diagonal_r_entry(s, greens)], k2 * inv / r2])
    row_t = np.concatenate([[k2 * (n * n - 1) / (24.0 * math.pi)], -k2 * inv])
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = _circulant(row_r)
    out[n:, n:] = _circulant(row_t)
    return out


def hessian_numerical(
    s: RingSpec,
    greens: GreensChoice | str = GreensChoice.BACKGROUND,
    step: float = HESSIAN_STEP,
    levels: int = 2,
) -> np.ndarray:
    """Finite-difference Hessian of the augmented Hamiltonian in polar coordinates."""
    f = augmented_polar(s, greens)
    steps = np.concatenate([np.full(s.n, step * s.r0), np.full(s.n, step)])
    return _fd.hessian(f, np.zeros(2 * s.n), steps, levels)


def trig_sum(n: int, ell: int) -> float:
    """sum_{j=1}^{n-1} cos(2 pi ell j / n) / (1 - cos(2 pi j / n)), summed directly."""
    j = np.arange(1, n)
    return math.fsum(np.cos(2.0 * math.pi * ell * j / n) / (1.0 - np.cos(2.0 * math.pi * j / n)))


def trig_identity(n: int, ell: int) -> float:
    """Closed form of :func:`trig_sum`, valid for 0 <= ell <= n."""
    if n < 1 or not 0 <= ell <= n:
        raise DomainError("trig identity needs 0 <= ell <= n")
    return (n * n - 1) / 6.0 - ell * (n - ell)


def _check_mode(s: RingSpec, ell: int) -> None:
    if not 0 <= ell <= s.n // 2:
        raise DomainError(f"mode index {ell} outside 0..{s.n // 2}")


def eps_theta(s: RingSpec, ell: int) -> float:
    _check_mode(s, ell)
    return s.kappa**2 * ell * (s.n - ell) / (4.0 * math.pi)


def mode_eigenvalues(s: RingSpec, ell: int) -> tuple[float, float]:
    """(eps_r, eps_theta) of mode ell for the background Hamiltonian."""
    _check_mode(s, ell)
    n, x = s.n, s.x
    eps_r = s.kappa**2 / (4.0 * math.pi * s.r0**2) * (
        2.0 * (n - 1) * (1.0 + x * x) / s.sigma**2 - ell * (n - ell)
    )
    return eps_r, eps_theta(s, ell)


def mode_eigenvalues_alt(s: RingSpec, ell: int) -> tuple[float, float]:
    """(eps_r, eps_theta) for the Hamiltonian built on G = log|z - w|^2.

    Consistent with :func:`diagonal_r_entry` for that Hamiltonian; see
    :func:`mode_eigenvalues_alt_as_printed` for the commonly quoted variant.
    """
    _check_mode(s, ell)
    n = s.n
    eps_r = s.kappa**2 / (4.0 * math.pi * s.r0**2) * (
        2.0 * (n - 1) * s.sigma_tilde / s.sigma - ell * (n - ell)
    )
    return eps_r, eps_theta(s, ell)


def mode_eigenvalues_alt_as_printed(s: RingSpec, ell: int) -> tuple[float, float]:
    """Quoted closed form; agrees with the Hessian only at lambda = 0."""
    _check_mode(s, ell)
    n, x = s.n, s.x
    eps_r = s.kappa**2 / (4.0 * math.pi * s.r0**2) * (
        (n - 1) * (6.0 + 5.0 * x * x) / (3.0 * s.sigma**2) - ell * (n - ell)
    )
    return eps_r, eps_theta(s, ell)


def _momentum_derivative(s: RingSpec, v: np.ndarray) -> tuple[complex, float]:
    """dJ(v) per unit vorticity, J = sum_j (z_j, |z_j|^2) / sigma_j."""
    n = s.n
    e = np.exp(1j * s.angles())
    dr, dth = v[:n], v[n:]
    sg2 = s.sigma**2
    first = np.sum(dr * e * s.sigma_tilde / sg2) + np.sum(dth * 1j * s.r0 * e / s.sigma)
    second = np.sum(dr * 2.0 * s.r0 / sg2)
    return complex(first), float(second)


def dJ_on_modes(s: RingSpec) -> dict[tuple[int, Kind], tuple[complex, float]]:
    """dJ applied (complex-linearly) to every Fourier vector zeta^(ell)."""
    out: dict[tuple[int, Kind], tuple[complex, float]] = {}
    for ell in range(s.n // 2 + 1):
        for kind in Kind:
            a1, a2 = _momentum_derivative(s, mode_polar(s, ell, kind, "alpha"))
            b1, b2 = _momentum_derivative(s, mode_polar(s, ell, kind, "beta"))
            out[(ell, kind)] = (a1 + 1j * b1, float((a2 + 1j * b2).real))
    return out


def _check_equator(s: RingSpec) -> None:
    if abs(s.x - 1.0) < EQUATOR_TOL:
        raise EquatorError("ring on the equator: the symplectic slice drops dimension")


def slice_basis(s: RingSpec) -> list[np.ndarray]:
    """Basis of the symplectic slice: the l=1 pair first, then ascending ell."""
    _check_equator(s)
    basis = list(zeta_prime(s))
    for ell in range(2, s.n // 2 + 1):
        parts = ("alpha",) if 2 * ell == s.n else ("alpha", "beta")
        for kind in ("r", "theta"):
            basis += [mode_polar(s, ell, kind, p) for p in parts]
    return basis


def eps1prime(s: RingSpec) -> float:
    """Double eigenvalue of the Hessian on the l=1 slice block."""
    return s.n * (s.n - 1) * s.kappa**2 * s.sigma_tilde**2 / (4.0 * math.pi * s.r0**2)


@dataclass
class ModeSpectrum:
    n: int
    kappa: float
    r0: float
    lam: float
    eps_r: list[float]
    eps_theta: list[float]
    eps1prime: float
    eps1prime_relevant: bool
    relevant: list[tuple[str, float]] = field(default_factory=list)


def mode_spectrum(s: RingSpec, greens: GreensChoice | str = GreensChoice.BACKGROUND) -> ModeSpectrum:
    greens = GreensChoice.parse(greens)
    if greens is GreensChoice.BACKGROUND:
        ev = mode_eigenvalues
    elif greens is GreensChoice.POLE_AT_INFINITY:
        ev = mode_eigenvalues_alt
    else:
        raise NotImplementedError("no closed-form spectrum for the counter-vortex Hamiltonian")
    pairs = [ev(s, ell) for ell in range(s.n // 2 + 1)]
    er = [p[0] for p in pairs]
    et = [p[1] for p in pairs]
    on_equator = abs(s.x - 1.0) < EQUATOR_TOL
    e1 = eps1prime(s)
    if greens is GreensChoice.POLE_AT_INFINITY:
        e1 = s.n / 2.0 * s.sigma**2 * er[1] + s.n / (2.0 * s.r0**2) * s.sigma_tilde**2 * et[1]
    relevant: list[tuple[str, float]] = []
    if not on_equator:
        relevant.append(("eps1prime", e1))
    for ell in range(1, s.n // 2 + 1):
        relevant.append((f"eps_theta[{ell}]", et[ell]))
    for ell in range(2, s.n // 2 + 1):
        relevant.append((f"eps_r[{ell}]", er[ell]))
    return ModeSpectrum(s.n, s.kappa, s.r0, s.lam, er, et, e1, not on_equator, relevant)
