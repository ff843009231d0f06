"""N point vortices on M_lambda: Hamiltonian, momentum, flow and integration."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray

from . import _fd
from .errors import CollisionError, DomainError, NonEquilibriumWarning
from .geometry import GreensChoice

EVAL_COLLISION_TOL = 1e-14
INTEGRATION_COLLISION_TOL = 1e-6

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class VortexConfig:
    lam: float
    positions: ComplexArray
    vorticities: FloatArray
    greens: GreensChoice = GreensChoice.BACKGROUND

    def __post_init__(self) -> None:
        z = np.atleast_1d(np.asarray(self.positions, dtype=np.complex128)).copy()
        k = np.atleast_1d(np.asarray(self.vorticities, dtype=np.float64)).copy()
        if z.ndim != 1 or k.shape != z.shape:
            raise ValueError("positions and vorticities must be 1-d and of equal length")
        if z.size < 1:
            raise ValueError("need at least one vortex")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(k))):
            raise ValueError("non-finite positions or vorticities")
        if np.any(1.0 + self.lam * np.abs(z) ** 2 <= 0.0):
            raise DomainError("a vortex lies outside the chart domain")
        z.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "positions", z)
        object.__setattr__(self, "vorticities", k)
        object.__setattr__(self, "greens", GreensChoice.parse(self.greens))

    @property
    def n(self) -> int:
        return int(self.positions.size)

    def with_positions(self, z: ComplexArray) -> "VortexConfig":
        return replace(self, positions=np.asarray(z, dtype=np.complex128))


@dataclass
class Trajectory:
    times: FloatArray
    states: ComplexArray  # shape (steps + 1, N)
    energy: FloatArray
    momentum: NDArray[np.float64]  # columns J_re, J_im, J_u
    aborted: bool = False
    notes: list[str] = field(default_factory=list)


def _check_pairs(z: ComplexArray) -> NDArray:
    diff = z[:, None] - z[None, :]
    dist = np.abs(diff)
    np.fill_diagonal(dist, np.inf)
    if dist.min() < EVAL_COLLISION_TOL:
        raise CollisionError("two vortices coincide")
    return diff


def _green_matrix(z: ComplexArray, lam: float, choice: GreensChoice) -> NDArray:
    diff = _check_pairs(z)
    d2 = np.abs(diff) ** 2
    np.fill_diagonal(d2, 1.0)
    g = np.log(d2)
    if choice is GreensChoice.BACKGROUND:
        s = 1.0 + lam * np.abs(z) ** 2
        g = g - np.log(s)[:, None] - np.log(s)[None, :]
    elif choice is GreensChoice.ANTIPODAL:
        den = np.abs(1.0 + lam * z[:, None] * np.conj(z)[None, :]) ** 2
        if np.any(den[~np.eye(z.size, dtype=bool)] < EVAL_COLLISION_TOL**2):
            raise CollisionError("a vortex sits at the antipode of another")
        np.fill_diagonal(den, 1.0)
        g = g - np.log(den)
    np.fill_diagonal(g, 0.0)
    return g


def hamiltonian(c: VortexConfig) -> float:
    """H = -(1/4pi) sum_{i<j} k_i k_j G(z_i; z_j)."""
    if c.n < 2:
        raise ValueError("the Hamiltonian needs at least two vortices")
    g = _green_matrix(c.positions, c.lam, c.greens)
    kk = np.outer(c.vorticities, c.vorticities)
    return float(-np.sum(kk * g) / (8.0 * math.pi))


def momentum(c: VortexConfig) -> tuple[complex, float]:
    """Total momentum sum_j k_j (z_j, |z_j|^2) / sigma_j."""
    z, k = c.positions, c.vorticities
    s = 1.0 + c.lam * np.abs(z) ** 2
    return complex(np.sum(k * z / s)), float(np.sum(k * np.abs(z) ** 2 / s))


def augmented_hamiltonian(c: VortexConfig, omega: float) -> float:
    return hamiltonian(c) - omega * momentum(c)[1]


def grad_conj(c: VortexConfig) -> ComplexArray:
    """dH/d(conj z_j) in closed form."""
    z, k, lam = c.positions, c.vorticities, c.lam
    diff = _check_pairs(z)
    np.fill_diagonal(diff, 1.0)
    term = 1.0 / np.conj(diff)
    if c.greens is GreensChoice.BACKGROUND:
        s = 1.0 + lam * np.abs(z) ** 2
        term = term - (lam * z / s)[:, None]
    elif c.greens is GreensChoice.ANTIPODAL:
        term = term - lam * z[None, :] / (1.0 + lam * np.conj(z)[:, None] * z[None, :])
    np.fill_diagonal(term, 0.0)
    kk = np.outer(k, k)
    return -np.sum(kk * term, axis=1) / (4.0 * math.pi)


def velocities(c: VortexConfig) -> ComplexArray:
    """dz_j/dt = i sigma_j^2 / k_j * dH/d(conj z_j).

    The sign makes the regular ring rotate as dz/dt = i*omega0*z.
    """
    if np.any(c.vorticities == 0.0):
        raise ValueError("zero-vorticity vortex has no Hamiltonian velocity")
    if c.n < 2:
        return np.zeros(c.n, dtype=np.complex128)
    s = 1.0 + c.lam * np.abs(c.positions) ** 2
    return 1j * s**2 / c.vorticities * grad_conj(c)


def integrate(c: VortexConfig, t_end: float, dt: float) -> Trajectory:
    """Fixed-step classical Runge-Kutta run, logging H and the momentum map.

    Raises CollisionError (carrying the partial trajectory) if two vortices
    approach within INTEGRATION_COLLISION_TOL.
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise ValueError("dt must be positive")
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ValueError("t_end must be positive")
    steps = int(math.ceil(t_end / dt - 1e-9))
    h = t_end / steps

    def rhs(z: ComplexArray) -> ComplexArray:
        return velocities(c.with_positions(z))

    def log(i: int, z: ComplexArray) -> None:
        cc = c.with_positions(z)
        j, ju = momentum(cc)
        energy[i] = hamiltonian(cc)
        mom[i] = (j.real, j.imag, ju)

    states = np.empty((steps + 1, c.n), dtype=np.complex128)
    energy = np.empty(steps + 1)
    mom = np.empty((steps + 1, 3))
    z = c.positions.copy()
    states[0] = z
    log(0, z)
    times = h * np.arange(steps + 1)

    for i in range(1, steps + 1):
        k1 = rhs(z)
        k2 = rhs(z + 0.5 * h * k1)
        k3 = rhs(z + 0.5 * h * k2)
        k4 = rhs(z + h * k3)
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        dist = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(dist, np.inf)
        if dist.min() < INTEGRATION_COLLISION_TOL or np.any(1.0 + c.lam * np.abs(z) ** 2 <= 0.0):
            traj = Trajectory(times[:i], states[:i], energy[:i], mom[:i], aborted=True,
                              notes=[f"collision approach at t={times[i]:.6g}"])
            raise CollisionError("vortices approached collision; run aborted", traj)
        states[i] = z
        log(i, z)
    return Trajectory(times, states, energy, mom)


def rotation_rate(c: VortexConfig) -> tuple[float, float]:
    """Best-fit rigid angular velocity and the max residual |v - i w z|."""
    z = c.positions
    v = velocities(c)
    w = float(np.sum((np.conj(1j * z) * v).real) / np.sum(np.abs(z) ** 2))
    return w, float(np.max(np.abs(v - 1j * w * z)))


def linearized_spectrum(c: VortexConfig, omega: float | None = None, h: float = 1e-5) -> ComplexArray:
    """Eigenvalues of the linearized flow in the frame co-rotating at omega.

    omega defaults to the best-fit rotation rate of the configuration.
    """
    fit, resid = rotation_rate(c)
    if omega is None:
        omega = fit
    else:
        resid = float(np.max(np.abs(velocities(c) - 1j * omega * c.positions)))
    if resid > 1e-6:
        warnings.warn(f"configuration is not a relative equilibrium (residual {resid:.3g})",
                      NonEquilibriumWarning, stacklevel=2)
    n = c.n

    def field_(xy: np.ndarray) -> np.ndarray:
        z = xy[:n] + 1j * xy[n:]
        f = velocities(c.with_positions(z)) - 1j * omega * z
        return np.concatenate([f.real, f.imag])

    x0 = np.concatenate([c.positions.real, c.positions.imag])
    scale = max(1.0, float(np.max(np.abs(c.positions))))
    jac = _fd.jacobian(field_, x0, h * scale)
    return np.linalg.eigvals(jac)
