"""Dihedral symmetry, higher-order probes at degenerate rings, normal forms.

Probe coordinates are coefficients on the unnormalized Fourier and slice
vectors of :mod:`curvotex.spectral`; the reported coefficients therefore
scale with r0 as r0**-2 (second order), r0**-3 (third) and r0**-4 (fourth).
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _fd
from .errors import DomainError
from .ring import RingSpec
from .spectral import (
    augmented_polar,
    eps1prime,
    hessian_closed_form,
    mode_polar,
    slice_basis,
    zeta_prime,
)
from .stability import b_n, bifurcation_value
from .vortex import VortexConfig

PROBE_STEP = 2e-2
ANISOTROPY_RTOL = 1e-4
EVEN_PROBE_STEP = 3e-2  # times r0*sin(pi/n), the half-spacing of the ring


# --- dihedral group -------------------------------------------------------


@dataclass(frozen=True)
class DihedralElement:
    """The element c**rotation_power * m**reflected of D_n."""

    n: int
    rotation_power: int = 0
    reflected: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("D_n needs n >= 1")
        object.__setattr__(self, "rotation_power", self.rotation_power % self.n)
        object.__setattr__(self, "reflected", bool(self.reflected))

    def compose(self, other: "DihedralElement") -> "DihedralElement":
        """self * other, i.e. apply other first."""
        if other.n != self.n:
            raise DomainError("elements of different dihedral groups")
        sign = -1 if self.reflected else 1
        return DihedralElement(
            self.n, self.rotation_power + sign * other.rotation_power, self.reflected ^ other.reflected
        )

    def inverse(self) -> "DihedralElement":
        if self.reflected:
            return self
        return DihedralElement(self.n, -self.rotation_power)

    @classmethod
    def c(cls, n: int, k: int = 1) -> "DihedralElement":
        return cls(n, k, False)

    @classmethod
    def m(cls, n: int) -> "DihedralElement":
        return cls(n, 0, True)

    @classmethod
    def m_prime(cls, n: int) -> "DihedralElement":
        return cls(n, 1, True)


def group_elements(n: int) -> list[DihedralElement]:
    return [DihedralElement(n, k, r) for r in (False, True) for k in range(n)]


def act(g: DihedralElement, c: VortexConfig) -> VortexConfig:
    """c rotates and shifts labels, m conjugates and reverses them."""
    if c.n != g.n:
        raise DomainError("group order does not match the number of vortices")
    if not np.all(c.vorticities == c.vorticities[0]):
        raise DomainError("the dihedral action needs identical vorticities")
    z = c.positions
    idx = np.arange(1, g.n + 1)
    if g.reflected:
        # slot j receives conj(z_{-j}); labels are 1-based and taken mod n
        z = np.conj(z[(-idx) % g.n - 1])
    k = g.rotation_power
    rho = np.exp(2j * math.pi * k / g.n)
    z = rho * z[(idx - k) % g.n - 1]
    return c.with_positions(z)


def act_on_displacement(g: DihedralElement, v: np.ndarray) -> np.ndarray:
    """Induced linear action on polar displacements (dr_j, dtheta_j) at the ring."""
    n = g.n
    v = np.asarray(v, dtype=float)
    dr, dth = v[:n], v[n:]
    idx = np.arange(1, n + 1)
    if g.reflected:
        dr, dth = dr[(-idx) % n - 1], -dth[(-idx) % n - 1]
    k = g.rotation_power
    sel = (idx - k) % n - 1
    return np.concatenate([dr[sel], dth[sel]])


def mode_coefficient(v: np.ndarray, n: int, ell: int, kind: str, r0: float = 1.0) -> complex:
    """zeta^(ell) of a displacement: sum_j exp(-2 pi i ell j / n) * slot_j."""
    v = np.asarray(v, dtype=float)
    slots = v[:n] if kind == "r" else r0 * v[n:]
    j = np.arange(1, n + 1)
    return complex(np.sum(np.exp(-2j * math.pi * ell * j / n) * slots))


def act_on_mode(g: DihedralElement, ell: int, kind: str, coeff: complex) -> complex:
    """Transform of a mode coefficient; c multiplies by a phase, m conjugates."""
    w = complex(coeff)
    if g.reflected:
        w = w.conjugate() if kind == "r" else -w.conjugate()
    return w * np.exp(-2j * math.pi * ell * g.rotation_power / g.n)


def ring_displacement(s: RingSpec, c: VortexConfig) -> np.ndarray:
    """Polar displacement of a configuration from the reference ring."""
    z = c.positions
    th0 = s.angles()
    dth = np.angle(z * np.exp(-1j * th0))
    return np.concatenate([np.abs(z) - s.r0, dth])


# --- derivatives at the ring ---------------------------------------------


def directional_derivative(
    order: int,
    s: RingSpec,
    dirs: list[np.ndarray],
    h: float | None = None,
    levels: int | None = None,
) -> float:
    """Mixed derivative d^k H^[dirs] at the ring (background model, omega = omega0)."""
    if order not in (2, 3, 4) or len(dirs) != order:
        raise DomainError("need order in {2, 3, 4} and one direction per order")
    if h is None:
        h = PROBE_STEP * s.r0
    if levels is None:
        levels = 3 if order == 3 else 2
    f = augmented_polar(s)
    # unit directions in physical length (radial step, arc length r0 dtheta), so the
    # stencil is the same whatever the basis normalisation or ring radius
    n = s.n
    norms = [float(np.hypot(np.linalg.norm(d[:n]), s.r0 * np.linalg.norm(d[n:]))) for d in dirs]
    if min(norms) == 0.0:
        return 0.0
    units = [np.asarray(d, dtype=float) / nd for d, nd in zip(dirs, norms)]
    # typical size of a k-th derivative here: kappa^2 n^2 r0^-k per unit direction
    scale = s.kappa**2 * s.n**2 / s.r0**order
    return math.prod(norms) * _fd.directional(f, np.zeros(2 * s.n), units, h, levels, scale=1e-2 * scale)


# --- degenerate-point reports ----------------------------------------------


class Parity(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


class Verdict(enum.Enum):
    STABLE_DEGENERATE = "StableDegenerate"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class EvenProbeData:
    t2_coeff: float
    t4_coeff: float
    T_value: float
    t2_closed_form: float
    t4_closed_form: float


@dataclass
class OddProbeData:
    beta: float
    gamma: float
    delta: float
    discriminant: float
    beta_closed_form: float
    isotropy_spread: float
    taylor_margin: float  # beta*delta - 3*gamma**2, from the full quartic Taylor form


@dataclass
class DegeneracyReport:
    n: int
    x_star: float
    parity: Parity
    verdict: Verdict
    root: str = "principal"
    r0: float = 1.0
    even_data: EvenProbeData | None = None
    odd_data: OddProbeData | None = None
    notes: list[str] = field(default_factory=list)


def _probe_x(n: int, root: str) -> float:
    x = b_n(n)
    if root == "principal":
        return x
    if root == "reciprocal":
        if not 0.0 < x < 1.0:
            raise DomainError(f"n={n} has no reciprocal bifurcation point on the sphere")
        return 1.0 / x
    raise DomainError(f"unknown root selector {root!r}")


def even_t4_closed_form(n: int, x: float, r0: float = 1.0) -> tuple[float, float]:
    """(T, t^4 coefficient) of H^ along z_j = (r0 + (-1)^j t) exp(2 pi i j / n)."""
    sg = 1.0 + x
    T = (n - 2) * (n**3 + 2 * n**2 - 12 * n + 24) * sg**4 + 96 * (n - 1) * x * (
        4 * x**3 - 9 * x**2 + 10 * x - 1
    )
    return T, n * T / (768.0 * math.pi * r0**4 * sg**4)


def even_T_as_printed(n: int, x: float) -> float:
    """Commonly quoted form of T; differs from the true one by 72(n-1)x^2(x^2-6x+1)."""
    sg = 1.0 + x
    return (n - 2) * (n**3 + 2 * n**2 - 12 * n + 24) * sg**4 + 24 * (n - 1) * x * (
        19 * x**3 - 54 * x**2 + 43 * x - 4
    )


def even_t2_closed_form(n: int, x: float, r0: float = 1.0) -> float:
    sg, st = 1.0 + x, 1.0 - x
    return n / (32.0 * math.pi * r0**2 * sg**2) * (-((n - 2) ** 2) * sg**2 + 4 * (n - 1) * st**2)


def even_T_sum_poly(m: int) -> float:
    """T_1 + T_2 over both roots, for the quoted T, in terms of m = n - 2."""
    p = (384 + 2560 * m + 4 * m**9 + 4832 * m**2 + 5024 * m**3 + 10616 * m**4
         + 15888 * m**5 + 10778 * m**6 + 3266 * m**7 + 177 * m**8)
    return 128 * (m + 1) * p / (m * m - 4 * m - 4) ** 4


def even_T_product_poly(m: int) -> float:
    """T_1 * T_2 over both roots, for the quoted T, in terms of m = n - 2."""
    p = (16 * m**10 + 648 * m**9 + 7409 * m**8 + 1044 * m**7 + 39960 * m**6
         + 85512 * m**5 + 57332 * m**4 + 25824 * m**3 + 15136 * m**2 + 5376 * m + 576)
    return 4096 * (m + 1) ** 2 * p / (m * m - 4 * m - 4) ** 4


def even_probe(
    n: int, root: str = "principal", r0: float = 1.0, h: float | None = None
) -> DegeneracyReport:
    """Quartic expansion along the alternating-radius curve at the l = n/2 bifurcation."""
    if n < 4 or n % 2:
        raise DomainError("even_probe needs even n >= 4")
    x = _probe_x(n, root)
    s = RingSpec.from_x(n, x, r0)
    f = augmented_polar(s)
    v = mode_polar(s, n // 2, "r", "alpha")
    f0 = f(np.zeros(2 * n))
    # f is even in t (c maps t to -t), so fit t^2..t^8 on symmetric samples
    if h is None:
        h = EVEN_PROBE_STEP * math.sin(math.pi / n)
    t = h * r0 * np.arange(1, 5)
    vals = np.array([0.5 * (f(tk * v) + f(-tk * v)) - f0 for tk in t])
    design = np.column_stack([t**2, t**4, t**6, t**8])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    a2, a4 = float(coef[0]), float(coef[1])
    T, a4_closed = even_t4_closed_form(n, x, r0)
    data = EvenProbeData(a2, a4, T, even_t2_closed_form(n, x, r0), a4_closed)
    verdict = Verdict.STABLE_DEGENERATE if (T > 0 and a4 > 0) else Verdict.INCONCLUSIVE
    notes = []
    if abs(a2) > 1e-7 * abs(a4):
        notes.append("t^2 coefficient does not vanish: not at a degenerate point")
        verdict = Verdict.INCONCLUSIVE
    return DegeneracyReport(n, x, Parity.EVEN, verdict, root, r0, even_data=data, notes=notes)


def odd_probe(
    n: int,
    root: str = "principal",
    r0: float = 1.0,
    scale_c: float = 1.0,
    scale_1: float = 1.0,
    n_directions: int = 8,
) -> DegeneracyReport:
    """(beta, gamma, delta) at the l = (n-1)/2 bifurcation point.

    beta is the slice Hessian on the l = 1 block, gamma the cubic coupling
    d^3 H^[X, X, U] between the critical mode and that block, and delta the
    quartic d^4 H^[a, a, a, a] on the critical mode. ``scale_c`` and
    ``scale_1`` rescale the two bases (used to check covariance).
    """
    if n < 5 or n % 2 == 0:
        raise DomainError("odd_probe needs odd n >= 5")
    x = _probe_x(n, root)
    s = RingSpec.from_x(n, x, r0)
    ell = (n - 1) // 2
    X = scale_c * mode_polar(s, ell, "r", "alpha")
    Y = scale_c * mode_polar(s, ell, "r", "beta")
    U = scale_1 * zeta_prime(s)[0]

    H = hessian_closed_form(s)
    beta = float(U @ H @ U)
    gamma = directional_derivative(3, s, [X, X, U])
    quartics = []
    for phi in np.linspace(0.0, math.pi, n_directions, endpoint=False):
        a = math.cos(phi) * X + math.sin(phi) * Y
        quartics.append(directional_derivative(4, s, [a] * 4))
    quartics = np.array(quartics)
    delta = float(np.mean(quartics))
    spread = float(np.ptp(quartics) / abs(delta))
    if spread > ANISOTROPY_RTOL:
        raise DomainError(f"quartic form on the critical mode is not isotropic (spread {spread:.3g})")
    disc = beta * delta - gamma * gamma
    data = OddProbeData(
        beta, gamma, delta, disc, scale_1**2 * eps1prime(s), spread, beta * delta - 3.0 * gamma * gamma
    )
    verdict = Verdict.STABLE_DEGENERATE if (delta > 0 and disc > 0) else Verdict.INCONCLUSIVE
    return DegeneracyReport(n, x, Parity.ODD, verdict, root, r0, odd_data=data)


def degeneracy_probe(n: int, root: str = "principal", r0: float = 1.0) -> DegeneracyReport:
    return even_probe(n, root, r0) if n % 2 == 0 else odd_probe(n, root, r0)


def _sweep_job(args: tuple[int, str]) -> DegeneracyReport:
    return degeneracy_probe(*args)


def thread_cap() -> int:
    raw = os.environ.get("CURVOTEX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def conjecture_sweep(n_max: int, include_reciprocal: bool = True, workers: int | None = None) -> list[DegeneracyReport]:
    """Probe every degenerate ring 4 <= n <= n_max, in n order."""
    if n_max < 4:
        raise DomainError("n_max must be at least 4")
    jobs: list[tuple[int, str]] = []
    for n in range(4, n_max + 1):
        jobs.append((n, "principal"))
        if include_reciprocal and 0.0 < b_n(n) < 1.0:
            jobs.append((n, "reciprocal"))
    workers = thread_cap() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_job, jobs))
    return [_sweep_job(j) for j in jobs]


def eigenvalue_crossing_speed(n: int, ell: int) -> float:
    """d eps_r^(ell) / dx at its root (kappa = r0 = 1)."""
    x = bifurcation_value(n, ell).x
    return 2.0 * (n - 1) * 2.0 * (x - 1.0) / (1.0 + x) ** 3 / (4.0 * math.pi)


def mode_quartic_coefficients(n: int, ell: int, n_angles: int = 8) -> dict[str, float]:
    """Effective D_k quartic coefficients of the critical r-mode ell.

    The quartic form on the critical plane is corrected for the cubic
    couplings into the rest of the slice (completing the square), then fitted
    to alpha*N**2 + beta*P with N = |w|**2 and P = Re(w**k), k = n / gcd(n, ell).
    Only meaningful when k = 4.
    """
    s = RingSpec.from_x(n, bifurcation_value(n, ell).x)
    X = mode_polar(s, ell, "r", "alpha")
    Y = mode_polar(s, ell, "r", "beta")
    H = hessian_closed_form(s)
    rest = [b for b in slice_basis(s)
            if not (np.allclose(b, X) or np.allclose(b, Y))]
    Hb = np.array([[bi @ H @ bj for bj in rest] for bi in rest])
    k = n // math.gcd(n, ell)
    phis = np.linspace(0.0, math.pi / 2.0, n_angles, endpoint=False)
    eff = []
    for phi in phis:
        a = math.cos(phi) * X + math.sin(phi) * Y
        q = directional_derivative(4, s, [a] * 4) / 24.0
        g = np.array([directional_derivative(3, s, [a, a, b]) / 2.0 for b in rest])
        eff.append(q - 0.25 * g @ np.linalg.solve(Hb, g))
    design = np.column_stack([np.ones_like(phis), np.cos(k * phis)])
    (alpha, beta), *_ = np.linalg.lstsq(design, np.array(eff), rcond=None)
    return {"n": n, "ell": ell, "k": k, "x_star": s.x, "alpha": float(alpha), "beta": float(beta)}


# --- normal forms ------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormSpec:
    """f_u = -u N + alpha N^2 + beta Re((x+iy)^k) for k >= 3; for k = 2,
    f_u = -u x^2 + alpha x^4 + beta y^2."""

    k: int
    alpha: float
    beta: float
    u: float

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DomainError("k must be at least 2")
        if self.beta == 0.0:
            raise DomainError("beta = 0 is a degenerate normal form")
        if self.k == 2 and self.alpha == 0.0:
            raise DomainError("alpha = 0 is a degenerate normal form for k = 2")
        if self.k == 4 and abs(self.alpha) == abs(self.beta):
            raise DomainError("|alpha| = |beta| is degenerate for k = 4")

    def value(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if self.k == 2:
            return -self.u * x**2 + self.alpha * x**4 + self.beta * y**2
        w = x + 1j * y
        N = x * x + y * y
        return -self.u * N + self.alpha * N * N + self.beta * np.real(w**self.k)

    def hessian(self, x: float, y: float) -> np.ndarray:
        if self.k == 2:
            return np.array([[-2 * self.u + 12 * self.alpha * x * x, 0.0], [0.0, 2 * self.beta]])
        N = x * x + y * y
        w = complex(x, y)
        hp = self.k * (self.k - 1) * w ** (self.k - 2)
        hxx = -2 * self.u + self.alpha * (4 * N + 8 * x * x) + self.beta * hp.real
        hyy = -2 * self.u + self.alpha * (4 * N + 8 * y * y) - self.beta * hp.real
        hxy = self.alpha * 8 * x * y - self.beta * hp.imag
        return np.array([[hxx, hxy], [hxy, hyy]])

    @property
    def bifurcation_type(self) -> str:
        if self.k == 3 or (self.k == 4 and abs(self.alpha) < abs(self.beta)):
            return "transcritical"
        return "pitchfork"


@dataclass
class CriticalPoint:
    x: float
    y: float
    kind: str  # minimum, maximum, saddle or degenerate
    value: float


@dataclass
class NormalFormResult:
    spec: NormalFormSpec
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray  # values[i, j] at (xs[j], ys[i])
    critical_points: list[CriticalPoint]
    branch_types: int
    bifurcation_type: str


def _kind(h: np.ndarray, tol: float = 1e-12) -> str:
    ev = np.linalg.eigvalsh(h)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.any(np.abs(ev) <= tol * scale):
        return "degenerate"
    if np.all(ev > 0):
        return "minimum"
    if np.all(ev < 0):
        return "maximum"
    return "saddle"


def _radial_roots(spec: NormalFormSpec, c: float) -> list[float]:
    # g'(r)/r = -2u + 4 alpha r^2 + c k beta r^(k-2) on the ray where cos(k phi) = c
    k = spec.k
    coeffs = np.zeros(max(k - 1, 3))
    coeffs[0] = -2.0 * spec.u
    coeffs[2] += 4.0 * spec.alpha
    coeffs[k - 2] += c * k * spec.beta
    roots = np.roots(coeffs[::-1]) if np.any(coeffs[1:]) else np.array([])
    return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12 and r.real > 1e-14)


def normal_form_critical_points(spec: NormalFormSpec, radius: float) -> list[CriticalPoint]:
    pts = [(0.0, 0.0)]
    if spec.k == 2:
        if spec.u / spec.alpha > 0:
            a = math.sqrt(spec.u / (2.0 * spec.alpha))
            pts += [(a, 0.0), (-a, 0.0)]
    else:
        for j in range(2 * spec.k):
            phi = math.pi * j / spec.k
            c = 1.0 if j % 2 == 0 else -1.0
            pts += [(r * math.cos(phi), r * math.sin(phi)) for r in _radial_roots(spec, c)]
    out = []
    for x, y in pts:
        if math.hypot(x, y) <= radius:
            out.append(CriticalPoint(x, y, _kind(spec.hessian(x, y)), float(spec.value(x, y))))
    return out


def normal_form_contours(spec: NormalFormSpec, grid: int = 101, extent: float | None = None) -> NormalFormResult:
    """Samples of f_u on a square grid and its critical points in the inscribed disc.

    The default half-width 3*sqrt(|u|) keeps the small-amplitude branches in
    view and excludes critical points of the truncated form far from 0.
    """
    if grid < 2:
        raise DomainError("grid needs at least 2 points per side")
    if extent is None:
        extent = 3.0 * math.sqrt(abs(spec.u)) if spec.u != 0.0 else 1.0
    xs = np.linspace(-extent, extent, grid)
    X, Y = np.meshgrid(xs, xs)
    values = spec.value(X, Y)
    crit = normal_form_critical_points(spec, extent)
    nontrivial = {(p.kind, round(math.hypot(p.x, p.y), 12)) for p in crit if (p.x, p.y) != (0.0, 0.0)}
    return NormalFormResult(spec, xs, xs.copy(), values, crit, len(nontrivial), spec.bifurcation_type)


# --- perturbation gallery ----------------------------------------------------


class Branch(enum.Enum):
    M = "m"
    M_PRIME = "m_prime"


def gallery_phase(n: int, ell: int, branch: Branch | str) -> float:
    """Phase that makes the mode-ell perturbation fixed by m (0) or m' (-pi*ell/n)."""
    branch = Branch(branch)
    if not 2 <= ell <= n // 2:
        raise DomainError(f"mode {ell} outside 2..{n // 2}")
    k = n // math.gcd(n, ell)
    if branch is Branch.M_PRIME:
        if k % 2:
            raise DomainError("for odd k the two reflections are conjugate: no separate m' branch")
        if 2 * ell == n:
            # the mode is one-dimensional and the m' phase would zero it out
            raise DomainError("mode n/2 has a single branch (m)")
        return -math.pi * ell / n
    return 0.0


def stabilizer(n: int, ell: int, branch: Branch | str) -> list[DihedralElement]:
    """The D_{gcd(n, ell)} subgroup fixing the branch's perturbation."""
    branch = Branch(branch)
    g = math.gcd(n, ell)
    k = n // g
    refl = DihedralElement.m(n) if branch is Branch.M else DihedralElement.m_prime(n)
    rots = [DihedralElement.c(n, k * q) for q in range(g)]
    return rots + [r.compose(refl) for r in rots]


def perturbation_gallery(
    n: int,
    ell: int,
    eps: float,
    branch: Branch | str = Branch.M,
    r0: float = 1.0,
    lam: float = 0.0,
    kappa: float = 1.0,
) -> VortexConfig:
    """Ring with radii r0 + eps*cos(2 pi ell j / n + phi), phi from the branch."""
    phi = gallery_phase(n, ell, branch)
    if not abs(eps) < r0:
        raise DomainError("perturbation must be smaller than the ring radius")
    s = RingSpec(n, kappa, r0, lam)
    th = s.angles()
    j = np.arange(1, n + 1)
    r = r0 + eps * np.cos(2.0 * math.pi * ell * j / n + phi)
    return VortexConfig(lam, r * np.exp(1j * th), np.full(n, float(kappa)))
