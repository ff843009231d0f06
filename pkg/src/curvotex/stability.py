"""Linear stability of the regular ring and the points where it changes.

Everything here is expressed through the effective parameter x = lambda*r0**2;
the sign structure of the spectrum does not depend on kappa or r0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, EquatorError, NoRootError
from .geometry import GreensChoice
from .ring import RingSpec
from .spectral import EQUATOR_TOL, mode_eigenvalues, mode_eigenvalues_alt

DEGENERACY_TOL = 1e-9


class Classification(enum.Enum):
    STABLE = "Stable"
    LINEARLY_UNSTABLE = "LinearlyUnstable"
    DEGENERATE = "Degenerate"


@dataclass
class StabilityVerdict:
    classification: Classification
    failing_modes: list[int] = field(default_factory=list)
    degenerate_modes: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class BifurcationPoint:
    n: int
    ell: int
    x: float
    partner: float | None = None


@dataclass
class StabilityRange:
    """Stable/unstable intervals of log(1 + x) for one n."""

    n: int
    breakpoints: list[float]
    intervals: list[tuple[float, float, bool]]  # (lo, hi, stable)


def threshold(n: int) -> float:
    """K_n = floor(n^2/4) / (2(n-1)); strictly increasing for n >= 3."""
    if n < 2:
        raise DomainError("need n >= 2")
    return (n * n // 4) / (2.0 * (n - 1))


def _check_x(x: float) -> None:
    if not x > -1.0:
        raise DomainError("lambda * r0**2 must exceed -1")


def is_stable(n: int, x: float) -> bool:
    _check_x(x)
    return (1.0 + x * x) / (1.0 + x) ** 2 > threshold(n)


def is_stable_alt(n: int, x: float) -> bool:
    """Criterion for the Hamiltonian built on G = log|z - w|^2."""
    _check_x(x)
    return (1.0 - x) / (1.0 + x) > threshold(n)


def is_stable_alt_as_printed(n: int, x: float) -> bool:
    _check_x(x)
    return (1.0 + 5.0 * x * x / 6.0) / (1.0 + x) ** 2 > threshold(n)


def _root(k: float) -> float:
    # root <= 1 of (1-k) b^2 - 2 k b + (1-k) = 0, rationalized so k = 1 is harmless
    disc = 2.0 * k - 1.0
    if disc < 0.0:
        raise NoRootError("mode never degenerates for x in (-1, 1]")
    return (1.0 - k) / (k + math.sqrt(disc))


def b_n(n: int) -> float:
    """Value of x at which the ring first loses definiteness."""
    if n < 4:
        raise DomainError("b_n is defined for n >= 4")
    return _root(threshold(n))


def bifurcation_value(n: int, ell: int) -> BifurcationPoint:
    """Root of eps_r^(ell)(x) = 0 in (-1, 1], with its reciprocal when positive."""
    if not 2 <= ell <= n // 2:
        raise DomainError(f"mode {ell} outside 2..{n // 2}")
    x = _root(ell * (n - ell) / (2.0 * (n - 1)))
    return BifurcationPoint(n, ell, x, 1.0 / x if x > 0.0 else None)


def classify(
    n: int,
    x: float,
    tol: float = DEGENERACY_TOL,
    greens: GreensChoice | str = GreensChoice.BACKGROUND,
) -> StabilityVerdict:
    _check_x(x)
    if abs(x - 1.0) < EQUATOR_TOL:
        raise EquatorError("x = 1 puts the ring on the equator")
    greens = GreensChoice.parse(greens)
    if greens is GreensChoice.BACKGROUND:
        ev, first = mode_eigenvalues, 2
    elif greens is GreensChoice.POLE_AT_INFINITY:
        # only rotations about the pole survive, so l = 1 stays in play
        ev, first = mode_eigenvalues_alt, 1
    else:
        raise NotImplementedError("no closed-form spectrum for the counter-vortex Hamiltonian")
    s = RingSpec.from_x(n, x)
    failing, degenerate = [], []
    for ell in range(first, n // 2 + 1):
        e = ev(s, ell)[0]
        if abs(e) <= tol:
            degenerate.append(ell)
        elif e < 0.0:
            failing.append(ell)
    if failing:
        cls = Classification.LINEARLY_UNSTABLE
    elif degenerate:
        cls = Classification.DEGENERATE
    else:
        cls = Classification.STABLE
    return StabilityVerdict(cls, failing, degenerate)


def stability_range(n: int) -> StabilityRange:
    if n < 3:
        raise DomainError("need n >= 3")
    inf = math.inf
    if n == 3:
        return StabilityRange(n, [], [(-inf, inf, True)])
    b = b_n(n)
    lo = math.log1p(b)
    if 0.0 < b < 1.0:
        hi = math.log1p(1.0 / b)
        return StabilityRange(n, [lo, hi], [(-inf, lo, True), (lo, hi, False), (hi, inf, True)])
    return StabilityRange(n, [lo], [(-inf, lo, True), (lo, inf, False)])
