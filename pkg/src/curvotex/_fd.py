"""Central finite differences with Richardson extrapolation.

Everything here works on plain callables of numpy arrays; the physics modules
decide step sizes and extrapolation depth.
"""

from __future__ import annotations

import itertools
import math
import warnings
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalWarning

Scalar = Callable[[float], float]


@lru_cache(maxsize=None)
def stencil_weights(order: int, half_width: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the symmetric (2*half_width+1)-point stencil."""
    offsets = np.arange(-half_width, half_width + 1)
    if order >= offsets.size:
        raise ValueError("stencil too narrow for requested derivative order")
    vander = np.vander(offsets, offsets.size, increasing=True).T.astype(float)
    rhs = np.zeros(offsets.size)
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(vander, rhs)


def _leading_error_order(order: int, npoints: int) -> int:
    p = npoints - order
    return p + (p % 2)


def richardson(estimates: Sequence[float], p: int, ratio: float = 2.0) -> tuple[float, float]:
    """Extrapolate estimates taken at h, h/ratio, h/ratio**2, ...

    Error terms are assumed to be even powers starting at ``p``. Returns the
    extrapolated value and the magnitude of the last correction, which serves
    as an error estimate.
    """
    row = [float(e) for e in estimates]
    err = math.inf
    q = p
    while len(row) > 1:
        fac = ratio**q
        nxt = [(fac * row[i + 1] - row[i]) / (fac - 1.0) for i in range(len(row) - 1)]
        err = abs(nxt[-1] - row[-1])
        row = nxt
        q += 2
    return row[0], err


def derivative(
    g: Scalar,
    order: int,
    h: float,
    levels: int = 2,
    half_width: int = 2,
) -> tuple[float, float]:
    """k-th derivative of a scalar function of one variable at 0."""
    if h <= 0.0 or not math.isfinite(h):
        raise ValueError("step must be positive and finite")
    offsets, weights = stencil_weights(order, half_width)
    cache: dict[float, float] = {}

    def at(t: float) -> float:
        if t not in cache:
            cache[t] = g(t)
        return cache[t]

    estimates = []
    for lvl in range(levels + 1):
        step = h / 2.0**lvl
        if step < 1e-12:
            raise FloatingPointError("finite-difference step underflow")
        acc = math.fsum(w * at(o * step) for o, w in zip(offsets, weights) if w != 0.0)
        estimates.append(acc / step**order)
    p = _leading_error_order(order, offsets.size)
    return richardson(estimates, p)


def directional(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    dirs: Sequence[np.ndarray],
    h: float,
    levels: int = 2,
    rtol_warn: float = 1e-4,
    scale: float = 0.0,
) -> float:
    """Symmetric multilinear derivative d^k f(x0)[dirs[0], ..., dirs[k-1]].

    Mixed derivatives are reduced to one-dimensional ones with the
    polarization identity, so only pure directional derivatives are ever
    differenced. A NumericalWarning is issued when the extrapolation error
    exceeds ``rtol_warn * max(|value|, scale)``; pass a typical magnitude as
    ``scale`` so that values which vanish by symmetry do not trigger it.
    """
    k = len(dirs)
    dirs = [np.asarray(d, dtype=float) for d in dirs]
    x0 = np.asarray(x0, dtype=float)

    def pure(v: np.ndarray) -> tuple[float, float]:
        return derivative(lambda t: f(x0 + t * v), k, h, levels)

    if all(np.array_equal(d, dirs[0]) for d in dirs[1:]):
        value, err = pure(dirs[0])
    else:
        total = 0.0
        err = 0.0
        seen: dict[bytes, tuple[float, float]] = {}
        for signs in itertools.product((1.0, -1.0), repeat=k):
            v = sum(s * d for s, d in zip(signs, dirs))
            key = np.round(v, 15).tobytes()
            if key not in seen:
                # d^k along -v equals (-1)^k times d^k along v
                neg = np.round(-v, 15).tobytes()
                if neg in seen:
                    pv, pe = seen[neg]
                    seen[key] = ((-1.0) ** k * pv, pe)
                else:
                    seen[key] = pure(v)
            pv, pe = seen[key]
            total += math.prod(signs) * pv
            err += pe
        norm = 2.0**k * math.factorial(k)
        value, err = total / norm, err / norm
    ref = max(abs(value), scale, 1e-300)
    if err > rtol_warn * ref:
        warnings.warn(
            f"extrapolated order-{k} derivative uncertain: est. error {err:.3g} on {value:.6g}",
            NumericalWarning,
            stacklevel=2,
        )
    return value


def hessian(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    h: float | np.ndarray,
    levels: int = 2,
) -> np.ndarray:
    """Symmetrized Hessian by central differences with Richardson extrapolation.

    ``h`` may be a per-coordinate step vector.
    """
    x0 = np.asarray(x0, dtype=float)
    m = x0.size
    steps = np.broadcast_to(np.asarray(h, dtype=float), (m,))
    out = np.empty((m, m))
    eye = np.eye(m)
    for i in range(m):
        ei = eye[i] * steps[i]
        out[i, i] = derivative(lambda t: f(x0 + t * ei), 2, 1.0, levels)[0]
        for j in range(i + 1, m):
            ej = eye[j] * steps[j]
            ests = []
            for lvl in range(levels + 1):
                s = 0.5**lvl
                val = (
                    f(x0 + s * (ei + ej))
                    - f(x0 + s * (ei - ej))
                    - f(x0 - s * (ei - ej))
                    + f(x0 - s * (ei + ej))
                ) / (4.0 * s * s)
                ests.append(val)
            out[i, j] = out[j, i] = richardson(ests, 2)[0]
    # undo the unit-step parametrization
    out /= np.outer(steps, steps)
    return 0.5 * (out + out.T)


def gradient(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    h: float | np.ndarray,
    levels: int = 2,
) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    m = x0.size
    steps = np.broadcast_to(np.asarray(h, dtype=float), (m,))
    eye = np.eye(m)
    out = np.empty(m)
    for i in range(m):
        ei = eye[i] * steps[i]
        out[i] = derivative(lambda t: f(x0 + t * ei), 1, 1.0, levels)[0] / steps[i]
    return out


def jacobian(
    F: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    h: float,
    levels: int = 2,
) -> np.ndarray:
    """Jacobian of a vector field, columns by central differences + Richardson."""
    x0 = np.asarray(x0, dtype=float)
    m = x0.size
    cols = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        ests = []
        for lvl in range(levels + 1):
            s = 0.5**lvl
            ests.append((F(x0 + s * e) - F(x0 - s * e)) / (2.0 * s * h))
        row = ests
        q = 2
        while len(row) > 1:
            fac = 2.0**q
            row = [(fac * row[k + 1] - row[k]) / (fac - 1.0) for k in range(len(row) - 1)]
            q += 2
        cols.append(row[0])
    return np.column_stack(cols)
