import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvotex import _fd
from curvotex.errors import DomainError, EquatorError
from curvotex.geometry import GreensChoice
from curvotex.ring import RingSpec, make_ring
from curvotex.spectral import (
    Kind,
    Part,
    augmented_polar,
    dJ_on_modes,
    eps1prime,
    fourier_vector,
    hessian_closed_form,
    hessian_numerical,
    mode_eigenvalues,
    mode_eigenvalues_alt,
    mode_eigenvalues_alt_as_printed,
    mode_polar,
    mode_spectrum,
    slice_basis,
    trig_identity,
    trig_sum,
    zeta_prime,
)
from curvotex.vortex import momentum

GRID = [(n, x) for n in range(3, 11) for x in (-0.5, 0.0, 0.5)]


def all_modes(n):
    for ell in range(n // 2 + 1):
        for kind in Kind:
            for part in Part:
                if part is Part.BETA and (ell == 0 or 2 * ell == n):
                    continue
                yield ell, kind, part


def rayleigh(h, v):
    return float(v @ h @ v / (v @ v))


def test_fourier_vector_layout():
    v = fourier_vector(4, 1, "theta", "alpha", r0=2.0)
    np.testing.assert_allclose(v.components[:4], 0)
    np.testing.assert_allclose(v.components[4:], np.cos(2 * math.pi * np.arange(1, 5) / 4) / 2.0)
    np.testing.assert_allclose(v.unit()[4:], np.cos(2 * math.pi * np.arange(1, 5) / 4), atol=1e-15)
    for ell in (0, 3):
        assert not np.any(fourier_vector(6, ell, "r", "beta").components)
    with pytest.raises(DomainError):
        fourier_vector(6, 4, "r", "alpha")


@pytest.mark.parametrize("n", [4, 5, 8])
def test_fourier_vectors_orthogonal(n):
    vs = [fourier_vector(n, *m, r0=0.7).unit() for m in all_modes(n)]
    assert len(vs) == 2 * n
    gram = np.array([[a @ b for b in vs] for a in vs])
    np.testing.assert_allclose(gram - np.diag(np.diag(gram)), 0, atol=1e-12)
    assert np.all(np.diag(gram) > 0)


@given(st.integers(3, 12), st.integers(0, 2**31))
def test_reconstruction(n, seed):
    dr = np.random.default_rng(seed).normal(size=n)
    j = np.arange(1, n + 1)
    zeta = np.array([np.sum(np.exp(-2j * math.pi * ell * j / n) * dr) for ell in range(n)])
    back = np.array([np.sum(np.exp(2j * math.pi * np.arange(n) * jj / n) * zeta) / n for jj in j])
    np.testing.assert_allclose(back.real, dr, atol=1e-12)
    # the alpha/beta vectors are the real and imaginary parts of zeta
    for ell in range(n // 2 + 1):
        a = fourier_vector(n, ell, "r", "alpha").components[:n] @ dr
        b = fourier_vector(n, ell, "r", "beta").components[:n] @ dr
        assert a + 1j * b == pytest.approx(zeta[ell], abs=1e-12)


def test_hessian_examples():
    h5 = hessian_closed_form(RingSpec(5))
    assert h5[5, 5] == pytest.approx(1 / math.pi)
    h4 = hessian_closed_form(RingSpec(4))
    assert h4[0, 1] == pytest.approx(1 / (4 * math.pi))


@pytest.mark.parametrize("n, x", GRID)
def test_hessian_closed_form_matches_numerical(n, x):
    s = RingSpec.from_x(n, x, r0=0.8, kappa=1.1)
    exact = hessian_closed_form(s)
    num = hessian_numerical(s)
    scale = np.max(np.abs(exact))
    assert np.max(np.abs(num - exact)) / scale < 1e-7


@pytest.mark.parametrize("n, x", [(5, 0.3), (8, -0.4)])
def test_numerical_hessian_structure(n, x):
    h = hessian_numerical(RingSpec.from_x(n, x))
    assert np.max(np.abs(h[:n, n:])) < 1e-8
    for blk in (h[:n, :n], h[n:, n:]):
        for j in range(n):
            np.testing.assert_allclose(np.roll(blk[0], j), blk[j], atol=1e-8)


@pytest.mark.parametrize("n, x", [(4, 0.3), (7, 0.0), (9, -0.6), (6, 1.7)])
def test_pole_hessian_oracle(n, x):
    s = RingSpec.from_x(n, x, r0=1.2)
    exact = hessian_closed_form(s, "pole")
    num = hessian_numerical(s, "pole")
    assert np.max(np.abs(num - exact)) / np.max(np.abs(exact)) < 1e-7
    for ell in range(1, n // 2 + 1):
        er, et = mode_eigenvalues_alt(s, ell)
        assert rayleigh(num, mode_polar(s, ell, "r", "alpha")) == pytest.approx(er, rel=1e-7, abs=1e-9)
        assert rayleigh(num, mode_polar(s, ell, "theta", "alpha")) == pytest.approx(et, rel=1e-7)


def test_pole_printed_eigenvalues_only_agree_on_plane():
    s0, s1 = RingSpec.from_x(7, 0.0), RingSpec.from_x(7, 0.4)
    for ell in range(4):
        assert mode_eigenvalues_alt(s0, ell) == pytest.approx(mode_eigenvalues(s0, ell))
        assert mode_eigenvalues_alt_as_printed(s0, ell) == pytest.approx(mode_eigenvalues(s0, ell))
    assert mode_eigenvalues_alt(s0, 3)[0] == pytest.approx(0.0, abs=1e-15)
    assert mode_eigenvalues_alt_as_printed(s1, 2)[0] != pytest.approx(mode_eigenvalues_alt(s1, 2)[0])


@pytest.mark.parametrize("n, ell, expected", [(5, 0, 4.0), (5, 2, -2.0)])
def test_trig_identity_examples(n, ell, expected):
    assert trig_identity(n, ell) == pytest.approx(expected)
    assert trig_sum(n, ell) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n", list(range(2, 51)))
def test_trig_identity_against_direct_sum(n):
    for ell in range(n + 1):
        assert trig_sum(n, ell) == pytest.approx(trig_identity(n, ell), abs=1e-9)


def test_trig_identity_range():
    with pytest.raises(DomainError):
        trig_identity(5, 6)
    with pytest.raises(DomainError):
        trig_identity(5, -1)


def test_mode_eigenvalue_examples():
    er, et = mode_eigenvalues(RingSpec(7), 3)
    assert er == pytest.approx(0.0, abs=1e-15)
    assert et == pytest.approx(12 / (4 * math.pi))
    with pytest.raises(DomainError):
        mode_eigenvalues(RingSpec(7), 4)


@pytest.mark.parametrize("n, x", GRID)
def test_mode_one_formula(n, x):
    s = RingSpec.from_x(n, x, r0=1.3, kappa=0.8)
    er = mode_eigenvalues(s, 1)[0]
    expected = (n - 1) * s.kappa**2 * s.sigma_tilde**2 / (4 * math.pi * s.r0**2 * s.sigma**2)
    assert er == pytest.approx(expected, rel=1e-12, abs=1e-15)
    assert er >= 0


@pytest.mark.parametrize("n, x", GRID)
def test_rayleigh_quotients(n, x):
    s = RingSpec.from_x(n, x, r0=0.9, kappa=1.2)
    h = hessian_closed_form(s)
    for ell, kind, part in all_modes(n):
        v = mode_polar(s, ell, kind, part)
        er, et = mode_eigenvalues(s, ell)
        want = er if kind is Kind.R else et
        assert rayleigh(h, v) == pytest.approx(want, rel=1e-9, abs=1e-12)
        # eigenvector, not just a matching quotient
        np.testing.assert_allclose(h @ v, want * v, atol=1e-9 * max(1.0, abs(want)))


@pytest.mark.parametrize("n, x", GRID)
def test_eps_theta_positive(n, x):
    s = RingSpec.from_x(n, x)
    for ell in range(1, n // 2 + 1):
        assert mode_eigenvalues(s, ell)[1] > 0


@pytest.mark.parametrize("n, x", GRID)
def test_least_radial_eigenvalue_at_half(n, x):
    s = RingSpec.from_x(n, x)
    er = [mode_eigenvalues(s, ell)[0] for ell in range(1, n // 2 + 1)]
    assert int(np.argmin(er)) + 1 == n // 2


def test_dJ_examples():
    d = dJ_on_modes(RingSpec(4))
    # d/dr (r^2 / sigma) = 2 r / sigma^2, so this is 2n, not n
    assert abs(d[(0, Kind.R)][0]) < 1e-14 and d[(0, Kind.R)][1] == pytest.approx(8.0)
    assert abs(d[(2, Kind.R)][0]) < 1e-14 and abs(d[(2, Kind.R)][1]) < 1e-14
    s = RingSpec.from_x(6, 0.4, r0=0.7)
    d = dJ_on_modes(s)
    assert d[(1, Kind.R)][0] == pytest.approx(6 * s.sigma_tilde / s.sigma**2)
    assert d[(1, Kind.THETA)][0] == pytest.approx(6j / s.sigma)
    for key, (a, b) in d.items():
        if key not in {(0, Kind.R), (1, Kind.R), (1, Kind.THETA)}:
            assert abs(a) < 1e-12 and abs(b) < 1e-12


@pytest.mark.parametrize("n, x", [(4, 0.0), (5, 0.3), (7, -0.5)])
def test_dJ_matches_finite_differences(n, x):
    s = RingSpec.from_x(n, x, r0=0.9)
    base = make_ring(s)
    th0 = s.angles()

    def jm(p):
        z = (s.r0 + p[:n]) * np.exp(1j * (th0 + p[n:]))
        j, ju = momentum(base.with_positions(z))
        return np.array([j.real, j.imag, ju])

    d = dJ_on_modes(s)
    for ell in range(n // 2 + 1):
        for kind in Kind:
            parts = []
            for part in Part:
                v = mode_polar(s, ell, kind, part)
                g = np.array([_fd.derivative(lambda t, k=k: jm(t * v)[k], 1, 1e-3)[0] for k in range(3)])
                parts.append(g)
            first = complex(parts[0][0], parts[0][1]) + 1j * complex(parts[1][0], parts[1][1])
            second = parts[0][2] + 1j * parts[1][2]
            assert abs(first - d[(ell, kind)][0]) < 1e-9
            assert abs(second - d[(ell, kind)][1]) < 1e-9


@pytest.mark.parametrize("n, dim", [(4, 4), (7, 10), (10, 16)])
def test_slice_dimension(n, dim):
    assert len(slice_basis(RingSpec.from_x(n, 0.2))) == dim == 2 * n - 4


@pytest.mark.parametrize("n, x", GRID)
def test_slice_annihilated_by_dJ(n, x):
    from curvotex.spectral import _momentum_derivative

    s = RingSpec.from_x(n, x, r0=1.1)
    basis = slice_basis(s)
    for v in basis:
        a, b = _momentum_derivative(s, v)
        assert abs(a) < 1e-10 and abs(b) < 1e-10
    assert np.linalg.matrix_rank(np.array(basis)) == len(basis)


def test_slice_equator():
    with pytest.raises(EquatorError):
        slice_basis(RingSpec.from_x(5, 1.0))


def test_eps1prime_examples():
    assert eps1prime(RingSpec(7)) == pytest.approx(21 / (2 * math.pi))
    assert eps1prime(RingSpec.from_x(7, 1.0)) == 0.0
    sp = mode_spectrum(RingSpec.from_x(7, 1.0))
    assert not sp.eps1prime_relevant
    assert "eps1prime" not in dict(sp.relevant)


@pytest.mark.parametrize("n, x", GRID)
def test_eps1prime_is_scalar_on_v1prime(n, x):
    s = RingSpec.from_x(n, x, r0=0.8, kappa=1.3)
    h = hessian_closed_form(s)
    u, v = zeta_prime(s)
    e = eps1prime(s)
    assert u @ h @ u == pytest.approx(e, rel=1e-9, abs=1e-12)
    assert v @ h @ v == pytest.approx(e, rel=1e-9, abs=1e-12)
    assert abs(u @ h @ v) < 1e-9 * max(1.0, e)


def test_pole_eps1prime_from_hessian():
    s = RingSpec.from_x(6, 0.35)
    h = hessian_closed_form(s, "pole")
    u, _ = zeta_prime(s)
    assert mode_spectrum(s, "pole").eps1prime == pytest.approx(u @ h @ u, rel=1e-12)


def test_mode_spectrum_fields():
    s = RingSpec.from_x(8, 0.1, r0=1.5, kappa=2.0)
    sp = mode_spectrum(s)
    assert len(sp.eps_r) == 5 and sp.eps_theta[0] == 0
    labels = [k for k, _ in sp.relevant]
    assert labels[0] == "eps1prime" and "eps_r[1]" not in labels and "eps_r[4]" in labels
    with pytest.raises(NotImplementedError):
        mode_spectrum(s, "antipodal")


def test_augmented_polar_zero_gradient():
    s = RingSpec.from_x(6, 0.4)
    f = augmented_polar(s, GreensChoice.BACKGROUND)
    g = _fd.gradient(f, np.zeros(12), 1e-3)
    assert np.max(np.abs(g)) < 1e-10
