import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvotex import geometry as geo
from curvotex.errors import CollisionError, DomainError, UnsupportedGeometryError
from curvotex.geometry import GreensChoice, SurfaceParam

CHOICES = list(GreensChoice)

lams = st.floats(-2.0, 2.0, allow_nan=False)


def admissible(z, lam, margin=0.9):
    # shrink z into the chart if needed
    if lam < 0 and abs(z) >= margin / math.sqrt(-lam):
        z = z / abs(z) * margin / math.sqrt(-lam) * 0.5
    return z


@st.composite
def points(draw):
    lam = draw(lams)
    z = complex(draw(st.floats(-3, 3)), draw(st.floats(-3, 3)))
    return admissible(z, lam), lam


def test_surface_param():
    p = SurfaceParam(-0.25)
    assert p.curvature == -1.0
    assert p.chart_radius_limit == pytest.approx(2.0)
    assert p.contains(1.9) and not p.contains(2.0)
    assert SurfaceParam(1.0).chart_radius_limit == math.inf


@pytest.mark.parametrize("z, lam, expected", [(0, 3.0, 1.0), (1, -0.5, 0.5), (1 + 1j, 2.0, 5.0)])
def test_sigma(z, lam, expected):
    assert geo.sigma(z, lam) == pytest.approx(expected)


def test_sigma_outside_chart():
    with pytest.raises(DomainError):
        geo.sigma(2.0, -0.25)


@pytest.mark.parametrize(
    "r, lam, expected",
    [(1.0, 0.0, 1.0), (1.0, 1.0, math.pi / 4), (0.5, -1.0, math.atanh(0.5))],
)
def test_geodesic_radius(r, lam, expected):
    assert geo.geodesic_radius(r, lam) == pytest.approx(expected, rel=1e-12)


def test_geodesic_radius_outside_disc():
    with pytest.raises(DomainError):
        geo.geodesic_radius(1.0, -1.0)


@given(r=st.floats(0.0, 3.0), lam=st.floats(-1.0, 1.0))
def test_geodesic_radius_matches_series(r, lam):
    if abs(r * r * lam) > 0.5:
        return
    x = r * r * lam
    series = r * sum((-x) ** k / (2 * k + 1) for k in range(60))
    assert geo.geodesic_radius(r, lam) == pytest.approx(series, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("a, lam, expected", [(1.0, 0.0, 1.0), (math.pi / 4, 1.0, 1.0)])
def test_chart_radius(a, lam, expected):
    assert geo.chart_radius(a, lam) == pytest.approx(expected, rel=1e-12)


def test_chart_radius_branch():
    with pytest.raises(DomainError):
        geo.chart_radius(2.0, 1.0)


@given(r=st.floats(0.0, 5.0), lam=st.floats(-1.0, 1.0))
def test_chart_radius_round_trip(r, lam):
    if lam < 0 and r * math.sqrt(-lam) >= 0.99:
        return
    a = geo.geodesic_radius(r, lam)
    assert geo.chart_radius(a, lam) == pytest.approx(r, rel=1e-12, abs=1e-14)


def test_antipode_examples():
    assert geo.antipode(1, 1.0) == pytest.approx(-1)
    # -1 / conj(i) = -1 / (-i) = -i
    assert geo.antipode(1j, 1.0) == pytest.approx(-1j)
    with pytest.raises(UnsupportedGeometryError):
        geo.antipode(1, 0.0)
    with pytest.raises(DomainError):
        geo.antipode(0, 1.0)


@given(re=st.floats(-5, 5), im=st.floats(-5, 5), lam=st.floats(0.1, 3.0))
def test_antipode_involution(re, im, lam):
    z = complex(re, im)
    if abs(z) < 1e-3:
        return
    assert geo.antipode(geo.antipode(z, lam), lam) == pytest.approx(z, rel=1e-12)


def test_embed_examples():
    assert tuple(geo.embed(0, 1.0)) == (0.0, 0.0, 0.0)
    assert tuple(geo.embed(1, 1.0)) == pytest.approx((0.5, 0.0, 0.5))
    assert tuple(geo.embed(1, 0.0)) == pytest.approx((1.0, 0.0, 1.0))


@given(points())
def test_embedding_lies_on_surface(pt):
    z, lam = pt
    q = geo.embed(z, lam)
    assert abs(geo.casimir(q, lam)) < 1e-12 * max(1.0, abs(z) ** 2)


def test_casimir_examples():
    assert geo.casimir(geo.AmbientPoint(0, 0, 1), 1.0) == 0.0
    assert geo.casimir(geo.AmbientPoint(1, 0, 0), 7.0) == 1.0


def test_killing_fields_examples():
    x1, x2, x3 = geo.killing_fields(0j, 0.7)
    assert x1 == pytest.approx([0, 0.5]) and x2 == pytest.approx([-0.5, 0]) and x3 == pytest.approx([0, 0])
    assert geo.killing_fields(1 + 0j, 0.3)[2] == pytest.approx([0, 1])
    for z in (0.3 + 2j, -1 - 1j):
        x1, x2, _ = geo.killing_fields(z, 0.0)
        assert x1 == pytest.approx([0, 0.5]) and x2 == pytest.approx([-0.5, 0])


def test_killing_fields_preserve_metric():
    # as complex fields v: holomorphic, and Re v'(z) = v . grad log sigma
    lam, z, h = 0.6, 0.4 - 0.3j, 1e-6
    for k in range(3):
        def vec(w):
            v = geo.killing_fields(w, lam)[k]
            return complex(v[0], v[1])
        # holomorphic: dv/dz from x and y derivatives agree
        dx = (vec(z + h) - vec(z - h)) / (2 * h)
        dy = (vec(z + 1j * h) - vec(z - 1j * h)) / (2j * h)
        assert abs(dx - dy) < 1e-8
        # conformal factor transported: xi(log sigma) = Re(dv/dz)
        grad = (math.log(geo.sigma(z + h, lam)) - math.log(geo.sigma(z - h, lam))) / (2 * h)
        grady = (math.log(geo.sigma(z + 1j * h, lam)) - math.log(geo.sigma(z - 1j * h, lam))) / (2 * h)
        v = vec(z)
        assert v.real * grad + v.imag * grady == pytest.approx(dx.real, abs=1e-8)


def test_momentum_map_examples():
    assert geo.momentum_map(0, 1.0) == (0, 0)
    j, u = geo.momentum_map(1, 1.0)
    assert j == pytest.approx(0.5) and u == pytest.approx(0.5)


@given(points())
def test_momentum_map_is_embedding(pt):
    z, lam = pt
    j, u = geo.momentum_map(z, lam)
    q = geo.embed(z, lam)
    assert (j.real, j.imag, u) == pytest.approx(tuple(q), rel=1e-14, abs=1e-15)


def test_greens_examples():
    for c in CHOICES:
        assert geo.greens(c, 2, 0, 0.0) == pytest.approx(math.log(4))
    assert geo.greens("background", 1, -1, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert geo.greens("antipodal", 1, 1j, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_greens_errors():
    with pytest.raises(CollisionError):
        geo.greens("pole", 1j, 1j, 0.0)
    with pytest.raises(CollisionError):
        geo.greens("antipodal", -1.0, 1.0, 1.0)


@settings(max_examples=60)
@given(points(), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_greens_symmetry_and_rotation(pt, wr, wi, theta):
    z, lam = pt
    w = admissible(complex(wr, wi), lam)
    if abs(z - w) < 1e-3:
        return
    if lam > 0 and abs(1 + lam * z * w.conjugate()) < 1e-3:
        return
    rot = cmath.exp(1j * theta)
    for c in CHOICES:
        g = geo.greens(c, z, w, lam)
        assert geo.greens(c, w, z, lam) == pytest.approx(g, rel=1e-12, abs=1e-12)
        assert geo.greens(c, rot * z, rot * w, lam) == pytest.approx(g, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("lam", [-0.4, 0.0, 0.5, 2.0])
def test_laplacian_oracle(lam):
    w = 0.2 - 0.1j
    for z in (0.7 + 0.4j, -0.5 + 0.3j, 1.1j):
        if lam < 0 and abs(z) >= 0.9 / math.sqrt(-lam):
            continue
        bg = geo.laplace_beltrami(lambda q: geo.greens("background", q, w, lam), z, lam)
        pole = geo.laplace_beltrami(lambda q: geo.greens("pole", q, w, lam), z, lam)
        logs = geo.laplace_beltrami(lambda q: -math.log(geo.sigma(q, lam)), z, lam)
        assert bg == pytest.approx(-4 * lam, abs=1e-6)
        assert pole == pytest.approx(0.0, abs=1e-6)
        assert logs == pytest.approx(-4 * lam, abs=1e-6)


def test_laplacian_stencil_outside_chart():
    with pytest.raises(DomainError):
        geo.laplace_beltrami(lambda q: 0.0, 0.99999, -1.0, h=1e-3)


def test_greens_choice_parse():
    assert GreensChoice.parse("Background") is GreensChoice.BACKGROUND
    assert GreensChoice.parse("pole_at_infinity") is GreensChoice.POLE_AT_INFINITY
    with pytest.raises(ValueError):
        GreensChoice.parse("nope")
